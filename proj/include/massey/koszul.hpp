#pragma once

// Monomial quotients k[x_1..x_n]/I: Koszul homology, polarization, minimal
// resolutions of k and the Serre bound on the Poincare series.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "massey/face_rings.hpp"

namespace massey {

using Exponent = std::vector<int>;

struct MonomialQuotient {
    int n_vars = 0;
    std::vector<Exponent> gens;  // minimal generators of I

    static MonomialQuotient make(int n, std::vector<Exponent> gens) {
        if (n < 0) throw Error(ErrorKind::InvalidInput, "negative variable count");
        for (const auto& g : gens) {
            if (static_cast<int>(g.size()) != n) throw Error(ErrorKind::InvalidInput, "exponent vector has the wrong length");
            for (int e : g)
                if (e < 0) throw Error(ErrorKind::InvalidInput, "negative exponent");
            if (std::all_of(g.begin(), g.end(), [](int e) { return e == 0; }))
                throw Error(ErrorKind::InvalidInput, "the unit monomial generates the whole ring");
        }
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        MonomialQuotient A;
        A.n_vars = n;
        for (const auto& g : gens) {
            bool redundant = false;
            for (const auto& h : gens)
                if (h != g && divides(h, g)) redundant = true;
            if (!redundant) A.gens.push_back(g);
        }
        return A;
    }

    static bool divides(const Exponent& a, const Exponent& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] > b[i]) return false;
        return true;
    }

    bool in_ideal(const Exponent& a) const {
        for (const auto& g : gens)
            if (divides(g, a)) return true;
        return false;
    }
    bool is_squarefree() const {
        for (const auto& g : gens)
            for (int e : g)
                if (e > 1) return false;
        return true;
    }
    /// Finite-dimensional iff every variable has a pure power in I.
    bool is_artinian() const {
        for (int i = 0; i < n_vars; ++i) {
            bool pure = false;
            for (const auto& g : gens) {
                int support = 0;
                for (int j = 0; j < n_vars; ++j)
                    if (g[j]) ++support;
                if (support == 1 && g[i]) pure = true;
            }
            if (!pure) return false;
        }
        return true;
    }
    /// Generators of degree one make the presentation non-minimal.
    bool is_minimally_presented() const {
        for (const auto& g : gens)
            if (std::accumulate(g.begin(), g.end(), 0) < 2) return false;
        return true;
    }

    int max_generator_degree() const {
        int g = 0;
        for (const auto& e : gens) g = std::max(g, std::accumulate(e.begin(), e.end(), 0));
        return g;
    }

    /// Monomials outside I (of degree <= max_degree when given), sorted by degree then
    /// lexicographically.
    std::vector<Exponent> standard_monomials(std::size_t cap = 100000, int max_degree = -1) const {
        if (max_degree < 0 && !is_artinian()) throw Error(ErrorKind::InvalidInput, "quotient is not finite-dimensional");
        int level = 0;
        std::set<Exponent> seen{Exponent(n_vars, 0)};
        std::vector<Exponent> frontier{Exponent(n_vars, 0)};
        while (!frontier.empty() && (max_degree < 0 || level < max_degree)) {
            ++level;
            std::vector<Exponent> next;
            for (const auto& a : frontier)
                for (int j = 0; j < n_vars; ++j) {
                    Exponent b = a;
                    ++b[j];
                    if (in_ideal(b) || seen.count(b)) continue;
                    seen.insert(b);
                    next.push_back(b);
                    if (seen.size() > cap) throw Error(ErrorKind::CapExceeded, "quotient dimension above the configured cap");
                }
            frontier = std::move(next);
        }
        std::vector<Exponent> out(seen.begin(), seen.end());
        std::sort(out.begin(), out.end(), [](const Exponent& a, const Exponent& b) {
            int da = std::accumulate(a.begin(), a.end(), 0), db = std::accumulate(b.begin(), b.end(), 0);
            return da != db ? da < db : a < b;
        });
        return out;
    }
};

/// k[x_1..x_n]/(x_1..x_n)^r
inline MonomialQuotient anr(int n, int r) {
    if (n < 1 || r < 2) throw Error(ErrorKind::InvalidInput, "A_{n,r} needs n >= 1 and r >= 2");
    std::vector<Exponent> gens;
    Exponent e(n, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == n - 1) {
            e[i] = left;
            gens.push_back(e);
            return;
        }
        for (int k = left; k >= 0; --k) {
            e[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, r);
    return MonomialQuotient::make(n, gens);
}

/// Stanley-Reisner quotient k[K].
inline MonomialQuotient face_ring(const SimplicialComplex& K) {
    std::vector<Exponent> gens;
    for (VSet s : K.minimal_nonfaces()) {
        Exponent e(K.m(), 0);
        for (int v : vertices_of(s)) e[v] = 1;
        gens.push_back(e);
    }
    return MonomialQuotient::make(K.m(), gens);
}

/// Standard polarization: x_i^a -> x_{i,1} ... x_{i,a}, with max(1, max exponent of x_i)
/// new variables per x_i, numbered consecutively.
struct Polarization {
    MonomialQuotient ring;
    std::vector<int> offset;  // first new variable of x_i
    SimplicialComplex complex;
};

inline Polarization polarize(const MonomialQuotient& A) {
    Polarization P;
    std::vector<int> width(A.n_vars, 1);
    for (const auto& g : A.gens)
        for (int i = 0; i < A.n_vars; ++i) width[i] = std::max(width[i], g[i]);
    int total = 0;
    for (int i = 0; i < A.n_vars; ++i) {
        P.offset.push_back(total);
        total += width[i];
    }
    std::vector<Exponent> gens;
    std::vector<VSet> nf;
    for (const auto& g : A.gens) {
        Exponent e(total, 0);
        VSet s = 0;
        for (int i = 0; i < A.n_vars; ++i)
            for (int k = 0; k < g[i]; ++k) {
                e[P.offset[i] + k] = 1;
                s |= VSet(1) << (P.offset[i] + k);
            }
        gens.push_back(e);
        nf.push_back(s);
    }
    P.ring = MonomialQuotient::make(total, gens);
    P.complex = SimplicialComplex::from_nonfaces(total, nf);
    return P;
}

inline SimplicialComplex polarization(const MonomialQuotient& A) { return polarize(A).complex; }

/// Koszul complex of a finite-dimensional monomial quotient as a DGA: basis x^a e_J,
/// cohomological degree -|J|, multidegree a + 1_J.
template <class F>
class KoszulModel {
public:
    using S = typename F::Scalar;
    using Vec = SparseVector<S>;

    KoszulModel(const F& f, const MonomialQuotient& A, std::size_t cap = 200000) : A_(A) {
        mons_ = A.standard_monomials(cap);
        const int n = A.n_vars;
        if (n > 20) throw Error(ErrorKind::CapExceeded, "too many variables for the Koszul complex");
        if (mons_.size() * (std::size_t(1) << n) > cap) throw Error(ErrorKind::CapExceeded, "Koszul complex above the configured cap");
        for (std::size_t k = 0; k < mons_.size(); ++k) mon_index_[mons_[k]] = k;
        using BE = typename Dga<F>::BasisElement;
        std::vector<BE> basis;
        for (std::size_t k = 0; k < mons_.size(); ++k)
            for (std::uint64_t J = 0; J < (std::uint64_t(1) << n); ++J) {
                Exponent aux = mons_[k];
                for (int j = 0; j < n; ++j)
                    if (J >> j & 1) ++aux[j];
                basis.push_back(BE{key(k, J), MultiDegree{-std::popcount(J), aux}, name(k, J)});
            }
        const KoszulModel* self = this;
        auto diff = [self, one = f.one()](std::uint64_t kk) {
            std::vector<std::pair<std::uint64_t, S>> out;
            auto [k, J] = split(kk);
            int r = 0;
            for (int j : vertices_of(J)) {
                Exponent b = self->mons_[k];
                ++b[j];
                auto it = self->mon_index_.find(b);
                if (it != self->mon_index_.end()) out.emplace_back(key(it->second, J & ~(std::uint64_t(1) << j)), r % 2 ? -one : one);
                ++r;
            }
            return out;
        };
        auto prod = [self](std::uint64_t x, std::uint64_t y) -> std::optional<SignedKey> {
            auto [k1, J1] = split(x);
            auto [k2, J2] = split(y);
            if (J1 & J2) return std::nullopt;
            Exponent b = self->mons_[k1];
            for (std::size_t i = 0; i < b.size(); ++i) b[i] += self->mons_[k2][i];
            auto it = self->mon_index_.find(b);
            if (it == self->mon_index_.end()) return std::nullopt;
            return SignedKey{key(it->second, J1 | J2), shuffle_sign(J1, J2)};
        };
        dga_ = std::make_unique<Dga<F>>(f, std::move(basis), diff, prod);
        pieces_ = std::make_unique<PieceCache<F>>(*dga_);
    }

    KoszulModel(const KoszulModel&) = delete;
    KoszulModel& operator=(const KoszulModel&) = delete;

    const Dga<F>& algebra() const { return *dga_; }
    const PieceCache<F>& cache() const { return *pieces_; }
    const MonomialQuotient& ring() const { return A_; }
    std::size_t ring_dim() const { return mons_.size(); }

private:
    static std::uint64_t key(std::size_t k, std::uint64_t J) { return (std::uint64_t(k) << 24) | J; }
    static std::pair<std::size_t, std::uint64_t> split(std::uint64_t kk) { return {kk >> 24, kk & 0xffffff}; }
    std::string name(std::size_t k, std::uint64_t J) const {
        std::string s;
        for (int i = 0; i < A_.n_vars; ++i)
            if (mons_[k][i]) s += "x" + std::to_string(i + 1) + (mons_[k][i] > 1 ? "^" + std::to_string(mons_[k][i]) : "");
        for (int j : vertices_of(J)) s += "e" + std::to_string(j + 1);
        return s.empty() ? "1" : s;
    }

    MonomialQuotient A_;
    std::vector<Exponent> mons_;
    std::map<Exponent, std::size_t> mon_index_;
    std::unique_ptr<Dga<F>> dga_;
    std::unique_ptr<PieceCache<F>> pieces_;
};

/// Koszul homology H_i(K_A): Betti numbers, multigraded pieces and the ranks of the
/// products H_i x H_j -> H_{i+j} on positive degrees.
template <class F>
struct KoszulHomology {
    using S = typename F::Scalar;
    std::map<int, std::size_t> betti;                               // i -> b_i (b_0 = 1)
    std::map<std::pair<int, Exponent>, std::size_t> multigraded;    // (i, multidegree) -> dim
    std::map<std::pair<int, int>, std::size_t> product_rank;        // (i, j), i <= j
    bool trivial_multiplication = true;
    std::vector<std::pair<int, SparseVector<S>>> classes;           // (i, rep), positive i, model cochains
};

namespace detail {
template <class F>
KoszulHomology<F> summarize(const Dga<F>& A, const PieceCache<F>& P, const std::function<int(const MultiDegree&)>& index,
                            const std::function<Exponent(const MultiDegree&)>& mdeg) {
    KoszulHomology<F> H;
    std::map<MultiDegree, std::vector<SparseVector<typename F::Scalar>>> reps;
    for (const auto& d : A.degrees()) {
        const auto& piece = P.at(d);
        if (!piece.betti()) continue;
        const int i = index(d);
        H.betti[i] += piece.betti();
        H.multigraded[{i, mdeg(d)}] += piece.betti();
        if (i > 0) {
            reps[d] = piece.class_representatives();
            for (const auto& r : reps[d]) H.classes.emplace_back(i, r);
        }
    }
    // products per target degree
    std::map<std::pair<int, int>, std::map<MultiDegree, Echelon<F>>> spans;
    for (const auto& [d1, x1] : reps)
        for (const auto& [d2, x2] : reps) {
            const int i = index(d1), j = index(d2);
            if (i > j) continue;
            MultiDegree t = d1 + d2;
            if (!A.has_degree(t)) continue;
            const auto& piece = P.at(t);
            if (!piece.betti()) continue;
            auto& ech = spans[{i, j}].try_emplace(t, A.field(), piece.betti()).first->second;
            for (const auto& a : x1)
                for (const auto& b : x2) {
                    auto z = A.wedge(a, b);
                    if (!z.empty()) ech.insert(from_dense(piece.classify(z)));
                }
        }
    for (const auto& [ij, per] : spans) {
        std::size_t r = 0;
        for (const auto& [t, e] : per) r += e.rank();
        if (r) {
            H.product_rank[ij] = r;
            H.trivial_multiplication = false;
        }
    }
    return H;
}
}  // namespace detail

/// Koszul homology of a finite-dimensional quotient, or of a squarefree one via R(K).
template <class F>
KoszulHomology<F> koszul_homology(const F& f, const MonomialQuotient& A, int cap = kDefaultVertexCap) {
    if (A.is_artinian()) {
        KoszulModel<F> M(f, A);
        return detail::summarize<F>(
            M.algebra(), M.cache(), [](const MultiDegree& d) { return -d.q; },
            [](const MultiDegree& d) { return d.aux; });
    }
    if (!A.is_squarefree()) throw Error(ErrorKind::InvalidInput, "Koszul homology needs a finite-dimensional or squarefree quotient");
    if (!A.is_minimally_presented()) throw Error(ErrorKind::InvalidInput, "a squarefree quotient must not contain variables");
    if (A.n_vars > cap) throw Error(ErrorKind::CapExceeded, "vertex count above the configured cap");
    std::vector<VSet> nf;
    for (const auto& g : A.gens) {
        VSet s = 0;
        for (int i = 0; i < A.n_vars; ++i)
            if (g[i]) s |= VSet(1) << i;
        nf.push_back(s);
    }
    auto K = SimplicialComplex::from_nonfaces(std::max(A.n_vars, 1), nf);
    RKModel<F> M(f, K, K.vertex_set());
    return detail::summarize<F>(
        M.algebra(), M.cache(),
        [](const MultiDegree& d) {
            int s = 0;
            for (int a : d.aux) s += a;
            return 2 * s - d.q;
        },
        [](const MultiDegree& d) { return d.aux; });
}

/// Ordered triples of positive-degree basis classes of the Koszul homology; counts
/// defined, nontrivial and undecided triple Massey products.
struct TripleCensus {
    std::size_t tuples = 0;
    std::size_t defined = 0;
    std::size_t nontrivial = 0;
    std::size_t unknown = 0;
};

template <class F>
TripleCensus koszul_triple_census(const PieceCache<F>& P, const KoszulHomology<F>& H, const MasseyOptions& opt = {}) {
    TripleCensus c;
    const auto& cls = H.classes;
    std::vector<std::array<std::size_t, 3>> triples;
    for (std::size_t a = 0; a < cls.size(); ++a)
        for (std::size_t b = 0; b < cls.size(); ++b)
            for (std::size_t d = 0; d < cls.size(); ++d) triples.push_back({a, b, d});
    std::vector<int> verdict(triples.size(), 0);
    parallel_for(triples.size(), [&](std::size_t t) {
        const auto& [a, b, d] = triples[t];
        auto out = massey(P, {cls[a].second, cls[b].second, cls[d].second}, opt);
        if (out.status == MasseyStatus::Undefined) return;
        verdict[t] = out.triviality == Triviality::Nontrivial ? 2 : (out.triviality == Triviality::Unknown ? 3 : 1);
    });
    c.tuples = triples.size();
    for (int v : verdict) {
        if (v) ++c.defined;
        if (v == 2) ++c.nontrivial;
        if (v == 3) ++c.unknown;
    }
    return c;
}

// ---- Poincare series ----

struct PowerSeries {
    std::vector<mpq_class> coef;  // coefficients of t^0 .. t^N
    std::size_t order() const { return coef.empty() ? 0 : coef.size() - 1; }
    friend bool operator==(const PowerSeries&, const PowerSeries&) = default;
};

/// Truncation of p / q with q(0) != 0.
inline PowerSeries series_quotient(const std::vector<mpq_class>& p, const std::vector<mpq_class>& q, std::size_t N) {
    if (q.empty() || sgn(q[0]) == 0) throw Error(ErrorKind::DomainError, "denominator has zero constant term");
    PowerSeries s;
    s.coef.assign(N + 1, 0);
    for (std::size_t k = 0; k <= N; ++k) {
        mpq_class acc = k < p.size() ? p[k] : mpq_class(0);
        for (std::size_t j = 1; j <= k && j < q.size(); ++j) acc -= q[j] * s.coef[k - j];
        s.coef[k] = acc / q[0];
    }
    return s;
}

/// (1+t)^m / (1 - sum_i b_i t^{i+1}) up to t^N; b maps i >= 1 to b_i.
inline PowerSeries serre_bound(int m, const std::map<int, std::size_t>& b, std::size_t N) {
    std::vector<mpq_class> num(m + 1);
    mpz_class binom = 1;
    for (int k = 0; k <= m; ++k) {
        num[k] = binom;
        binom = binom * (m - k) / (k + 1);
    }
    std::vector<mpq_class> den{1};
    for (const auto& [i, bi] : b) {
        if (i < 1) continue;
        if (den.size() < static_cast<std::size_t>(i + 2)) den.resize(i + 2, 0);
        den[i + 1] -= static_cast<long>(bi);
    }
    return series_quotient(num, den, N);
}

inline constexpr int kDefaultResolutionCap = 6;

/// dim Tor_i^A(k, k) for i <= i_cap from a graded minimal free resolution of k, built
/// by exact kernel computations degree by degree. An infinite-dimensional A is
/// truncated above internal degree (g - 1) i_cap + 1, g the largest generator degree;
/// the resolution strands below the truncation are unaffected by it.
template <class F>
std::vector<std::size_t> minimal_resolution_betti(const F& f, const MonomialQuotient& A, int i_cap,
                                                  int max_cap = kDefaultResolutionCap) {
    using S = typename F::Scalar;
    using Vec = SparseVector<S>;
    if (i_cap < 0 || i_cap > max_cap) throw Error(ErrorKind::CapExceeded, "resolution length above the configured cap");
    const bool finite = A.is_artinian();
    const int top = finite ? -1 : std::max(i_cap + 1, (A.max_generator_degree() - 1) * i_cap + 1);
    const auto mons = A.standard_monomials(100000, top);
    const std::size_t D = mons.size();
    std::vector<int> mdeg(D);
    std::map<Exponent, std::size_t> idx;
    for (std::size_t k = 0; k < D; ++k) {
        idx[mons[k]] = k;
        mdeg[k] = std::accumulate(mons[k].begin(), mons[k].end(), 0);
    }
    std::vector<std::vector<std::size_t>> mult(A.n_vars, std::vector<std::size_t>(D, D));
    for (int j = 0; j < A.n_vars; ++j)
        for (std::size_t k = 0; k < D; ++k) {
            Exponent b = mons[k];
            ++b[j];
            auto it = idx.find(b);
            if (it != idx.end()) mult[j][k] = it->second;
        }
    // x^a times an element of the free module A^r (index g * D + k)
    auto times = [&](const Exponent& a, const Vec& v) {
        std::vector<std::pair<std::uint64_t, S>> out;
        for (const auto& [i, c] : v) {
            std::size_t g = i / D, k = i % D;
            bool dead = false;
            for (int j = 0; j < A.n_vars && !dead; ++j)
                for (int e = 0; e < a[j] && !dead; ++e) {
                    k = mult[j][k];
                    if (k == D) dead = true;
                }
            if (!dead) out.emplace_back(g * D + k, c);
        }
        return make_sparse(std::move(out));
    };

    std::vector<std::size_t> betti{1};
    // homogeneous pieces of the current module, keyed by internal degree
    std::map<int, std::vector<Vec>> M;
    for (std::size_t k = 1; k < D; ++k) M[mdeg[k]].push_back(Vec{{k, f.one()}});
    std::size_t amb = D;
    for (int i = 1; i <= i_cap; ++i) {
        std::vector<Vec> gens;
        std::vector<int> gdeg;
        for (const auto& [j, piece] : M) {
            if (top >= 0 && j > top) break;
            Echelon<F> ech(f, amb);
            if (auto below = M.find(j - 1); below != M.end())
                for (const auto& v : below->second)
                    for (int x = 0; x < A.n_vars; ++x) {
                        Exponent e(A.n_vars, 0);
                        e[x] = 1;
                        ech.insert(times(e, v));
                    }
            for (const auto& v : piece)
                if (ech.insert(v)) {
                    gens.push_back(v);
                    gdeg.push_back(j);
                }
        }
        betti.push_back(gens.size());
        if (i == i_cap || gens.empty()) break;
        // kernel of A^{b_i} -> A^{b_{i-1}}, e_g x^a -> x^a gens[g], one internal degree at a time
        std::map<int, std::vector<std::pair<std::size_t, std::size_t>>> by_degree;  // degree -> (g, k)
        for (std::size_t g = 0; g < gens.size(); ++g)
            for (std::size_t k = 0; k < D; ++k) by_degree[gdeg[g] + mdeg[k]].emplace_back(g, k);
        std::map<int, std::vector<Vec>> next;
        for (const auto& [t, cells] : by_degree) {
            if (top >= 0 && t > top) break;
            std::vector<Vec> cols;
            for (const auto& [g, k] : cells) cols.push_back(times(mons[k], gens[g]));
            for (const auto& z : kernel(f, SparseMatrix<S>::from_columns(amb, cols))) {
                std::vector<std::pair<std::uint64_t, S>> v;
                for (const auto& [c, x] : z) v.emplace_back(cells[c].first * D + cells[c].second, x);
                next[t].push_back(make_sparse(std::move(v)));
            }
        }
        M = std::move(next);
        amb = gens.size() * D;
    }
    betti.resize(i_cap + 1, 0);
    return betti;
}

struct GolodSeriesCheck {
    PowerSeries poincare;
    PowerSeries bound;
    bool dominated = true;  // P_A <= bound coefficientwise
    bool equal = true;
};

template <class F>
GolodSeriesCheck golod_series_check(const F& f, const MonomialQuotient& A, int N) {
    GolodSeriesCheck g;
    auto H = koszul_homology(f, A);
    g.bound = serre_bound(A.n_vars, H.betti, N);
    for (auto b : minimal_resolution_betti(f, A, N)) g.poincare.coef.push_back(mpq_class(static_cast<long>(b)));
    for (int k = 0; k <= N; ++k) {
        if (g.poincare.coef[k] > g.bound.coef[k]) g.dominated = false;
        if (g.poincare.coef[k] != g.bound.coef[k]) g.equal = false;
    }
    return g;
}

}  // namespace massey
