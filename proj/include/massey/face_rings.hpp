#pragma once

// Simplicial complexes, Hochster's decomposition and the quotient model
// R(K) = k[K] (x) Lambda[u_1..u_m] / (v_i^2 = u_i v_i = 0) of H*(Z_K).
//
// Vertex sets are bitmasks (vertex i <-> bit i, 0-based). A basis monomial
// v_sigma u_J of R(K) has cohomological degree 2|sigma| + |J| and support
// sigma u J; its key is sigma | (J << 32).

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "massey/dga.hpp"
#include "massey/massey.hpp"
#include "massey/parallel.hpp"

namespace massey {

using VSet = std::uint64_t;

inline int popcount(VSet s) { return std::popcount(s); }
inline bool subset_of(VSet a, VSet b) { return (a & ~b) == 0; }

inline std::vector<int> vertices_of(VSet s) {
    std::vector<int> v;
    for (; s; s &= s - 1) v.push_back(std::countr_zero(s));
    return v;
}

inline VSet vset(const std::vector<int>& v) {
    VSet s = 0;
    for (int i : v) s |= VSet(1) << i;
    return s;
}

/// 1-based vertex list "{1,3}" for reports.
inline std::string vset_str(VSet s) {
    std::string out = "{";
    bool first = true;
    for (int v : vertices_of(s)) {
        if (!first) out += ",";
        out += std::to_string(v + 1);
        first = false;
    }
    return out + "}";
}

/// (-1)^{#{(a, b) : a in A, b in B, a > b}}
inline int shuffle_sign(VSet a, VSet b) {
    int inv = 0;
    for (VSet m = b; m; m &= m - 1) {
        int y = std::countr_zero(m);
        inv += std::popcount(a >> (y + 1));
    }
    return inv % 2 ? -1 : 1;
}

struct Graph {
    int n = 0;
    std::vector<VSet> adj;
    bool edge(int a, int b) const { return adj[a] >> b & 1; }
};

/// Maximum cardinality search followed by a perfect elimination check.
inline bool is_chordal(const Graph& g) {
    std::vector<int> order, weight(g.n, 0);
    VSet done = 0;
    for (int step = 0; step < g.n; ++step) {
        int best = -1;
        for (int v = 0; v < g.n; ++v)
            if (!(done >> v & 1) && (best < 0 || weight[v] > weight[best])) best = v;
        order.push_back(best);
        done |= VSet(1) << best;
        for (int u : vertices_of(g.adj[best] & ~done)) ++weight[u];
    }
    // reverse of MCS order is a PEO iff chordal: earlier-numbered neighbours form a clique
    std::vector<int> pos(g.n);
    for (int i = 0; i < g.n; ++i) pos[order[i]] = i;
    for (int v = 0; v < g.n; ++v) {
        VSet earlier = 0;
        for (int u : vertices_of(g.adj[v]))
            if (pos[u] < pos[v]) earlier |= VSet(1) << u;
        if (!earlier) continue;
        int parent = -1;
        for (int u : vertices_of(earlier))
            if (parent < 0 || pos[u] > pos[parent]) parent = u;
        VSet rest = earlier & ~(VSet(1) << parent);
        if (!subset_of(rest, g.adj[parent])) return false;
    }
    return true;
}

class SimplicialComplex {
public:
    SimplicialComplex() = default;

    static SimplicialComplex from_nonfaces(int m, std::vector<VSet> nonfaces) {
        if (m < 1 || m > 32) throw Error(ErrorKind::InvalidInput, "vertex count must lie in 1..32");
        std::sort(nonfaces.begin(), nonfaces.end());
        nonfaces.erase(std::unique(nonfaces.begin(), nonfaces.end()), nonfaces.end());
        for (VSet s : nonfaces) {
            if (s >> m) throw Error(ErrorKind::InvalidInput, "non-face uses a vertex beyond m");
            if (popcount(s) < 2) throw Error(ErrorKind::InvalidInput, "minimal non-faces must have at least two vertices");
        }
        for (VSet a : nonfaces)
            for (VSet b : nonfaces)
                if (a != b && subset_of(a, b)) throw Error(ErrorKind::InvalidInput, "minimal non-faces must form an antichain");
        SimplicialComplex K;
        K.m_ = m;
        K.nonfaces_ = std::move(nonfaces);
        std::sort(K.nonfaces_.begin(), K.nonfaces_.end(), [](VSet a, VSet b) {
            return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
        });
        return K;
    }

    static SimplicialComplex from_facets(int m, const std::vector<VSet>& facets) {
        if (m < 1 || m > 32) throw Error(ErrorKind::InvalidInput, "vertex count must lie in 1..32");
        VSet covered = 0;
        for (VSet f : facets) {
            if (f >> m) throw Error(ErrorKind::InvalidInput, "facet uses a vertex beyond m");
            covered |= f;
        }
        if (covered != (m == 64 ? ~VSet(0) : (VSet(1) << m) - 1))
            throw Error(ErrorKind::InvalidInput, "every vertex must lie in some facet");
        auto is_face = [&](VSet s) {
            for (VSet f : facets)
                if (subset_of(s, f)) return true;
            return false;
        };
        std::set<VSet> faces;
        for (VSet f : facets)
            for (VSet s = f;; s = (s - 1) & f) {
                faces.insert(s);
                if (s == 0) break;
            }
        std::set<VSet> mnf;
        for (VSet s : faces)
            for (int v = 0; v < m; ++v) {
                if (s >> v & 1) continue;
                VSet t = s | VSet(1) << v;
                if (is_face(t)) continue;
                bool minimal = true;
                for (int u : vertices_of(t))
                    if (!faces.count(t & ~(VSet(1) << u))) minimal = false;
                if (minimal) mnf.insert(t);
            }
        return from_nonfaces(m, {mnf.begin(), mnf.end()});
    }

    int m() const { return m_; }
    VSet vertex_set() const { return (VSet(1) << m_) - 1; }
    const std::vector<VSet>& minimal_nonfaces() const { return nonfaces_; }

    bool is_face(VSet s) const {
        for (VSet n : nonfaces_)
            if (subset_of(n, s)) return false;
        return true;
    }

    /// Faces inside `within` (default: all), including the empty face, ordered by (size, mask).
    std::vector<VSet> faces(VSet within = ~VSet(0)) const {
        within &= vertex_set();
        std::vector<VSet> out;
        std::function<void(VSet, int)> rec = [&](VSet s, int from) {
            out.push_back(s);
            for (int v = from; v < m_; ++v) {
                if (!(within >> v & 1)) continue;
                VSet t = s | VSet(1) << v;
                if (is_face(t)) rec(t, v + 1);
            }
        };
        rec(0, 0);
        std::sort(out.begin(), out.end(), [](VSet a, VSet b) {
            return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
        });
        return out;
    }

    std::vector<VSet> facets() const {
        auto fs = faces();
        std::vector<VSet> out;
        for (VSet f : fs) {
            bool maximal = true;
            for (int v = 0; v < m_ && maximal; ++v)
                if (!(f >> v & 1) && is_face(f | VSet(1) << v)) maximal = false;
            if (maximal) out.push_back(f);
        }
        return out;
    }

    int dimension() const {
        int d = -1;
        for (VSet f : facets()) d = std::max(d, popcount(f) - 1);
        return d;
    }

    /// K_I relabelled onto |I| vertices in increasing order.
    SimplicialComplex induced(VSet I) const {
        I &= vertex_set();
        if (!I) throw Error(ErrorKind::InvalidInput, "induced complex on the empty set");
        auto vs = vertices_of(I);
        std::vector<VSet> nf;
        for (VSet n : nonfaces_)
            if (subset_of(n, I)) {
                VSet r = 0;
                for (std::size_t k = 0; k < vs.size(); ++k)
                    if (n >> vs[k] & 1) r |= VSet(1) << k;
                nf.push_back(r);
            }
        return from_nonfaces(static_cast<int>(vs.size()), nf);
    }

    bool is_flag() const {
        for (VSet n : nonfaces_)
            if (popcount(n) != 2) return false;
        return true;
    }

    Graph skeleton1() const {
        Graph g;
        g.n = m_;
        g.adj.assign(m_, 0);
        for (int a = 0; a < m_; ++a)
            for (int b = a + 1; b < m_; ++b)
                if (is_face(VSet(1) << a | VSet(1) << b)) {
                    g.adj[a] |= VSet(1) << b;
                    g.adj[b] |= VSet(1) << a;
                }
        return g;
    }

    /// Missing edges {a, b} (a < b) of the 1-skeleton.
    std::vector<VSet> missing_edges() const {
        std::vector<VSet> out;
        for (int a = 0; a < m_; ++a)
            for (int b = a + 1; b < m_; ++b)
                if (!is_face(VSet(1) << a | VSet(1) << b)) out.push_back(VSet(1) << a | VSet(1) << b);
        return out;
    }

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
        return a.m_ == b.m_ && a.nonfaces_ == b.nonfaces_;
    }

private:
    int m_ = 0;
    std::vector<VSet> nonfaces_;
};

inline SimplicialComplex join(const SimplicialComplex& a, const SimplicialComplex& b) {
    std::vector<VSet> nf = a.minimal_nonfaces();
    for (VSet n : b.minimal_nonfaces()) nf.push_back(n << a.m());
    return SimplicialComplex::from_nonfaces(a.m() + b.m(), nf);
}

/// Flag complex of a graph on n vertices.
inline SimplicialComplex flag_complex(const Graph& g) {
    std::vector<VSet> nf;
    for (int a = 0; a < g.n; ++a)
        for (int b = a + 1; b < g.n; ++b)
            if (!g.edge(a, b)) nf.push_back(VSet(1) << a | VSet(1) << b);
    return SimplicialComplex::from_nonfaces(g.n, nf);
}

template <class S>
using SimplicialCochain = std::map<VSet, S>;  // face (absolute vertex mask) -> value

/// Augmented simplicial cochains of K_I with absolute vertex labels; degree p
/// lives on faces with p + 1 vertices, the empty face carries degree -1.
template <class F>
class InducedCochains {
public:
    using S = typename F::Scalar;
    using Vec = SparseVector<S>;

    InducedCochains(const F& f, const SimplicialComplex& K, VSet I) : f_(f), I_(I) {
        for (VSet s : K.faces(I)) {
            int p = popcount(s) - 1;
            if (static_cast<int>(faces_.size()) <= p + 1) faces_.resize(p + 2);
            faces_[p + 1].push_back(s);
        }
        top_ = static_cast<int>(faces_.size()) - 2;
    }

    VSet support() const { return I_; }
    int top() const { return top_; }
    const std::vector<VSet>& faces(int p) const {
        static const std::vector<VSet> none;
        return (p < -1 || p > top_) ? none : faces_[p + 1];
    }
    std::size_t index(int p, VSet s) const {
        const auto& fs = faces(p);
        auto it = std::lower_bound(fs.begin(), fs.end(), s);
        if (it == fs.end() || *it != s) throw Error(ErrorKind::InvalidInput, "not a face of the induced complex");
        return it - fs.begin();
    }

    /// Coboundary of the basis cochain of face s (degree p) as a vector in degree p + 1.
    Vec delta_basis(int p, VSet s) const {
        std::vector<std::pair<std::uint64_t, S>> terms;
        const auto& up = faces(p + 1);
        for (int v : vertices_of(I_ & ~s)) {
            VSet t = s | VSet(1) << v;
            auto it = std::lower_bound(up.begin(), up.end(), t);
            if (it == up.end() || *it != t) continue;
            int pos = popcount(t & ((VSet(1) << v) - 1));
            terms.emplace_back(it - up.begin(), pos % 2 ? -f_.one() : f_.one());
        }
        return make_sparse(std::move(terms));
    }

    Vec delta(int p, const Vec& x) const {
        Vec out;
        for (const auto& [i, c] : x) axpy(out, c, delta_basis(p, faces(p)[i]));
        return out;
    }

    /// H~^p(K_I) as a quotient basis on the degree-p cochains.
    QuotientBasis<F> cohomology(int p) const {
        const std::size_t n = faces(p).size();
        std::vector<Vec> cols;
        for (VSet s : faces(p)) cols.push_back(delta_basis(p, s));
        std::vector<Vec> cycles;
        if (faces(p + 1).empty()) {
            for (std::size_t k = 0; k < n; ++k) cycles.push_back(Vec{{k, f_.one()}});
        } else {
            cycles = kernel(f_, SparseMatrix<S>::from_columns(faces(p + 1).size(), cols));
        }
        std::vector<Vec> bounds;
        for (VSet s : faces(p - 1)) bounds.push_back(delta_basis(p - 1, s));
        return subspace_quotient(f_, n, cycles, bounds);
    }

    /// dim H~^p via ranks only.
    std::size_t betti(int p) const {
        if (p < -1 || p > top_) return 0;
        return faces(p).size() - rank_delta(p) - rank_delta(p - 1);
    }

    Vec to_vector(int p, const SimplicialCochain<S>& c) const {
        std::vector<std::pair<std::uint64_t, S>> t;
        for (const auto& [s, x] : c) t.emplace_back(index(p, s), x);
        return make_sparse(std::move(t));
    }
    SimplicialCochain<S> to_cochain(int p, const Vec& v) const {
        SimplicialCochain<S> c;
        for (const auto& [i, x] : v) c[faces(p)[i]] = x;
        return c;
    }

private:
    std::size_t rank_delta(int p) const {
        if (p < -1 || p >= top_ + 1) return 0;
        Echelon<F> ech(f_, faces(p + 1).size());
        for (VSet s : faces(p)) ech.insert(delta_basis(p, s));
        return ech.rank();
    }

    F f_;
    VSet I_;
    std::vector<std::vector<VSet>> faces_;
    int top_ = -1;
};

/// All reduced Betti numbers of K_I: index p + 1 holds dim H~^p.
template <class F>
std::vector<std::size_t> reduced_betti(const F& f, const SimplicialComplex& K, VSet I) {
    InducedCochains<F> C(f, K, I);
    std::vector<std::size_t> out;
    for (int p = -1; p <= C.top(); ++p) out.push_back(C.betti(p));
    return out;
}

template <class F>
std::size_t reduced_cohomology(const F& f, const SimplicialComplex& K, int p, VSet I = ~VSet(0)) {
    InducedCochains<F> C(f, K, I & K.vertex_set());
    return C.betti(p);
}

/// Multigraded Betti table: (i, I) -> dim Tor^{-i, 2I}.
struct BettiTable {
    std::string field;
    std::map<std::pair<int, VSet>, std::size_t> entries;  // nonzero only

    std::map<int, std::size_t> totals() const {
        std::map<int, std::size_t> t;
        for (const auto& [k, d] : entries) t[k.first] += d;
        return t;
    }
    /// Ranks of H^n(Z_K) with n = 2|I| - i.
    std::map<int, std::size_t> zk_ranks() const {
        std::map<int, std::size_t> t;
        for (const auto& [k, d] : entries) t[2 * popcount(k.second) - k.first] += d;
        return t;
    }
    friend bool operator==(const BettiTable& a, const BettiTable& b) { return a.entries == b.entries; }
};

inline constexpr int kDefaultVertexCap = 14;

/// Hochster: Tor^{-i, 2I} = H~^{|I| - i - 1}(K_I), over all I in lexicographic order.
template <class F>
BettiTable hochster_table(const F& f, const SimplicialComplex& K, int cap = kDefaultVertexCap) {
    if (K.m() > cap) throw Error(ErrorKind::CapExceeded, "vertex count above the configured cap");
    const VSet full = K.vertex_set();
    const std::size_t N = std::size_t(1) << K.m();
    std::vector<std::vector<std::size_t>> per(N);
    parallel_for(N, [&](std::size_t I) {
        if (I == 0) return;
        per[I] = reduced_betti(f, K, static_cast<VSet>(I) & full);
    });
    BettiTable T;
    T.field = f.name();
    T.entries[{0, 0}] = 1;  // H~^{-1}(empty)
    for (std::size_t I = 1; I < N; ++I) {
        const int n = popcount(I);
        for (std::size_t k = 0; k < per[I].size(); ++k) {
            if (!per[I][k]) continue;
            int p = static_cast<int>(k) - 1;
            T.entries[{n - p - 1, static_cast<VSet>(I)}] = per[I][k];
        }
    }
    return T;
}

// ---- the R(K) model ----

inline std::uint64_t rk_key(VSet sigma, VSet J) { return sigma | (J << 32); }
inline VSet rk_sigma(std::uint64_t key) { return key & 0xffffffffULL; }
inline VSet rk_J(std::uint64_t key) { return key >> 32; }

template <class F>
class RKModel {
public:
    using S = typename F::Scalar;
    using Vec = SparseVector<S>;

    RKModel(const F& f, const SimplicialComplex& K, VSet U) : f_(f), K_(K), U_(U & K.vertex_set()) {
        using BE = typename Dga<F>::BasisElement;
        std::vector<BE> basis;
        for (VSet sigma : K.faces(U_)) {
            VSet rest = U_ & ~sigma;
            for (VSet J = rest;; J = (J - 1) & rest) {
                basis.push_back(BE{rk_key(sigma, J), degree_of(sigma | J, 2 * popcount(sigma) + popcount(J)), name(sigma, J)});
                if (J == 0) break;
            }
        }
        const SimplicialComplex* Kp = &K_;
        auto diff = [Kp, one = f.one()](std::uint64_t key) {
            VSet sigma = rk_sigma(key), J = rk_J(key);
            std::vector<std::pair<std::uint64_t, S>> out;
            int pos = 0;
            for (int j : vertices_of(J)) {
                VSet t = sigma | VSet(1) << j;
                if (Kp->is_face(t)) out.emplace_back(rk_key(t, J & ~(VSet(1) << j)), pos % 2 ? -one : one);
                ++pos;
            }
            return out;
        };
        auto prod = [Kp](std::uint64_t a, std::uint64_t b) -> std::optional<SignedKey> {
            VSet sa = rk_sigma(a), ja = rk_J(a), sb = rk_sigma(b), jb = rk_J(b);
            if ((sa | ja) & (sb | jb)) return std::nullopt;
            if (!Kp->is_face(sa | sb)) return std::nullopt;
            return SignedKey{rk_key(sa | sb, ja | jb), shuffle_sign(ja, jb)};
        };
        dga_ = std::make_unique<Dga<F>>(f, std::move(basis), diff, prod);
        pieces_ = std::make_unique<PieceCache<F>>(*dga_);
    }

    RKModel(const RKModel&) = delete;
    RKModel& operator=(const RKModel&) = delete;

    const Dga<F>& algebra() const { return *dga_; }
    const PieceCache<F>& cache() const { return *pieces_; }
    const SimplicialComplex& complex() const { return K_; }
    VSet universe() const { return U_; }

    MultiDegree degree_of(VSet I, int q) const {
        MultiDegree d{q, std::vector<int>(K_.m(), 0)};
        for (int v : vertices_of(I)) d.aux[v] = 1;
        return d;
    }
    /// Multidegree of Tor^{-i, 2I}.
    MultiDegree tor_degree(VSet I, int i) const { return degree_of(I, 2 * popcount(I) - i); }
    /// Multidegree matching H~^p(K_I).
    MultiDegree simplicial_degree(VSet I, int p) const { return degree_of(I, popcount(I) + p + 1); }

    static VSet support_of(const MultiDegree& d) {
        VSet s = 0;
        for (std::size_t v = 0; v < d.aux.size(); ++v)
            if (d.aux[v]) s |= VSet(1) << v;
        return s;
    }

    /// Chain isomorphism from cochains of K_I:  sigma -> t(|sigma|) s(sigma, I) v_sigma u_{I - sigma},
    /// t(k) = (-1)^{k(k-1)/2}, s the shuffle sign of (sigma, I - sigma).
    int phi_sign(VSet sigma, VSet I) const {
        int k = popcount(sigma);
        int t = (k * (k - 1) / 2) % 2 ? -1 : 1;
        return t * shuffle_sign(sigma, I & ~sigma);
    }
    Vec from_simplicial(VSet I, const SimplicialCochain<S>& c) const {
        std::vector<std::pair<std::uint64_t, S>> t;
        for (const auto& [sigma, x] : c) {
            if (!subset_of(sigma, I)) throw Error(ErrorKind::InvalidInput, "face outside the support");
            auto idx = dga_->index(rk_key(sigma, I & ~sigma));
            t.emplace_back(idx, phi_sign(sigma, I) > 0 ? x : -x);
        }
        return make_sparse(std::move(t));
    }
    SimplicialCochain<S> to_simplicial(const Vec& v) const {
        SimplicialCochain<S> c;
        for (const auto& [i, x] : v) {
            auto key = dga_->element(i).key;
            VSet sigma = rk_sigma(key), I = sigma | rk_J(key);
            c[sigma] = phi_sign(sigma, I) > 0 ? x : -x;
        }
        return c;
    }

private:
    std::string name(VSet sigma, VSet J) const {
        std::string s;
        for (int v : vertices_of(sigma)) s += "v" + std::to_string(v + 1);
        for (int v : vertices_of(J)) s += "u" + std::to_string(v + 1);
        return s.empty() ? "1" : s;
    }

    F f_;
    SimplicialComplex K_;
    VSet U_;
    std::unique_ptr<Dga<F>> dga_;
    std::unique_ptr<PieceCache<F>> pieces_;
};

/// Basis classes of H*(R(K)) per multidegree.
template <class F>
struct RKCohomology {
    BettiTable table;
    std::map<std::pair<int, VSet>, std::vector<SparseVector<typename F::Scalar>>> classes;  // (i, I) -> reps
};

template <class F>
RKCohomology<F> rk_cohomology(const RKModel<F>& M) {
    RKCohomology<F> out;
    out.table.field = M.algebra().field().name();
    for (const auto& d : M.algebra().degrees()) {
        const auto& piece = M.cache().at(d);
        if (!piece.betti()) continue;
        VSet I = RKModel<F>::support_of(d);
        int i = 2 * popcount(I) - d.q;
        out.table.entries[{i, I}] = piece.betti();
        out.classes[{i, I}] = piece.class_representatives();
    }
    return out;
}

template <class F>
RKCohomology<F> rk_cohomology(const F& f, const SimplicialComplex& K, int cap = kDefaultVertexCap) {
    if (K.m() > cap) throw Error(ErrorKind::CapExceeded, "vertex count above the configured cap");
    RKModel<F> M(f, K, K.vertex_set());
    return rk_cohomology(M);
}

/// Simplicial product rule: for disjoint I1, I2 the class of a in H~^p(K_I1) times b in
/// H~^q(K_I2) is i^*(a * b) in H~^{p+q+1}(K_{I1 u I2}), where on a face sigma = s1 u s2
///   (a * b)(sigma) = (-1)^{(q+1)|I1|} shuffle(I1, I2) shuffle(s1, s2) a(s1) b(s2).
/// Overlapping supports give 0.
template <class S>
SimplicialCochain<S> zk_cup(const SimplicialComplex& K, VSet I1, int p, const SimplicialCochain<S>& a, VSet I2, int q,
                            const SimplicialCochain<S>& b) {
    SimplicialCochain<S> out;
    if (I1 & I2) return out;
    const int global = (((q + 1) * popcount(I1)) % 2 ? -1 : 1) * shuffle_sign(I1, I2);
    for (const auto& [s1, x] : a) {
        if (popcount(s1) != p + 1) throw Error(ErrorKind::InvalidInput, "left cochain has the wrong degree");
        for (const auto& [s2, y] : b) {
            if (popcount(s2) != q + 1) throw Error(ErrorKind::InvalidInput, "right cochain has the wrong degree");
            VSet s = s1 | s2;
            if (!K.is_face(s)) continue;
            S v = x * y;
            if (global * shuffle_sign(s1, s2) < 0) v = -v;
            auto& slot = out[s];
            slot += v;
            if (is_zero(slot)) out.erase(s);
        }
    }
    return out;
}

// ---- products, cup length, Golodness ----

/// A basis class of H*(Z_K) with its R(K) representative.
template <class F>
struct ZkClass {
    int i = 0;  // Tor index
    VSet I = 0;
    SparseVector<typename F::Scalar> rep;
    int simplicial_degree() const { return popcount(I) - i - 1; }
};

template <class F>
std::vector<ZkClass<F>> positive_classes(const RKCohomology<F>& H) {
    std::vector<ZkClass<F>> out;
    for (const auto& [k, reps] : H.classes) {
        if (k.second == 0) continue;
        for (const auto& r : reps) out.push_back({k.first, k.second, r});
    }
    return out;
}

/// Largest r with a nonzero product of r positive-degree classes.
template <class F>
std::size_t cup_length(const F& f, const SimplicialComplex& K, int cap = kDefaultVertexCap) {
    if (K.m() > cap) throw Error(ErrorKind::CapExceeded, "vertex count above the configured cap");
    RKModel<F> M(f, K, K.vertex_set());
    auto H = rk_cohomology(M);
    const auto& A = M.algebra();
    const auto& P = M.cache();
    using Vec = SparseVector<typename F::Scalar>;
    // span of r-fold products per multidegree, stored as class-coordinate vectors and cocycles
    std::map<MultiDegree, std::vector<Vec>> level;
    for (const auto& c : positive_classes(H)) level[*A.multidegree(c.rep)].push_back(c.rep);
    if (level.empty()) return 0;
    auto gens = level;
    std::size_t r = 1;
    for (;;) {
        std::map<MultiDegree, std::vector<Vec>> next;
        std::map<MultiDegree, Echelon<F>> ech;
        for (const auto& [d1, xs] : gens)
            for (const auto& [d2, ys] : level) {
                bool overlap = false;
                for (std::size_t v = 0; v < d1.aux.size(); ++v)
                    if (d1.aux[v] && d2.aux[v]) overlap = true;
                if (overlap) continue;
                MultiDegree d = d1 + d2;
                if (!A.has_degree(d)) continue;
                const auto& piece = P.at(d);
                if (!piece.betti()) continue;
                auto it = ech.try_emplace(d, f, piece.betti()).first;
                for (const auto& x : xs)
                    for (const auto& y : ys) {
                        auto z = A.wedge(x, y);
                        if (z.empty()) continue;
                        auto c = from_dense(piece.classify(z));
                        if (!c.empty() && it->second.insert(c)) next[d].push_back(z);
                    }
            }
        if (next.empty()) return r;
        level = std::move(next);
        ++r;
    }
}

enum class GolodVerdict { GolodUpToCap, NotGolod, Unknown };

inline const char* to_string(GolodVerdict v) {
    switch (v) {
        case GolodVerdict::GolodUpToCap: return "GolodUpToCap";
        case GolodVerdict::NotGolod: return "NotGolod";
        case GolodVerdict::Unknown: return "Unknown";
    }
    return "?";
}

struct GolodReport {
    GolodVerdict verdict = GolodVerdict::Unknown;
    bool trivial_multiplication = false;
    bool massey_trivial_up_to_cap = false;  // no nontrivial Massey product of order <= cap found
    int order_cap = 0;
    std::string witness;
};

/// Ordered tuples of basis classes with pairwise disjoint supports.
template <class F, class Fn>
void for_each_disjoint_tuple(const std::vector<ZkClass<F>>& cls, std::size_t order, Fn&& fn) {
    std::vector<std::size_t> pick;
    std::function<bool(VSet)> rec = [&](VSet used) -> bool {
        if (pick.size() == order) return fn(pick);
        for (std::size_t k = 0; k < cls.size(); ++k) {
            if (cls[k].I & used) continue;
            pick.push_back(k);
            bool go = rec(used | cls[k].I);
            pick.pop_back();
            if (!go) return false;
        }
        return true;
    };
    rec(0);
}

template <class F>
GolodReport golod_test(const F& f, const SimplicialComplex& K, int order_cap = -1, int cap = kDefaultVertexCap,
                       const MasseyOptions& opt = {}) {
    if (K.m() > cap) throw Error(ErrorKind::CapExceeded, "vertex count above the configured cap");
    GolodReport rep;
    rep.order_cap = order_cap < 0 ? std::min(K.m() - 1, 5) : order_cap;
    RKModel<F> M(f, K, K.vertex_set());
    auto H = rk_cohomology(M);
    auto cls = positive_classes(H);
    const auto& A = M.algebra();
    // multiplication
    rep.trivial_multiplication = true;
    for (std::size_t a = 0; a < cls.size() && rep.trivial_multiplication; ++a)
        for (std::size_t b = 0; b < cls.size(); ++b) {
            if (cls[a].I & cls[b].I) continue;
            auto z = A.wedge(cls[a].rep, cls[b].rep);
            if (!z.empty() && !is_exact(M.cache(), z)) {
                rep.trivial_multiplication = false;
                rep.witness = "product " + vset_str(cls[a].I) + " * " + vset_str(cls[b].I) + " != 0";
                break;
            }
        }
    if (!rep.trivial_multiplication) {
        rep.verdict = GolodVerdict::NotGolod;
        return rep;
    }
    bool unknown = false;
    bool found = false;
    for (int order = 3; order <= rep.order_cap && !found; ++order)
        for_each_disjoint_tuple<F>(cls, order, [&](const std::vector<std::size_t>& pick) {
            std::vector<SparseVector<typename F::Scalar>> reps;
            for (auto k : pick) reps.push_back(cls[k].rep);
            auto out = massey(M.cache(), reps, opt);
            if (out.status == MasseyStatus::Undefined) return true;
            if (out.triviality == Triviality::Nontrivial) {
                found = true;
                rep.witness = "massey";
                for (auto k : pick) rep.witness += " " + vset_str(cls[k].I);
                return false;
            }
            if (out.triviality == Triviality::Unknown) unknown = true;
            return true;
        });
    rep.massey_trivial_up_to_cap = !found && !unknown;
    rep.verdict = found ? GolodVerdict::NotGolod : (unknown ? GolodVerdict::Unknown : GolodVerdict::GolodUpToCap);
    return rep;
}

// ---- Massey products with support restrictions ----

struct MainlemmaResult {
    bool cond1 = false;
    bool cond2 = false;
};

inline int chain_degree(const std::vector<int>& d, std::size_t s, std::size_t e) {
    int v = 1;
    for (std::size_t k = s; k <= e; ++k) v += d[k];
    return v;
}

/// Vanishing conditions on the unions I_s u ... u I_{r+s}, 1 <= r <= k-2 (1-based s).
template <class F>
MainlemmaResult mainlemma_check(const F& f, const SimplicialComplex& K, const std::vector<VSet>& supports,
                                const std::vector<int>& dims) {
    const std::size_t k = supports.size();
    if (dims.size() != k) throw Error(ErrorKind::InvalidInput, "one dimension per support");
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (supports[a] & supports[b]) throw Error(ErrorKind::OverlappingSupports, "supports must be pairwise disjoint");
    MainlemmaResult res{true, true};
    for (std::size_t r = 1; r + 2 <= k; ++r)
        for (std::size_t s = 0; s + r < k; ++s) {
            VSet U = 0;
            for (std::size_t t = s; t <= s + r; ++t) U |= supports[t];
            InducedCochains<F> C(f, K, U);
            int dd = chain_degree(dims, s, s + r);
            if (C.betti(dd)) res.cond1 = false;
            if (C.betti(dd - 1)) res.cond2 = false;
        }
    return res;
}

template <class F>
struct ZkMasseyResult {
    MasseyOutcome<F> outcome;
    MainlemmaResult conditions;
    VSet support = 0;
    int value_degree = 0;                                    // simplicial degree of the value
    SimplicialCochain<typename F::Scalar> value_cochain;     // representative on K_{I1 u ... u Ik}
};

/// Massey product of classes alpha_j in H~^{d(j)}(K_{I_j}), given as simplicial cocycles.
template <class F>
ZkMasseyResult<F> zk_massey(const F& f, const SimplicialComplex& K, const std::vector<VSet>& supports,
                            const std::vector<int>& dims,
                            const std::vector<SimplicialCochain<typename F::Scalar>>& classes,
                            const MasseyOptions& opt = {}) {
    const std::size_t k = supports.size();
    if (k < 2 || dims.size() != k || classes.size() != k) throw Error(ErrorKind::InvalidInput, "mismatched class data");
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (supports[a] & supports[b]) throw Error(ErrorKind::OverlappingSupports, "supports must be pairwise disjoint");
    ZkMasseyResult<F> res;
    VSet U = 0;
    for (VSet s : supports) U |= s;
    res.support = U;
    RKModel<F> M(f, K, U);
    std::vector<SparseVector<typename F::Scalar>> reps;
    std::vector<MultiDegree> degs;
    for (std::size_t j = 0; j < k; ++j) {
        for (const auto& [s, x] : classes[j])
            if (popcount(s) != dims[j] + 1) throw Error(ErrorKind::InvalidInput, "cochain degree does not match");
        reps.push_back(M.from_simplicial(supports[j], classes[j]));
        degs.push_back(M.simplicial_degree(supports[j], dims[j]));
    }
    std::optional<StrictnessCertificate> cert;
    if (k >= 3) {
        res.conditions = mainlemma_check(f, K, supports, dims);
        if (res.conditions.cond1 && res.conditions.cond2) {
            StrictnessCertificate c;
            for (std::size_t r = 1; r + 2 <= k; ++r)
                for (std::size_t s = 0; s + r < k; ++s) {
                    VSet I = 0;
                    for (std::size_t t = s; t <= s + r; ++t) I |= supports[t];
                    c.vanishing.push_back(M.simplicial_degree(I, chain_degree(dims, s, s + r) - 1));
                }
            cert = c;
        }
    }
    res.outcome = massey(M.cache(), reps, opt, cert, degs);
    res.value_degree = chain_degree(dims, 0, k - 1);
    res.value_cochain = M.to_simplicial(res.outcome.value_rep);
    return res;
}

/// Entry of a triple scan: supports, outcome summary and strictness.
struct TripleScanEntry {
    VSet I1 = 0, I2 = 0, I3 = 0;
    int d1 = 0, d2 = 0, d3 = 0;
    MasseyStatus status = MasseyStatus::Undefined;
    Triviality triviality = Triviality::Unknown;
    std::size_t indeterminacy = 0;
    bool mainlemma_strict = false;
};

struct ScanOptions {
    std::set<std::pair<int, int>> kinds{{2, 0}};  // (|I|, p): classes of H~^p(K_I) to scan
    bool only_defined = true;                     // drop undefined products from the report
    std::size_t stop_after = 0;                   // stop once this many nontrivial products are found (0: never)
};

/// Basis classes of H~^p(K_I) for every (|I|, p) in the scan kinds. The default kind
/// (2, 0) gives one class per missing edge {a, b}: the point cochain on a.
template <class F>
std::vector<std::tuple<VSet, int, SimplicialCochain<typename F::Scalar>>> scan_classes(const F& f,
                                                                                        const SimplicialComplex& K,
                                                                                        const ScanOptions& so) {
    std::vector<std::tuple<VSet, int, SimplicialCochain<typename F::Scalar>>> out;
    std::set<int> sizes;
    for (const auto& k : so.kinds) sizes.insert(k.first);
    const std::size_t N = std::size_t(1) << K.m();
    for (std::size_t mask = 1; mask < N; ++mask) {
        VSet I = static_cast<VSet>(mask);
        if (!sizes.count(popcount(I))) continue;
        InducedCochains<F> C(f, K, I);
        for (int p = 0; p <= C.top(); ++p) {
            if (!so.kinds.count({popcount(I), p}) || !C.betti(p)) continue;
            auto Q = C.cohomology(p);
            for (const auto& r : Q.representatives()) out.emplace_back(I, p, C.to_cochain(p, r));
        }
    }
    return out;
}

/// Ordered triples of scan classes with pairwise disjoint supports. Work runs in
/// fixed blocks so the report (and any early stop) does not depend on scheduling;
/// `sink` sees entries in canonical order as blocks finish.
template <class F>
std::vector<TripleScanEntry> triple_massey_scan(const F& f, const SimplicialComplex& K, const ScanOptions& so = {},
                                                const MasseyOptions& opt = {}, int cap = kDefaultVertexCap,
                                                const std::function<void(const TripleScanEntry&)>& sink = {}) {
    if (K.m() > cap) throw Error(ErrorKind::CapExceeded, "vertex count above the configured cap");
    auto cls = scan_classes(f, K, so);
    std::vector<std::array<std::size_t, 3>> triples;
    for (std::size_t a = 0; a < cls.size(); ++a)
        for (std::size_t b = 0; b < cls.size(); ++b) {
            if (std::get<0>(cls[a]) & std::get<0>(cls[b])) continue;
            for (std::size_t c = 0; c < cls.size(); ++c) {
                if ((std::get<0>(cls[a]) | std::get<0>(cls[b])) & std::get<0>(cls[c])) continue;
                triples.push_back({a, b, c});
            }
        }
    constexpr std::size_t kBlock = 512;
    std::vector<TripleScanEntry> out;
    std::size_t found = 0;
    for (std::size_t start = 0; start < triples.size(); start += kBlock) {
        const std::size_t len = std::min(kBlock, triples.size() - start);
        std::vector<std::optional<TripleScanEntry>> slots(len);
        parallel_for(len, [&](std::size_t t) {
            const auto& [a, b, c] = triples[start + t];
            std::vector<VSet> sup{std::get<0>(cls[a]), std::get<0>(cls[b]), std::get<0>(cls[c])};
            std::vector<int> dims{std::get<1>(cls[a]), std::get<1>(cls[b]), std::get<1>(cls[c])};
            auto res = zk_massey(f, K, sup, dims, {std::get<2>(cls[a]), std::get<2>(cls[b]), std::get<2>(cls[c])}, opt);
            if (so.only_defined && res.outcome.status == MasseyStatus::Undefined) return;
            TripleScanEntry e;
            e.I1 = sup[0];
            e.I2 = sup[1];
            e.I3 = sup[2];
            e.d1 = dims[0];
            e.d2 = dims[1];
            e.d3 = dims[2];
            e.status = res.outcome.status;
            e.triviality = res.outcome.triviality;
            e.indeterminacy = res.outcome.indeterminacy.size();
            e.mainlemma_strict = res.conditions.cond1 && res.conditions.cond2;
            slots[t] = e;
        });
        for (auto& e : slots) {
            if (!e) continue;
            out.push_back(*e);
            if (sink) sink(*e);
            if (e->triviality == Triviality::Nontrivial && ++found == so.stop_after) return out;
        }
    }
    return out;
}

}  // namespace massey
