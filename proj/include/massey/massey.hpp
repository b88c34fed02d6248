#pragma once

// Search for defining systems and evaluation of (k-step) Massey products.
//
// Entries are solved stage by stage (offset j-i = 1, 2, ...). At each entry
// the solution is a particular preimage plus free parameters along a basis of
// the cohomology of the entry's degree; coboundary changes are gauge and do
// not affect the value set. Targets of later stages are polynomial in the
// parameters. Solvability conditions that are affine in the parameters are
// solved exactly and substituted back; non-affine conditions are handled by
// fixing enough parameters to make them affine and enumerating the fixed
// values (exhaustively over small prime fields, sampled otherwise).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "massey/connection.hpp"
#include "massey/dga.hpp"
#include "massey/poly.hpp"

namespace massey {

enum class MasseyStatus { Undefined, DefinedStrict, DefinedAffine, DefinedSampled };
enum class Triviality { Trivial, Nontrivial, Unknown };

inline const char* to_string(MasseyStatus s) {
    switch (s) {
        case MasseyStatus::Undefined: return "Undefined";
        case MasseyStatus::DefinedStrict: return "DefinedStrict";
        case MasseyStatus::DefinedAffine: return "DefinedAffine";
        case MasseyStatus::DefinedSampled: return "DefinedSampled";
    }
    return "?";
}
inline const char* to_string(Triviality t) {
    switch (t) {
        case Triviality::Trivial: return "Trivial";
        case Triviality::Nontrivial: return "Nontrivial";
        case Triviality::Unknown: return "Unknown";
    }
    return "?";
}

struct MasseyOptions {
    bool homogeneous = true;       // entries confined to the additive multidegree
    std::size_t budget = 8;        // maximum number of live parameters
    std::size_t max_fibers = 64;   // enumeration cap for specialized parameters
    std::uint64_t seed = 1;
};

/// Flattened coordinates over a list of multidegrees.
template <class F>
struct ValueLayout {
    using S = typename F::Scalar;
    std::vector<MultiDegree> degrees;
    std::vector<std::size_t> offsets;
    std::size_t dim = 0;

    std::vector<S> flatten(const F& f, const std::map<MultiDegree, std::vector<S>>& parts) const {
        std::vector<S> out(dim, f.zero());
        for (const auto& [d, c] : parts) {
            auto it = std::find(degrees.begin(), degrees.end(), d);
            if (it == degrees.end()) throw Error(ErrorKind::WindowTooSmall, "class lands outside the layout: " + d.str());
            std::size_t off = offsets[it - degrees.begin()];
            for (std::size_t k = 0; k < c.size(); ++k) out[off + k] = c[k];
        }
        return out;
    }
};

/// Class-valued polynomial map on the parameter space of a family.
template <class F>
struct ValueMap {
    using S = typename F::Scalar;
    ValueLayout<F> layout;
    std::size_t nparams = 0;
    std::map<Mono, std::vector<S>> coef;  // zero monomials dropped

    std::size_t degree() const {
        std::size_t d = 0;
        for (const auto& [m, c] : coef) d = std::max(d, m.size());
        return d;
    }
    std::vector<S> constant(const F& f) const {
        auto it = coef.find(Mono{});
        return it == coef.end() ? std::vector<S>(layout.dim, f.zero()) : it->second;
    }
    std::vector<S> eval(const F& f, const std::vector<S>& p) const {
        std::vector<S> out(layout.dim, f.zero());
        for (const auto& [m, c] : coef) {
            S w = f.one();
            for (auto k : m) w *= p.at(k);
            for (std::size_t i = 0; i < c.size(); ++i) out[i] += w * c[i];
        }
        return out;
    }
};

template <class F>
struct DefiningFamily {
    using S = typename F::Scalar;
    std::size_t n = 0;
    std::size_t nparams = 0;
    bool complete = true;
    std::vector<PolyVec<S>> entries;  // (i-1)*n + (j-1)

    const PolyVec<S>& entry(std::size_t i, std::size_t j) const { return entries.at((i - 1) * n + (j - 1)); }
    PolyVec<S>& entry(std::size_t i, std::size_t j) { return entries.at((i - 1) * n + (j - 1)); }

    FormalConnection<F> evaluate(const F& f, const std::vector<S>& p) const {
        FormalConnection<F> C(n);
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i; j <= n; ++j)
                for (const auto& [m, v] : entry(i, j)) {
                    S w = f.one();
                    for (auto k : m) w *= p.at(k);
                    axpy(C.a(i, j), w, v);
                }
        return C;
    }
};

template <class F>
struct SearchResult {
    std::vector<DefiningFamily<F>> families;
    bool complete = true;  // false when the budget or sampling cut the search
};

template <class F>
struct PointSearch {
    std::optional<std::vector<typename F::Scalar>> point;
    bool exhaustive = false;  // absence of a point is a proof
};

namespace detail {

/// Parameters to fix so that every monomial keeps at most one free factor.
inline std::vector<std::uint32_t> linearizing_cover(const std::vector<Mono>& monos) {
    std::set<std::uint32_t> fixed;
    for (;;) {
        std::map<std::uint32_t, std::size_t> freq;
        bool bad = false;
        for (const auto& m : monos) {
            Mono freev;
            for (auto k : m)
                if (!fixed.count(k)) freev.push_back(k);
            if (freev.size() >= 2) {
                bad = true;
                for (auto k : freev) ++freq[k];
            }
        }
        if (!bad) break;
        auto best = std::max_element(freq.begin(), freq.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
        fixed.insert(best->first);
    }
    return {fixed.begin(), fixed.end()};
}

template <class F>
std::vector<std::vector<typename F::Scalar>> fiber_values(const F& f, std::size_t count, std::size_t limit,
                                                          std::uint64_t seed, bool& exhaustive) {
    using S = typename F::Scalar;
    std::vector<std::vector<S>> out;
    exhaustive = false;
    if constexpr (std::is_same_v<F, PrimeField>) {
        double total = 1;
        for (std::size_t k = 0; k < count; ++k) total *= f.p;
        if (total <= static_cast<double>(limit)) {
            std::vector<long> digits(count, 0);
            for (;;) {
                std::vector<S> v;
                for (auto d : digits) v.push_back(f.from_int(d));
                out.push_back(std::move(v));
                std::size_t k = 0;
                while (k < count && ++digits[k] == static_cast<long>(f.p)) digits[k++] = 0;
                if (k == count) break;
            }
            exhaustive = true;
            return out;
        }
    }
    std::set<std::vector<long>> seen;
    auto push = [&](std::vector<long> v) {
        if (out.size() >= limit || !seen.insert(v).second) return;
        std::vector<S> s;
        for (auto x : v) s.push_back(f.from_int(x));
        out.push_back(std::move(s));
    };
    push(std::vector<long>(count, 0));
    for (std::size_t k = 0; k < count; ++k)
        for (long x : {1L, -1L}) {
            std::vector<long> v(count, 0);
            v[k] = x;
            push(v);
        }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(-3, 3);
    for (std::size_t tries = 0; out.size() < limit && tries < 50 * limit; ++tries) {
        std::vector<long> v(count);
        for (auto& x : v) x = dist(rng);
        push(v);
    }
    return out;
}

/// Solves sum_m m(p) coef_m = target where every monomial has degree <= 1.
template <class F>
std::optional<AffineSolutionSet<typename F::Scalar>> solve_linear_map(
    const F& f, const std::map<Mono, std::vector<typename F::Scalar>>& coef, std::size_t dim, std::size_t nparams,
    const std::vector<typename F::Scalar>& target) {
    using S = typename F::Scalar;
    SparseMatrix<S> M(dim, nparams);
    std::vector<S> rhs = target;
    for (const auto& [m, c] : coef) {
        if (m.empty()) {
            for (std::size_t i = 0; i < dim; ++i) rhs[i] -= c[i];
        } else {
            for (std::size_t i = 0; i < dim; ++i)
                if (!is_zero(c[i])) M.set(i, m[0], c[i]);
        }
    }
    return solve_affine(f, M, from_dense(rhs));
}

}  // namespace detail

/// Finds parameters p with V(p) = target.
template <class F>
PointSearch<F> find_point(const F& f, const ValueMap<F>& V, const std::vector<typename F::Scalar>& target,
                          const MasseyOptions& opt) {
    using S = typename F::Scalar;
    PointSearch<F> out;
    // a coordinate untouched by the parameters decides immediately
    auto c0 = V.constant(f);
    for (std::size_t i = 0; i < V.layout.dim; ++i) {
        bool free = false;
        for (const auto& [m, c] : V.coef)
            if (!m.empty() && !is_zero(c[i])) free = true;
        if (!free && !(c0[i] == target[i])) {
            out.exhaustive = true;
            return out;
        }
    }
    auto linear_try = [&](const std::map<Mono, std::vector<S>>& coef, std::size_t np) {
        return detail::solve_linear_map(f, coef, V.layout.dim, np, target);
    };
    if (V.degree() <= 1) {
        auto sol = linear_try(V.coef, V.nparams);
        out.exhaustive = true;
        if (sol) out.point = to_dense(f, sol->particular, V.nparams);
        return out;
    }
    std::vector<Mono> monos;
    for (const auto& [m, c] : V.coef) monos.push_back(m);
    auto cover = detail::linearizing_cover(monos);
    bool exhaustive = false;
    auto fibers = detail::fiber_values(f, cover.size(), opt.max_fibers, opt.seed, exhaustive);
    for (const auto& vals : fibers) {
        std::map<std::uint32_t, S> fixed;
        for (std::size_t k = 0; k < cover.size(); ++k) fixed[cover[k]] = vals[k];
        std::map<Mono, std::vector<S>> coef;
        for (const auto& [m, c] : V.coef) {
            S w = f.one();
            Mono rest;
            for (auto k : m) {
                auto it = fixed.find(k);
                if (it != fixed.end()) w *= it->second;
                else rest.push_back(k);
            }
            auto& slot = coef[rest];
            if (slot.empty()) slot.assign(V.layout.dim, f.zero());
            for (std::size_t i = 0; i < c.size(); ++i) slot[i] += w * c[i];
        }
        auto sol = linear_try(coef, V.nparams);
        if (sol) {
            auto p = to_dense(f, sol->particular, V.nparams);
            for (auto& [k, x] : fixed) p[k] = x;
            out.point = p;
            return out;
        }
    }
    out.exhaustive = exhaustive;
    return out;
}

template <class F>
class MasseyEngine {
public:
    using S = typename F::Scalar;
    using Vec = SparseVector<S>;

    MasseyEngine(const PieceCache<F>& P, MasseyOptions opt) : P_(P), A_(P.algebra()), f_(A_.field()), opt_(opt) {}

    const PieceCache<F>& pieces() const { return P_; }
    const MasseyOptions& options() const { return opt_; }

    /// Multidegree of the class cochains; aux is dropped in inhomogeneous mode.
    MultiDegree class_degree(const Vec& a) const {
        if (a.empty()) throw Error(ErrorKind::InvalidInput, "zero cochain has no degree; pass its degree explicitly");
        auto q = A_.qdegree(a);
        if (!opt_.homogeneous) return MultiDegree{*q, {}};
        auto d = A_.multidegree(a);
        if (!d) throw Error(ErrorKind::MixedDegree, "class representative is not homogeneous in the auxiliary degree");
        return *d;
    }

    MultiDegree entry_degree(const std::vector<MultiDegree>& degs, std::size_t i, std::size_t j) const {
        MultiDegree d = degs[i - 1];
        for (std::size_t r = i + 1; r <= j; ++r) d = d + degs[r - 1];
        d.q -= static_cast<int>(j - i);
        return d;
    }

    /// Multidegrees a cochain of the given slot may occupy.
    std::vector<MultiDegree> slot(const MultiDegree& d) const {
        if (opt_.homogeneous) return {d};
        std::vector<MultiDegree> out;
        for (const auto& g : A_.degrees())
            if (g.q == d.q) out.push_back(g);
        return out;
    }

    ValueLayout<F> layout(const MultiDegree& d) const {
        ValueLayout<F> L;
        for (const auto& g : slot(d)) {
            if (!A_.has_degree(g)) continue;
            L.degrees.push_back(g);
            L.offsets.push_back(L.dim);
            L.dim += P_.at(g).betti();
        }
        return L;
    }

    std::vector<Vec> parameter_directions(const MultiDegree& d) const {
        std::vector<Vec> out;
        for (const auto& g : slot(d)) {
            if (!A_.has_degree(g)) continue;
            for (auto& r : P_.at(g).class_representatives()) out.push_back(std::move(r));
        }
        return out;
    }

    /// Builds entries of offsets 1..last_offset (a(1,n) never included).
    SearchResult<F> search(const std::vector<Vec>& classes, const std::vector<MultiDegree>& degs,
                           std::size_t last_offset) const {
        Run run{classes.size(), degs, last_offset, {}, true, 0};
        DefiningFamily<F> fam;
        fam.n = classes.size();
        fam.entries.resize(fam.n * fam.n);
        for (std::size_t i = 1; i <= fam.n; ++i)
            if (!classes[i - 1].empty()) fam.entry(i, i)[Mono{}] = classes[i - 1];
        stage(run, fam, 1);
        SearchResult<F> out;
        out.families = std::move(run.found);
        out.complete = run.complete;
        return out;
    }

    /// Obstruction cochains at offset k: sum_{r=i}^{i+k-1} bar(a(i,r)) ^ a(r+1,i+k).
    std::vector<PolyVec<S>> obstructions(const DefiningFamily<F>& fam, std::size_t k) const {
        std::vector<PolyVec<S>> out;
        for (std::size_t i = 1; i + k <= fam.n; ++i) out.push_back(product_target(fam, i, i + k));
        return out;
    }

    ValueMap<F> value_map(const DefiningFamily<F>& fam, const std::vector<PolyVec<S>>& obs,
                          const std::vector<MultiDegree>& obs_degrees) const {
        ValueMap<F> V;
        V.nparams = fam.nparams;
        std::vector<ValueLayout<F>> parts;
        for (const auto& d : obs_degrees) {
            parts.push_back(layout(d));
            for (std::size_t k = 0; k < parts.back().degrees.size(); ++k) {
                V.layout.degrees.push_back(parts.back().degrees[k]);
                V.layout.offsets.push_back(V.layout.dim + parts.back().offsets[k]);
            }
            V.layout.dim += parts.back().dim;
        }
        std::size_t base = 0;
        for (std::size_t t = 0; t < obs.size(); ++t) {
            for (const auto& [m, v] : obs[t]) {
                auto flat = parts[t].flatten(f_, classify(P_, v));
                auto& slot = V.coef[m];
                if (slot.empty()) slot.assign(V.layout.dim, f_.zero());
                for (std::size_t i = 0; i < flat.size(); ++i) slot[base + i] += flat[i];
            }
            base += parts[t].dim;
        }
        for (auto it = V.coef.begin(); it != V.coef.end();) {
            bool zero = std::all_of(it->second.begin(), it->second.end(), [](const S& x) { return is_zero(x); });
            it = zero ? V.coef.erase(it) : std::next(it);
        }
        return V;
    }

    /// True when every entry slot of an order-n search has vanishing cohomology,
    /// so every defining system is unique up to gauge.
    bool slots_acyclic(const std::vector<MultiDegree>& degs, std::size_t last_offset) const {
        const std::size_t n = degs.size();
        for (std::size_t off = 1; off <= last_offset; ++off)
            for (std::size_t i = 1; i + off <= n; ++i) {
                if (i == 1 && i + off == n) continue;
                if (!parameter_directions(entry_degree(degs, i, i + off)).empty()) return false;
            }
        return true;
    }

private:
    struct Run {
        std::size_t n;
        std::vector<MultiDegree> degs;
        std::size_t last_offset;
        std::vector<DefiningFamily<F>> found;
        bool complete;
        std::size_t fibers;
    };

    PolyVec<S> product_target(const DefiningFamily<F>& fam, std::size_t i, std::size_t j) const {
        PolyVec<S> out;
        for (std::size_t r = i; r < j; ++r) {
            auto prod = polyvec_bilinear(fam.entry(i, r), fam.entry(r + 1, j), f_.one(),
                                         [&](const Vec& x, const Vec& y) { return A_.wedge(A_.bar(x), y); });
            polyvec_add(out, f_.one(), prod);
        }
        return out;
    }

    std::vector<std::pair<std::size_t, std::size_t>> stage_entries(const Run& run, std::size_t off) const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 1; i + off <= run.n; ++i)
            if (!(i == 1 && i + off == run.n)) out.emplace_back(i, i + off);
        return out;
    }

    std::vector<Poly<S>> constraints(const std::vector<PolyVec<S>>& targets) const {
        std::vector<Poly<S>> out;
        for (const auto& T : targets) {
            std::map<std::pair<MultiDegree, std::uint64_t>, Poly<S>> cons;
            for (const auto& [m, v] : T)
                for (auto& [d, part] : split_by_degree(A_, v))
                    for (auto& [c, x] : P_.at(d).residual(part)) poly_add(cons[{d, c}], m, x);
            for (auto& [k, p] : cons)
                if (!p.empty()) out.push_back(std::move(p));
        }
        return out;
    }

    static void apply(const Substitution<S>& sub, DefiningFamily<F>& fam, std::vector<PolyVec<S>>& targets,
                      std::size_t nparams) {
        for (auto& e : fam.entries) e = sub.apply(e);
        for (auto& t : targets) t = sub.apply(t);
        fam.nparams = nparams;
    }

    void stage(Run& run, DefiningFamily<F> fam, std::size_t off) const {
        if (run.found.size() >= opt_.max_fibers) {
            run.complete = false;
            return;
        }
        if (off > run.last_offset) {
            run.found.push_back(std::move(fam));
            return;
        }
        auto ents = stage_entries(run, off);
        std::vector<PolyVec<S>> targets;
        for (auto [i, j] : ents) targets.push_back(product_target(fam, i, j));
        resolve(run, std::move(fam), off, std::move(targets));
    }

    void resolve(Run& run, DefiningFamily<F> fam, std::size_t off, std::vector<PolyVec<S>> targets) const {
        auto cons = constraints(targets);
        std::size_t deg = 0;
        for (const auto& c : cons) {
            if (c.size() == 1 && c.begin()->first.empty()) return;  // nonzero constant obstruction
            deg = std::max(deg, degree(c));
        }
        if (deg >= 2) {
            std::vector<Mono> monos;
            for (const auto& c : cons)
                for (const auto& [m, x] : c) monos.push_back(m);
            auto cover = detail::linearizing_cover(monos);
            bool exhaustive = false;
            auto fibers = detail::fiber_values(f_, cover.size(), opt_.max_fibers, opt_.seed + off, exhaustive);
            if (!exhaustive) {
                run.complete = false;
                fam.complete = false;
            }
            std::vector<Poly<S>> images(fam.nparams);
            for (const auto& vals : fibers) {
                std::set<std::uint32_t> cset(cover.begin(), cover.end());
                std::uint32_t next = 0;
                for (std::uint32_t k = 0; k < fam.nparams; ++k) {
                    images[k].clear();
                    if (cset.count(k)) {
                        auto pos = std::find(cover.begin(), cover.end(), k) - cover.begin();
                        poly_add(images[k], Mono{}, vals[pos]);
                    } else {
                        images[k][Mono{next++}] = f_.one();
                    }
                }
                DefiningFamily<F> fam2 = fam;
                auto t2 = targets;
                apply(Substitution<S>(images, f_.one()), fam2, t2, next);
                resolve(run, std::move(fam2), off, std::move(t2));
                if (run.found.size() >= opt_.max_fibers) {
                    run.complete = false;
                    return;
                }
            }
            return;
        }
        if (!cons.empty()) {
            SparseMatrix<S> M(cons.size(), fam.nparams);
            std::vector<S> rhs(cons.size(), f_.zero());
            for (std::size_t r = 0; r < cons.size(); ++r)
                for (const auto& [m, x] : cons[r]) {
                    if (m.empty()) rhs[r] = -x;
                    else M.set(r, m[0], x);
                }
            auto sol = solve_affine(f_, M, from_dense(rhs));
            if (!sol) return;
            auto p0 = to_dense(f_, sol->particular, fam.nparams);
            std::vector<Poly<S>> images(fam.nparams);
            for (std::uint32_t k = 0; k < fam.nparams; ++k) poly_add(images[k], Mono{}, p0[k]);
            for (std::uint32_t l = 0; l < sol->kernel_basis.size(); ++l)
                for (const auto& [k, x] : sol->kernel_basis[l]) poly_add(images[k], Mono{l}, x);
            apply(Substitution<S>(images, f_.one()), fam, targets,
                  static_cast<std::size_t>(sol->kernel_basis.size()));
        }
        // every target is now exact identically in the parameters
        auto ents = stage_entries(run, off);
        for (std::size_t t = 0; t < ents.size(); ++t) {
            auto [i, j] = ents[t];
            PolyVec<S> x;
            for (const auto& [m, v] : targets[t])
                for (auto& [d, part] : split_by_degree(A_, v)) {
                    auto pre = P_.at(d).preimage(part);
                    if (!pre) throw Error(ErrorKind::Inconsistency, "solvability condition did not hold after substitution");
                    polyvec_add(x, m, f_.one(), *pre);
                }
            auto dirs = parameter_directions(entry_degree(run.degs, i, j));
            if (fam.nparams + dirs.size() > opt_.budget) {
                if (!dirs.empty()) {
                    run.complete = false;
                    fam.complete = false;
                }
            } else {
                for (const auto& v : dirs) polyvec_add(x, Mono{static_cast<std::uint32_t>(fam.nparams++)}, f_.one(), v);
            }
            fam.entry(i, j) = std::move(x);
        }
        stage(run, std::move(fam), off + 1);
    }

    const PieceCache<F>& P_;
    const Dga<F>& A_;
    F f_;
    MasseyOptions opt_;
};

template <class F>
struct MasseyOutcome {
    using S = typename F::Scalar;
    MasseyStatus status = MasseyStatus::Undefined;
    Triviality triviality = Triviality::Unknown;
    bool complete = true;        // search was not cut by budget or sampling
    ValueLayout<F> layout;
    std::vector<S> value;                      // one element of the value set
    std::vector<std::vector<S>> indeterminacy; // directions when the value set is affine
    bool affine = false;
    std::vector<std::vector<S>> samples;       // values at the explored fibers
    std::optional<FormalConnection<F>> witness;
    SparseVector<S> value_rep;                 // cocycle representing `value`
    std::vector<ValueMap<F>> maps;             // one per explored family
    std::vector<DefiningFamily<F>> families;
};

/// Strictness certificate: multidegrees whose cohomology must vanish.
struct StrictnessCertificate {
    std::vector<MultiDegree> vanishing;
};

template <class F>
bool certificate_holds(const PieceCache<F>& P, const StrictnessCertificate& c) {
    for (const auto& d : c.vanishing)
        if (P.algebra().has_degree(d) && P.at(d).betti() != 0) return false;
    return true;
}

template <class F>
bool is_zero_vector(const std::vector<typename F::Scalar>& v) {
    return std::all_of(v.begin(), v.end(), [](const auto& x) { return is_zero(x); });
}

template <class F>
MasseyOutcome<F> massey(const PieceCache<F>& P, const std::vector<SparseVector<typename F::Scalar>>& classes,
                        const MasseyOptions& opt = {},
                        const std::optional<StrictnessCertificate>& cert = std::nullopt,
                        std::optional<std::vector<MultiDegree>> degrees = std::nullopt) {
    using S = typename F::Scalar;
    const auto& A = P.algebra();
    const auto& f = A.field();
    const std::size_t n = classes.size();
    if (n < 2) throw Error(ErrorKind::InvalidInput, "a Massey product needs at least two classes");
    for (const auto& c : classes)
        if (!A.d(c).empty()) throw Error(ErrorKind::InvalidInput, "class representative is not closed");
    MasseyEngine<F> E(P, opt);
    std::vector<MultiDegree> degs;
    if (degrees) degs = *degrees;
    else
        for (const auto& c : classes) degs.push_back(E.class_degree(c));
    if (!opt.homogeneous)
        for (auto& d : degs) d.aux.clear();

    MasseyOutcome<F> out;
    auto res = E.search(classes, degs, n - 2);
    out.complete = res.complete;
    if (res.families.empty()) return out;

    MultiDegree target = E.entry_degree(degs, 1, n).shifted(1);
    for (auto& fam : res.families) {
        auto obs = E.obstructions(fam, n - 1);
        out.maps.push_back(E.value_map(fam, obs, {target}));
        if (out.families.empty()) {
            out.value_rep = obs[0].count(Mono{}) ? obs[0].at(Mono{}) : SparseVector<S>{};
        }
        out.families.push_back(fam);
    }
    out.layout = out.maps[0].layout;
    out.value = out.maps[0].constant(f);
    for (const auto& V : out.maps) out.samples.push_back(V.constant(f));

    const auto& V0 = out.maps[0];
    bool single = out.maps.size() == 1 && out.complete;
    out.affine = single && V0.degree() <= 1;
    if (out.affine) {
        std::vector<SparseVector<S>> dirs;
        for (const auto& [m, c] : V0.coef)
            if (m.size() == 1) dirs.push_back(from_dense(c));
        for (auto& v : independent_subset(f, V0.layout.dim, dirs)) out.indeterminacy.push_back(to_dense(f, v, V0.layout.dim));
    }

    bool strict_cert = cert ? certificate_holds(P, *cert) : E.slots_acyclic(degs, n - 2);
    if (n == 2) {
        out.status = MasseyStatus::DefinedStrict;
    } else if (n == 3 && out.affine) {
        out.status = out.indeterminacy.empty() ? MasseyStatus::DefinedStrict : MasseyStatus::DefinedAffine;
    } else if (strict_cert) {
        out.status = MasseyStatus::DefinedStrict;
    } else {
        out.status = MasseyStatus::DefinedSampled;
    }

    // triviality
    std::vector<S> zero(V0.layout.dim, f.zero());
    bool all_exhaustive = true;
    for (std::size_t k = 0; k < out.maps.size(); ++k) {
        auto pt = find_point(f, out.maps[k], zero, opt);
        if (pt.point) {
            out.triviality = Triviality::Trivial;
            auto W = out.families[k].evaluate(f, *pt.point);
            auto c = connection_product(A, W, 1, n);
            SparseVector<S> corner;
            for (auto& [d, part] : split_by_degree(A, c)) {
                auto pre = P.at(d).preimage(part);
                if (!pre) throw Error(ErrorKind::Inconsistency, "trivializing point does not give an exact cocycle");
                axpy(corner, f.one(), *pre);
            }
            W.a(1, n) = corner;
            out.witness = W;
            return out;
        }
        if (!pt.exhaustive) all_exhaustive = false;
    }
    if (out.status == MasseyStatus::DefinedStrict && !is_zero_vector<F>(out.value)) out.triviality = Triviality::Nontrivial;
    else if (out.complete && all_exhaustive) out.triviality = Triviality::Nontrivial;
    out.witness = out.families[0].evaluate(f, std::vector<S>(out.families[0].nparams, f.zero()));
    return out;
}

/// Whether a given cocycle's class belongs to the computed value set.
template <class F>
PointSearch<F> value_contains(const PieceCache<F>& P, const MasseyOutcome<F>& out,
                              const SparseVector<typename F::Scalar>& z, const MasseyOptions& opt = {}) {
    const auto& f = P.algebra().field();
    auto target = out.layout.flatten(f, classify(P, z));
    PointSearch<F> res;
    res.exhaustive = out.complete;
    for (const auto& V : out.maps) {
        auto pt = find_point(f, V, target, opt);
        if (pt.point) return pt;
        if (!pt.exhaustive) res.exhaustive = false;
    }
    return res;
}

template <class F>
struct KStepOutcome {
    using S = typename F::Scalar;
    bool defined = false;
    bool complete = true;
    std::size_t k = 0;
    Triviality triviality = Triviality::Unknown;
    std::vector<ValueLayout<F>> layouts;      // one per tuple slot
    std::vector<std::vector<S>> classes;      // tuple at the base point
    std::optional<FormalConnection<F>> witness;
    std::vector<ValueMap<F>> maps;
};

/// k-step n-fold product: entries through offset k-1, obstruction tuple at offset k.
template <class F>
KStepOutcome<F> k_step_massey(const PieceCache<F>& P, const std::vector<SparseVector<typename F::Scalar>>& classes,
                              std::size_t k, const MasseyOptions& opt = {},
                              std::optional<std::vector<MultiDegree>> degrees = std::nullopt) {
    using S = typename F::Scalar;
    const auto& f = P.algebra().field();
    const std::size_t n = classes.size();
    if (k < 1 || k >= n) throw Error(ErrorKind::InvalidInput, "step must lie in 1..n-1");
    MasseyEngine<F> E(P, opt);
    std::vector<MultiDegree> degs;
    if (degrees) degs = *degrees;
    else
        for (const auto& c : classes) degs.push_back(E.class_degree(c));
    if (!opt.homogeneous)
        for (auto& d : degs) d.aux.clear();
    KStepOutcome<F> out;
    out.k = k;
    auto res = E.search(classes, degs, k - 1);
    out.complete = res.complete;
    if (res.families.empty()) return out;
    out.defined = true;
    std::vector<MultiDegree> obs_deg;
    for (std::size_t i = 1; i + k <= n; ++i) obs_deg.push_back(E.entry_degree(degs, i, i + k).shifted(1));
    for (const auto& d : obs_deg) out.layouts.push_back(E.layout(d));
    for (const auto& fam : res.families) out.maps.push_back(E.value_map(fam, E.obstructions(fam, k), obs_deg));
    auto flat = out.maps[0].constant(f);
    std::size_t pos = 0;
    for (const auto& L : out.layouts) {
        out.classes.emplace_back(flat.begin() + pos, flat.begin() + pos + L.dim);
        pos += L.dim;
    }
    std::vector<S> zero(out.maps[0].layout.dim, f.zero());
    bool all_exhaustive = true;
    for (std::size_t t = 0; t < out.maps.size(); ++t) {
        auto pt = find_point(f, out.maps[t], zero, opt);
        if (pt.point) {
            out.triviality = Triviality::Trivial;
            out.witness = res.families[t].evaluate(f, *pt.point);
            return out;
        }
        if (!pt.exhaustive) all_exhaustive = false;
    }
    if (out.complete && all_exhaustive) out.triviality = Triviality::Nontrivial;
    out.witness = res.families[0].evaluate(f, std::vector<S>(res.families[0].nparams, f.zero()));
    return out;
}

}  // namespace massey
