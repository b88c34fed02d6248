#pragma once

// N-graded Lie algebras, their weight-truncated Chevalley-Eilenberg windows,
// and the omega-cocycle calculus on the infinite filiform algebra m0.
//
// d on the dual basis is the positive transpose of the bracket:
//   d e^k = sum_{i<j} c_{ij}^k e^i ^ e^j
// so that d e^3 = e^1 ^ e^2 in both m0 and W+. The differential preserves
// weight, hence the weight-w part of a window computed up to w_max is the
// weight-w part of the full complex for every w <= w_max.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "massey/dga.hpp"
#include "massey/field.hpp"
#include "massey/massey.hpp"

namespace massey {

template <class F>
typename F::Scalar from_rational(const F& f, const mpq_class& q) {
    if constexpr (std::is_same_v<F, Rationals>) return q;
    else return f.parse(q.get_str());
}

struct GradedLie {
    struct Generator {
        int i;
        int w;
    };
    std::string name;
    std::vector<Generator> generators;                                   // sorted by index
    std::map<std::pair<int, int>, std::vector<std::pair<int, mpq_class>>> brackets;  // i < j
    int truncation = 0;

    std::optional<std::size_t> position(int i) const {
        for (std::size_t k = 0; k < generators.size(); ++k)
            if (generators[k].i == i) return k;
        return std::nullopt;
    }
    int weight(int i) const { return generators.at(*position(i)).w; }

    /// [e_i, e_j] as (k, coefficient) terms.
    std::vector<std::pair<int, mpq_class>> bracket(int i, int j) const {
        if (i == j) return {};
        bool swap = i > j;
        auto it = brackets.find(swap ? std::pair{j, i} : std::pair{i, j});
        if (it == brackets.end()) return {};
        auto out = it->second;
        if (swap)
            for (auto& t : out) t.second = -t.second;
        return out;
    }

    void validate() const {
        for (std::size_t k = 1; k < generators.size(); ++k)
            if (generators[k].i <= generators[k - 1].i) throw Error(ErrorKind::InvalidInput, "generator indices must increase");
        for (const auto& [ij, terms] : brackets) {
            if (ij.first >= ij.second) throw Error(ErrorKind::InvalidInput, "brackets are keyed by i < j");
            if (!position(ij.first) || !position(ij.second)) throw Error(ErrorKind::InvalidInput, "bracket of unknown generator");
            for (const auto& [k, c] : terms) {
                if (!position(k)) throw Error(ErrorKind::InvalidInput, "bracket lands on unknown generator");
                if (weight(k) != weight(ij.first) + weight(ij.second))
                    throw Error(ErrorKind::InvalidInput, "bracket violates weight additivity");
            }
        }
    }

    /// Jacobi identity on all triples of generators (exact, over Q).
    bool jacobi_holds() const {
        auto br = [&](const std::map<int, mpq_class>& x, int j) {
            std::map<int, mpq_class> out;
            for (const auto& [i, c] : x)
                for (const auto& [k, v] : bracket(i, j)) out[k] += c * v;
            return out;
        };
        for (const auto& a : generators)
            for (const auto& b : generators)
                for (const auto& c : generators) {
                    if (!(a.i < b.i && b.i < c.i)) continue;
                    std::map<int, mpq_class> s;
                    auto add = [&](int x, int y, int z) {
                        std::map<int, mpq_class> xy;
                        for (const auto& [k, v] : bracket(x, y)) xy[k] += v;
                        for (const auto& [k, v] : br(xy, z)) s[k] += v;
                    };
                    add(a.i, b.i, c.i);
                    add(b.i, c.i, a.i);
                    add(c.i, a.i, b.i);
                    for (const auto& [k, v] : s)
                        if (sgn(v) != 0) return false;
                }
        return true;
    }
};

/// [e_1, e_i] = e_{i+1} for i >= 2, all other brackets of basis vectors zero.
inline GradedLie m0(int W) {
    if (W < 2) throw Error(ErrorKind::InvalidInput, "m0 needs W >= 2");
    GradedLie g;
    g.name = "m0";
    g.truncation = W;
    for (int i = 1; i <= W; ++i) g.generators.push_back({i, i});
    for (int i = 2; i + 1 <= W; ++i) g.brackets[{1, i}] = {{i + 1, mpq_class(1)}};
    return g;
}

/// Positive Witt algebra, [e_i, e_j] = (j - i) e_{i+j}.
inline GradedLie witt_plus(int W) {
    if (W < 2) throw Error(ErrorKind::InvalidInput, "witt_plus needs W >= 2");
    GradedLie g;
    g.name = "witt_plus";
    g.truncation = W;
    for (int i = 1; i <= W; ++i) g.generators.push_back({i, i});
    for (int i = 1; i <= W; ++i)
        for (int j = i + 1; i + j <= W; ++j) g.brackets[{i, j}] = {{i + j, mpq_class(j - i)}};
    return g;
}

/// Sign of sorting a sequence of distinct ints; 0 if an entry repeats.
inline int sort_sign(std::vector<int>& v) {
    int s = 1;
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b) {
            if (v[a] == v[b]) return 0;
            if (v[a] > v[b]) s = -s;
        }
    std::sort(v.begin(), v.end());
    return s;
}

template <class F>
struct CEWindow {
    using S = typename F::Scalar;
    GradedLie g;
    int qmax = 0;
    int wmax = 0;
    std::unique_ptr<Dga<F>> dga;
    std::unique_ptr<PieceCache<F>> pieces;

    const Dga<F>& algebra() const { return *dga; }
    const PieceCache<F>& cache() const { return *pieces; }

    std::uint64_t key(std::vector<int> idx, int* sign = nullptr) const {
        int s = sort_sign(idx);
        if (s == 0) throw Error(ErrorKind::InvalidInput, "repeated index in an exterior monomial");
        if (sign) *sign = s;
        std::uint64_t k = 0;
        for (int i : idx) {
            auto p = g.position(i);
            if (!p) throw Error(ErrorKind::IndexError, "no generator e" + std::to_string(i));
            k |= std::uint64_t(1) << *p;
        }
        return k;
    }
    /// e^{i1} ^ ... ^ e^{iq} (any order; sign applied).
    SparseVector<S> form(const std::vector<int>& idx) const {
        int s = 1;
        auto k = key(idx, &s);
        auto v = dga->from_key(k);
        return s > 0 ? v : scaled(v, -dga->field().one());
    }
    SparseVector<S> e(int i) const { return form({i}); }
    MultiDegree degree(int q, int w) const { return MultiDegree{q, {w}}; }
};

/// Chevalley-Eilenberg window: exterior monomials of degree <= qmax + 1 and weight <= wmax.
template <class F>
CEWindow<F> ce_window(const F& f, const GradedLie& g, int qmax, int wmax) {
    using S = typename F::Scalar;
    if (g.truncation && wmax > g.truncation) throw Error(ErrorKind::WindowTooSmall, "w_max exceeds the truncation weight");
    if (g.generators.size() > 63) throw Error(ErrorKind::CapExceeded, "at most 63 generators");
    g.validate();
    CEWindow<F> win;
    win.g = g;
    win.qmax = qmax;
    win.wmax = wmax;
    std::vector<int> idx, wt;
    for (const auto& gen : g.generators) {
        idx.push_back(gen.i);
        wt.push_back(gen.w);
    }
    const std::size_t N = idx.size();

    using BE = typename Dga<F>::BasisElement;
    std::vector<BE> basis;
    std::vector<int> cur;
    auto name_of = [&](const std::vector<int>& c) {
        if (c.empty()) return std::string("1");
        std::string s;
        for (std::size_t t = 0; t < c.size(); ++t) s += (t ? "^e" : "e") + std::to_string(idx[c[t]]);
        return s;
    };
    std::function<void(std::size_t, int, std::uint64_t)> rec = [&](std::size_t start, int w, std::uint64_t mask) {
        basis.push_back(BE{mask, MultiDegree{static_cast<int>(cur.size()), {w}}, name_of(cur)});
        if (static_cast<int>(cur.size()) == qmax + 1) return;
        for (std::size_t p = start; p < N; ++p) {
            if (w + wt[p] > wmax) continue;
            cur.push_back(static_cast<int>(p));
            rec(p + 1, w + wt[p], mask | (std::uint64_t(1) << p));
            cur.pop_back();
        }
    };
    rec(0, 0, 0);

    // d e^k for each generator position
    std::vector<std::vector<std::pair<std::pair<std::size_t, std::size_t>, S>>> dgen(N);
    for (const auto& [ij, terms] : g.brackets)
        for (const auto& [k, c] : terms) {
            auto pk = *g.position(k);
            dgen[pk].push_back({{*g.position(ij.first), *g.position(ij.second)}, from_rational(f, c)});
        }

    auto diff = [dgen, f, N](std::uint64_t mask) {
        std::vector<std::pair<std::uint64_t, S>> out;
        std::vector<int> pos;
        for (std::size_t p = 0; p < N; ++p)
            if (mask >> p & 1) pos.push_back(static_cast<int>(p));
        for (std::size_t t = 0; t < pos.size(); ++t)
            for (const auto& [ij, c] : dgen[pos[t]]) {
                std::vector<int> seq;
                for (std::size_t u = 0; u < t; ++u) seq.push_back(pos[u]);
                seq.push_back(static_cast<int>(ij.first));
                seq.push_back(static_cast<int>(ij.second));
                for (std::size_t u = t + 1; u < pos.size(); ++u) seq.push_back(pos[u]);
                int s = sort_sign(seq);
                if (s == 0) continue;
                if (t % 2) s = -s;
                std::uint64_t k = 0;
                for (int p : seq) k |= std::uint64_t(1) << p;
                out.emplace_back(k, s > 0 ? c : -c);
            }
        return out;
    };
    auto prod = [](std::uint64_t a, std::uint64_t b) -> std::optional<SignedKey> {
        if (a & b) return std::nullopt;
        // sign: pairs (x in a, y in b) with x > y
        int inv = 0;
        for (std::uint64_t m = b; m; m &= m - 1) {
            int y = std::countr_zero(m);
            inv += std::popcount(a >> (y + 1));
        }
        return SignedKey{a | b, inv % 2 ? -1 : 1};
    };
    win.dga = std::make_unique<Dga<F>>(f, std::move(basis), diff, prod);
    win.pieces = std::make_unique<PieceCache<F>>(*win.dga);
    return win;
}

/// dim H^q_w(W+) for 1 <= q <= qmax, 1 <= w <= wmax.
template <class F>
std::map<std::pair<int, int>, std::size_t> goncharova_table(const F& f, int qmax, int wmax) {
    auto win = ce_window(f, witt_plus(std::max(wmax, 2)), qmax, wmax);
    std::map<std::pair<int, int>, std::size_t> out;
    for (int q = 1; q <= qmax; ++q)
        for (int w = 1; w <= wmax; ++w) {
            auto d = win.degree(q, w);
            out[{q, w}] = win.dga->has_degree(d) ? win.pieces->at(d).betti() : 0;
        }
    return out;
}

// ---- formal exterior forms in e^2, e^3, ... ----

/// Linear combination of sorted exterior monomials with rational coefficients.
using Form = std::map<std::vector<int>, mpq_class>;

inline void form_add(Form& x, std::vector<int> m, const mpq_class& c) {
    int s = sort_sign(m);
    if (s == 0 || sgn(c) == 0) return;
    auto& slot = x[m];
    slot += s > 0 ? c : -c;
    if (sgn(slot) == 0) x.erase(m);
}

inline Form form_wedge(const Form& a, const Form& b) {
    Form out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            std::vector<int> m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            form_add(out, m, ca * cb);
        }
    return out;
}

inline Form monomial(std::vector<int> m, const mpq_class& c = 1) {
    Form f;
    form_add(f, std::move(m), c);
    return f;
}

inline void require_no_e1(const Form& x) {
    for (const auto& [m, c] : x)
        if (!m.empty() && m.front() <= 1) throw Error(ErrorKind::DomainError, "operator defined on forms in e^2, e^3, ... only");
}

/// D1 = ad* e_1: derivation with D1 e^2 = 0, D1 e^i = e^{i-1}.
inline Form d1(const Form& x) {
    require_no_e1(x);
    Form out;
    for (const auto& [m, c] : x)
        for (std::size_t t = 0; t < m.size(); ++t) {
            if (m[t] == 2) continue;
            auto n = m;
            n[t] -= 1;
            form_add(out, n, c);
        }
    return out;
}

inline Form d1_power(Form x, int l) {
    for (int k = 0; k < l && !x.empty(); ++k) x = d1(x);
    return x;
}

/// Right inverse of D1: D_{-1}(xi ^ e^i) = sum_l (-1)^l D1^l(xi) ^ e^{i+1+l}, e^i the top factor.
inline Form d_minus1(const Form& x) {
    require_no_e1(x);
    Form out;
    for (const auto& [m, c] : x) {
        if (m.empty()) throw Error(ErrorKind::DomainError, "D_{-1} is not defined on constants");
        int i = m.back();
        Form xi = monomial(std::vector<int>(m.begin(), m.end() - 1), c);
        for (int l = 0; !xi.empty(); ++l) {
            Form term = form_wedge(xi, monomial({i + 1 + l}));
            for (const auto& [mm, cc] : term) form_add(out, mm, l % 2 ? -cc : cc);
            xi = d1(xi);
        }
    }
    return out;
}

/// omega(Z ^ e^a ^ e^{a+1}) = sum_l (-1)^l D1^l(Z ^ e^a) ^ e^{a+1+l}, linear in Z.
inline Form omega_of(const Form& z, int a) {
    Form head = form_wedge(z, monomial({a}));
    Form out;
    for (int l = 0; !head.empty(); ++l) {
        for (const auto& [m, c] : form_wedge(head, monomial({a + 1 + l}))) form_add(out, m, l % 2 ? -c : c);
        head = d1(head);
    }
    return out;
}

struct OmegaCocycle {
    std::vector<int> indices;  // i1 < ... < iq < iq + 1
    Form form;
    int degree() const { return static_cast<int>(indices.size()); }
    int weight() const {
        int w = 0;
        for (int i : indices) w += i;
        return w;
    }
};

/// omega(e^{i1} ^ ... ^ e^{iq} ^ e^{iq+1}); the argument lists all q+1 indices.
inline OmegaCocycle omega(const std::vector<int>& idx) {
    if (idx.size() < 2) throw Error(ErrorKind::IndexError, "omega needs at least two indices");
    if (idx.front() < 2) throw Error(ErrorKind::IndexError, "omega indices start at 2");
    for (std::size_t t = 1; t < idx.size(); ++t)
        if (idx[t] <= idx[t - 1]) throw Error(ErrorKind::IndexError, "omega indices must increase");
    if (idx.back() != idx[idx.size() - 2] + 1) throw Error(ErrorKind::IndexError, "last two omega indices must be consecutive");
    OmegaCocycle w;
    w.indices = idx;
    int a = idx[idx.size() - 2];
    w.form = omega_of(monomial(std::vector<int>(idx.begin(), idx.end() - 2)), a);
    return w;
}

template <class F>
SparseVector<typename F::Scalar> to_cochain(const CEWindow<F>& win, const Form& x) {
    SparseVector<typename F::Scalar> out;
    const auto& f = win.dga->field();
    for (const auto& [m, c] : x) axpy(out, from_rational(f, c), win.form(m));
    return out;
}

/// Operand of the closed-form product rule of H*(m0).
struct M0Class {
    int generator = 0;                  // 1 or 2 for [e^1], [e^2]; 0 for an omega class
    std::optional<OmegaCocycle> omega;
};

/// Expansion of a D1-closed form in Lambda^{>=2}(e^2, e^3, ...) in the omega basis.
/// The l = 0 monomial of omega(I) has the smallest top index among its monomials, so peeling
/// off the monomial with the smallest top index terminates.
inline std::map<std::vector<int>, mpq_class> omega_expansion(Form x) {
    require_no_e1(x);
    std::map<std::vector<int>, mpq_class> out;
    while (!x.empty()) {
        auto lead = x.begin();
        for (auto it = x.begin(); it != x.end(); ++it)
            if (it->first.back() < lead->first.back()) lead = it;
        const auto m = lead->first;
        const mpq_class c = lead->second;
        if (m.size() < 2 || m[m.size() - 2] + 1 != m.back())
            throw Error(ErrorKind::DomainError, "form is not in the kernel of D1");
        out[m] = c;
        for (const auto& [mm, cc] : omega(m).form) form_add(x, mm, -c * cc);
    }
    return out;
}

/// Product in H*(m0) of [e^1], [e^2] or an omega class with an omega class, as a combination of omega forms.
/// Lambda(e^2, e^3, ...) carries no coboundaries, so the class of the product is the form itself.
inline Form m0_product(const M0Class& x, const OmegaCocycle& y) {
    const auto& yi = y.indices;
    const int j = yi[yi.size() - 2];
    Form eta = monomial(std::vector<int>(yi.begin(), yi.end() - 2));
    if (x.generator == 1) return {};
    if (x.generator == 2) return omega_of(form_wedge(monomial({2}), eta), j);
    if (x.generator != 0 || !x.omega) throw Error(ErrorKind::UnsupportedOperands, "operands must be e^1, e^2 or omega classes");
    Form out;
    for (const auto& [idx, c] : omega_expansion(form_wedge(x.omega->form, y.form)))
        for (const auto& [m, cc] : omega(idx).form) form_add(out, m, c * cc);
    return out;
}

// ---- one-dimensional Massey products in H*(m0) ----

/// Classes alpha e^1 + beta e^2.
using LinearClass = std::pair<mpq_class, mpq_class>;

enum class Family { A, B, C, D };

/// Class list of a family of trivial products. Parameters:
///   A: (alpha, beta); B: (alpha, beta), alpha != 0; C: (l, alpha); D: (alpha, beta), n even.
inline std::vector<LinearClass> family_classes(Family fam, int n, const mpq_class& p1, const mpq_class& p2) {
    std::vector<LinearClass> out;
    switch (fam) {
        case Family::A:
            for (int i = 0; i < n; ++i) out.emplace_back(p1, p2);
            break;
        case Family::B:
            if (sgn(p1) == 0) throw Error(ErrorKind::InvalidInput, "family B needs alpha != 0");
            for (int i = 1; i <= n; ++i) out.emplace_back(i * p1 + p2, mpq_class(1));
            break;
        case Family::C: {
            if (p1.get_den() != 1 || p1 < 0 || p1 > n - 1) throw Error(ErrorKind::InvalidInput, "family C needs 0 <= l <= n-1");
            int l = static_cast<int>(p1.get_num().get_si());
            for (int i = 0; i < n; ++i) out.emplace_back(i == l ? p2 : mpq_class(1), mpq_class(i == l ? 1 : 0));
            break;
        }
        case Family::D:
            if (n < 4 || n % 2) throw Error(ErrorKind::InvalidInput, "family D has an even number >= 4 of classes");
            out.emplace_back(p1, mpq_class(1));
            for (int i = 0; i < n - 2; ++i) out.emplace_back(mpq_class(1), mpq_class(0));
            out.emplace_back(p2, mpq_class(1));
            break;
    }
    return out;
}

/// beta1 (alpha2 beta3 - alpha3 beta2) - beta3 (alpha1 beta2 - alpha2 beta1)
inline mpq_class triple_criterion(const std::vector<LinearClass>& c) {
    if (c.size() != 3) throw Error(ErrorKind::InvalidInput, "criterion is for triples");
    const auto& [a1, b1] = c[0];
    const auto& [a2, b2] = c[1];
    const auto& [a3, b3] = c[2];
    return b1 * (a2 * b3 - a3 * b2) - b3 * (a1 * b2 - a2 * b1);
}

/// Massey product of classes alpha e^1 + beta e^2 in H*(m0), computed by the
/// engine on an m0 window large enough for every entry and trivialization.
template <class F>
MasseyOutcome<F> classify_1d_massey(const F& f, const std::vector<LinearClass>& classes, MasseyOptions opt = {}) {
    const int n = static_cast<int>(classes.size());
    auto win = ce_window(f, m0(2 * n + 2), 2, 2 * n + 2);
    std::vector<SparseVector<typename F::Scalar>> reps;
    for (const auto& [a, b] : classes) {
        SparseVector<typename F::Scalar> v;
        axpy(v, from_rational(f, a), win.e(1));
        axpy(v, from_rational(f, b), win.e(2));
        reps.push_back(v);
    }
    opt.homogeneous = false;
    std::vector<MultiDegree> degs(classes.size(), MultiDegree{1, {}});
    return massey(win.cache(), reps, opt, std::nullopt, degs);
}

}  // namespace massey
