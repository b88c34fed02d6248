#pragma once

// Polynomials in free parameters with scalar or cochain coefficients.
//
// Defining systems are searched symbolically: every kernel direction at a
// stage becomes a parameter, and later entries depend polynomially on them.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <type_traits>
#include <vector>

#include "massey/field.hpp"
#include "massey/linalg.hpp"

namespace massey {

/// Sorted multiset of parameter ids.
using Mono = std::vector<std::uint32_t>;

inline Mono mono_mul(const Mono& a, const Mono& b) {
    Mono m;
    m.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
    return m;
}

template <class S>
using Poly = std::map<Mono, S>;

template <class S>
using PolyVec = std::map<Mono, SparseVector<S>>;

template <class S>
void poly_add(Poly<S>& p, const Mono& m, const std::type_identity_t<S>& c) {
    if (is_zero(c)) return;
    auto it = p.find(m);
    if (it == p.end()) {
        p.emplace(m, c);
        return;
    }
    it->second += c;
    if (is_zero(it->second)) p.erase(it);
}

template <class S>
void polyvec_add(PolyVec<S>& p, const Mono& m, const std::type_identity_t<S>& c, const SparseVector<S>& v) {
    if (is_zero(c) || v.empty()) return;
    auto& slot = p[m];
    axpy(slot, c, v);
    if (slot.empty()) p.erase(m);
}

template <class S>
void polyvec_add(PolyVec<S>& p, const std::type_identity_t<S>& c, const PolyVec<S>& q) {
    for (const auto& [m, v] : q) polyvec_add(p, m, c, v);
}

template <class S>
std::size_t degree(const Poly<S>& p) {
    std::size_t d = 0;
    for (const auto& [m, c] : p) d = std::max(d, m.size());
    return d;
}

template <class S>
std::size_t degree(const PolyVec<S>& p) {
    std::size_t d = 0;
    for (const auto& [m, c] : p) d = std::max(d, m.size());
    return d;
}

template <class S>
std::set<std::uint32_t> params_of(const PolyVec<S>& p) {
    std::set<std::uint32_t> s;
    for (const auto& [m, c] : p) s.insert(m.begin(), m.end());
    return s;
}

/// Applies a cochain-level bilinear map termwise: sum over monomial pairs.
template <class S, class Bin>
PolyVec<S> polyvec_bilinear(const PolyVec<S>& a, const PolyVec<S>& b, const S& one, Bin&& op) {
    PolyVec<S> out;
    for (const auto& [ma, va] : a)
        for (const auto& [mb, vb] : b) polyvec_add(out, mono_mul(ma, mb), one, op(va, vb));
    return out;
}

template <class S, class Un>
PolyVec<S> polyvec_map(const PolyVec<S>& a, const S& one, Un&& op) {
    PolyVec<S> out;
    for (const auto& [m, v] : a) polyvec_add(out, m, one, op(v));
    return out;
}

/// Substitution p_k -> subst[k] (a scalar polynomial in new parameters).
template <class S>
class Substitution {
public:
    Substitution(std::vector<Poly<S>> images, S one) : images_(std::move(images)), one_(one) {}

    Poly<S> apply(const Poly<S>& p) const {
        Poly<S> out;
        for (const auto& [m, c] : p)
            for (const auto& [mm, cc] : expand(m)) poly_add(out, mm, c * cc);
        return out;
    }

    PolyVec<S> apply(const PolyVec<S>& p) const {
        PolyVec<S> out;
        for (const auto& [m, v] : p)
            for (const auto& [mm, cc] : expand(m)) polyvec_add(out, mm, cc, v);
        return out;
    }

private:
    Poly<S> expand(const Mono& m) const {
        Poly<S> acc{{Mono{}, one_}};
        for (auto k : m) {
            Poly<S> next;
            for (const auto& [ma, ca] : acc)
                for (const auto& [mb, cb] : images_.at(k)) poly_add(next, mono_mul(ma, mb), ca * cb);
            acc = std::move(next);
        }
        return acc;
    }
    std::vector<Poly<S>> images_;
    S one_;
};

}  // namespace massey
