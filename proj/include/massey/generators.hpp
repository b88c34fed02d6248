#pragma once

// Named complexes: cubes, 2-truncated cubes Q^n, multiwedges K(J), polygons
// and the boundary of the icosahedron (nerve of the dodecahedron).

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "massey/face_rings.hpp"

namespace massey {

/// Boundary of the n-cube's dual: vertices F_1..F_2n, non-faces {i, n+i}.
inline SimplicialComplex cube(int n) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "cube needs n >= 1");
    std::vector<VSet> nf;
    for (int i = 0; i < n; ++i) nf.push_back(VSet(1) << i | VSet(1) << (n + i));
    return SimplicialComplex::from_nonfaces(2 * n, nf);
}

/// Vertex labels of Q^n: v1..v2n, then v(k, n+k+i) for i = 1..n-2, k = 1..n-i.
struct QnLabels {
    int n = 0;
    std::vector<std::string> names;
    std::map<std::pair<int, int>, int> truncation;  // (k, j) -> 0-based vertex
};

inline QnLabels qn_labels(int n) {
    QnLabels L;
    L.n = n;
    for (int j = 1; j <= 2 * n; ++j) L.names.push_back("v" + std::to_string(j));
    for (int i = 1; i <= n - 2; ++i)
        for (int k = 1; k <= n - i; ++k) {
            L.truncation[{k, n + k + i}] = static_cast<int>(L.names.size());
            L.names.push_back("v" + std::to_string(k) + "," + std::to_string(n + k + i));
        }
    return L;
}

/// 2-truncated cube Q^n via its Stanley-Reisner generators.
inline SimplicialComplex qn(int n) {
    if (n < 2) throw Error(ErrorKind::InvalidInput, "Q^n needs n >= 2");
    auto L = qn_labels(n);
    auto v = [](int j) { return VSet(1) << (j - 1); };
    std::vector<VSet> nf;
    for (int i = 0; i <= n - 2; ++i)
        for (int k = 1; k <= n - i; ++k) nf.push_back(v(k) | v(n + k + i));
    for (const auto& [kj, idx] : L.truncation) {
        const int k = kj.first, i = kj.second - n - k;
        const VSet w = VSet(1) << idx;
        for (int l = 0; l <= n - 2; ++l)
            if (l != i && n + k + l <= 2 * n) nf.push_back(w | v(n + k + l));
        for (int p = k + 1; p <= k + i; ++p) nf.push_back(w | v(p));
        for (const auto& [kj2, idx2] : L.truncation) {
            const int k2 = kj2.first, i2 = kj2.second - n - k2;
            if (k + i == k2 || k2 + i2 == k) nf.push_back(w | VSet(1) << idx2);
        }
    }
    return SimplicialComplex::from_nonfaces(static_cast<int>(L.names.size()), nf);
}

/// Supports {i, n+i} (0-based masks) of the classes alpha_i on Q^n.
inline std::vector<VSet> qn_supports(int n) {
    std::vector<VSet> s;
    for (int i = 0; i < n; ++i) s.push_back(VSet(1) << i | VSet(1) << (n + i));
    return s;
}

/// K(J): vertex i becomes j_i consecutive copies; each minimal non-face expands to
/// the union of all copies of its vertices.
inline SimplicialComplex multiwedge(const SimplicialComplex& K, const std::vector<int>& J) {
    if (static_cast<int>(J.size()) != K.m()) throw Error(ErrorKind::InvalidInput, "J must have one entry per vertex");
    std::vector<VSet> copies;
    int next = 0;
    for (int j : J) {
        if (j < 1) throw Error(ErrorKind::InvalidInput, "J entries must be positive");
        if (next + j > 32) throw Error(ErrorKind::CapExceeded, "multiwedge exceeds 32 vertices");
        copies.push_back(((VSet(1) << j) - 1) << next);
        next += j;
    }
    std::vector<VSet> nf;
    for (VSet n : K.minimal_nonfaces()) {
        VSet e = 0;
        for (int v : vertices_of(n)) e |= copies[v];
        nf.push_back(e);
    }
    return SimplicialComplex::from_nonfaces(next, nf);
}

/// Boundary of an m-gon: vertices 1..m in cyclic order.
inline SimplicialComplex polygon(int m) {
    if (m < 3) throw Error(ErrorKind::InvalidInput, "polygon needs m >= 3");
    std::vector<VSet> facets;
    for (int i = 0; i < m; ++i) facets.push_back(VSet(1) << i | VSet(1) << ((i + 1) % m));
    return SimplicialComplex::from_facets(m, facets);
}

namespace detail {
// apex 1, upper ring 2..6, lower ring 7..11, apex 12
inline constexpr std::array<std::array<int, 3>, 20> kIcosahedron{{
    {1, 2, 3},   {1, 3, 4},   {1, 4, 5},   {1, 5, 6},   {1, 6, 2},
    {2, 3, 7},   {3, 4, 8},   {4, 5, 9},   {5, 6, 10},  {6, 2, 11},
    {3, 7, 8},   {4, 8, 9},   {5, 9, 10},  {6, 10, 11}, {2, 11, 7},
    {12, 7, 8},  {12, 8, 9},  {12, 9, 10}, {12, 10, 11}, {12, 11, 7},
}};
inline constexpr std::uint64_t kIcosahedronChecksum = 0x56b1f7b3916d8d28ULL;

inline std::uint64_t facet_checksum(const std::vector<VSet>& facets) {
    std::uint64_t h = 1469598103934665603ULL;
    for (VSet f : facets) {
        h ^= f;
        h *= 1099511628211ULL;
    }
    return h;
}
}  // namespace detail

/// Icosahedral 2-sphere on 12 vertices: the nerve of the dodecahedron's facets.
inline SimplicialComplex dodecahedron_nerve() {
    std::vector<VSet> facets;
    for (const auto& t : detail::kIcosahedron) facets.push_back(vset({t[0] - 1, t[1] - 1, t[2] - 1}));
    std::sort(facets.begin(), facets.end());
    if (detail::facet_checksum(facets) != detail::kIcosahedronChecksum)
        throw Error(ErrorKind::Inconsistency, "embedded icosahedron data is corrupt");
    return SimplicialComplex::from_facets(12, facets);
}

}  // namespace massey
