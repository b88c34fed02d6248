#pragma once

// Exact sparse linear algebra over a field.
//
// Vectors are sorted lists of (index, nonzero value). Elimination is
// incremental: vectors are inserted in order and each new vector is reduced
// against the existing rows, so the pivot rule is "lowest row first, then
// lowest column". Results are bit-identical across runs.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "massey/error.hpp"
#include "massey/field.hpp"

namespace massey {

template <class S>
using SparseVector = std::vector<std::pair<std::uint64_t, S>>;

/// y += c * x (both sorted; zeros are dropped).
template <class S>
void axpy(SparseVector<S>& y, const std::type_identity_t<S>& c, const SparseVector<S>& x) {
    if (is_zero(c) || x.empty()) return;
    SparseVector<S> out;
    out.reserve(y.size() + x.size());
    auto a = y.begin();
    auto b = x.begin();
    while (a != y.end() || b != x.end()) {
        if (b == x.end() || (a != y.end() && a->first < b->first)) {
            out.push_back(std::move(*a));
            ++a;
        } else if (a == y.end() || b->first < a->first) {
            out.emplace_back(b->first, c * b->second);
            ++b;
        } else {
            S v = a->second + c * b->second;
            if (!is_zero(v)) out.emplace_back(a->first, std::move(v));
            ++a;
            ++b;
        }
    }
    y = std::move(out);
}

template <class S>
SparseVector<S> scaled(const SparseVector<S>& x, const std::type_identity_t<S>& c) {
    SparseVector<S> out;
    if (is_zero(c)) return out;
    out.reserve(x.size());
    for (const auto& [i, v] : x) out.emplace_back(i, c * v);
    return out;
}

/// Builds a sorted sparse vector from unsorted (index, value) pairs, summing duplicates.
template <class S>
SparseVector<S> make_sparse(std::vector<std::pair<std::uint64_t, S>> terms) {
    std::stable_sort(terms.begin(), terms.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVector<S> out;
    for (auto& t : terms) {
        if (!out.empty() && out.back().first == t.first) {
            out.back().second += t.second;
            if (is_zero(out.back().second)) out.pop_back();
        } else if (!is_zero(t.second)) {
            out.push_back(std::move(t));
        }
    }
    return out;
}

template <class S>
SparseVector<S> from_dense(const std::vector<S>& d) {
    SparseVector<S> out;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (!is_zero(d[i])) out.emplace_back(i, d[i]);
    return out;
}

template <class F>
std::vector<typename F::Scalar> to_dense(const F& f, const SparseVector<typename F::Scalar>& v, std::size_t n) {
    std::vector<typename F::Scalar> d(n, f.zero());
    for (const auto& [i, x] : v) d.at(i) = x;
    return d;
}

template <class S>
struct SparseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<SparseVector<S>> row_data;  // row_data[i] holds the nonzeros of row i

    SparseMatrix() = default;
    SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), row_data(r) {}

    static SparseMatrix from_columns(std::size_t r, const std::vector<SparseVector<S>>& columns) {
        SparseMatrix m(r, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j)
            for (const auto& [i, v] : columns[j]) {
                if (i >= r) throw Error(ErrorKind::IndexError, "column entry out of range");
                m.row_data[i].emplace_back(j, v);
            }
        return m;
    }

    void set(std::size_t i, std::size_t j, const S& v) {
        if (i >= rows || j >= cols) throw Error(ErrorKind::IndexError, "matrix index out of range");
        auto& r = row_data[i];
        auto it = std::lower_bound(r.begin(), r.end(), j, [](const auto& e, std::uint64_t k) { return e.first < k; });
        if (it != r.end() && it->first == j) {
            if (is_zero(v)) r.erase(it);
            else it->second = v;
        } else if (!is_zero(v)) {
            r.insert(it, {j, v});
        }
    }

    std::vector<SparseVector<S>> columns() const {
        std::vector<SparseVector<S>> c(cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (const auto& [j, v] : row_data[i]) c[j].emplace_back(i, v);
        return c;
    }

    SparseVector<S> apply(const SparseVector<S>& x) const {
        std::vector<std::pair<std::uint64_t, S>> acc;
        auto cs = columns();
        SparseVector<S> out;
        for (const auto& [j, v] : x) {
            if (j >= cols) throw Error(ErrorKind::IndexError, "vector longer than matrix");
            axpy(out, v, cs[j]);
        }
        return out;
    }
};

/// Incremental echelon form with optional provenance tracking.
///
/// Each stored row r satisfies  row_r = sum_k tag_r[k] * inserted_k.
/// reduce(v) returns the residual and a combination `combo` with
///   v - residual = sum_k combo[k] * inserted_k.
template <class F>
class Echelon {
public:
    using S = typename F::Scalar;
    using Vec = SparseVector<S>;

    Echelon(F field, std::size_t dim) : f_(std::move(field)), dim_(dim), pivot_row_(dim, -1) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }
    std::size_t inserted() const { return inserted_; }

    struct Reduction {
        Vec residual;
        Vec combo;
    };

    Reduction reduce(const Vec& v) const {
        std::vector<S> d(dim_, f_.zero());
        for (const auto& [i, x] : v) {
            if (i >= dim_) throw Error(ErrorKind::IndexError, "vector index beyond ambient dimension");
            d[i] = x;
        }
        Vec combo;
        for (std::size_t c = 0; c < dim_; ++c) {
            if (is_zero(d[c]) || pivot_row_[c] < 0) continue;
            const Row& row = rows_[pivot_row_[c]];
            S coef = d[c];
            for (const auto& [j, x] : row.vec) d[j] -= coef * x;
            axpy(combo, coef, row.tag);
        }
        return {from_dense(d), std::move(combo)};
    }

    /// Inserts v (the next inserted vector, index inserted()); returns true if independent.
    bool insert(const Vec& v) {
        std::uint64_t idx = inserted_++;
        Reduction red = reduce(v);
        if (red.residual.empty()) {
            dependencies_.push_back({idx, std::move(red.combo)});
            return false;
        }
        S lead_inv = f_.inv(red.residual.front().second);
        Vec tag{{idx, f_.one()}};
        axpy(tag, -f_.one(), red.combo);
        Row row{scaled(red.residual, lead_inv), scaled(tag, lead_inv)};
        pivot_row_[row.vec.front().first] = static_cast<long>(rows_.size());
        rows_.push_back(std::move(row));
        return true;
    }

    bool contains(const Vec& v) const { return reduce(v).residual.empty(); }

    /// Relations among inserted vectors: for each dependent insertion j,
    /// inserted_j = sum combo[k] inserted_k (k < j, k independent).
    const std::vector<std::pair<std::uint64_t, Vec>>& dependencies() const { return dependencies_; }

    std::vector<std::uint64_t> pivot_columns() const {
        std::vector<std::uint64_t> p;
        for (const auto& r : rows_) p.push_back(r.vec.front().first);
        return p;
    }

private:
    struct Row {
        Vec vec;
        Vec tag;
    };
    F f_;
    std::size_t dim_;
    std::size_t inserted_ = 0;
    std::vector<Row> rows_;
    std::vector<long> pivot_row_;
    std::vector<std::pair<std::uint64_t, Vec>> dependencies_;
};

template <class S>
struct AffineSolutionSet {
    SparseVector<S> particular;
    std::vector<SparseVector<S>> kernel_basis;
};

/// All solutions of M x = b, or nullopt when b is not in the image of M.
template <class F>
std::optional<AffineSolutionSet<typename F::Scalar>> solve_affine(const F& f, const SparseMatrix<typename F::Scalar>& m,
                                                                  const SparseVector<typename F::Scalar>& b) {
    using S = typename F::Scalar;
    for (const auto& [i, v] : b)
        if (i >= m.rows) throw Error(ErrorKind::InvalidInput, "right-hand side longer than the matrix has rows");
    Echelon<F> ech(f, m.rows);
    for (const auto& col : m.columns()) ech.insert(col);
    auto red = ech.reduce(b);
    if (!red.residual.empty()) return std::nullopt;
    AffineSolutionSet<S> out;
    out.particular = std::move(red.combo);
    for (const auto& [j, combo] : ech.dependencies()) {
        SparseVector<S> k = scaled(combo, -f.one());
        axpy(k, f.one(), SparseVector<S>{{j, f.one()}});
        out.kernel_basis.push_back(std::move(k));
    }
    return out;
}

template <class F>
std::size_t rank(const F& f, const SparseMatrix<typename F::Scalar>& m) {
    Echelon<F> ech(f, m.cols);
    for (const auto& r : m.row_data) ech.insert(r);
    return ech.rank();
}

template <class F>
std::vector<SparseVector<typename F::Scalar>> kernel(const F& f, const SparseMatrix<typename F::Scalar>& m) {
    auto sol = solve_affine(f, m, SparseVector<typename F::Scalar>{});
    return sol->kernel_basis;
}

/// A basis of span(vectors) chosen among the inputs (first independent ones).
template <class F>
std::vector<SparseVector<typename F::Scalar>> independent_subset(const F& f, std::size_t dim,
                                                                 const std::vector<SparseVector<typename F::Scalar>>& vs) {
    Echelon<F> ech(f, dim);
    std::vector<SparseVector<typename F::Scalar>> out;
    for (const auto& v : vs)
        if (ech.insert(v)) out.push_back(v);
    return out;
}

/// Quotient of a cycle space by a boundary space with a reduction map to
/// coordinates on the chosen representatives.
template <class F>
class QuotientBasis {
public:
    using S = typename F::Scalar;
    using Vec = SparseVector<S>;

    QuotientBasis(F f, std::size_t dim) : f_(f), ech_(f, dim) {}

    std::size_t ambient_dim() const { return ech_.dim(); }
    std::size_t dim() const { return reps_.size(); }
    std::size_t cycle_dim() const { return cycle_dim_; }
    std::size_t boundary_dim() const { return boundary_dim_; }
    const std::vector<Vec>& representatives() const { return reps_; }

    /// Coordinates of a cycle in the representative basis; nullopt if v is not
    /// in the cycle space.
    std::optional<std::vector<S>> coordinates(const Vec& v) const {
        auto red = ech_.reduce(v);
        if (!red.residual.empty()) return std::nullopt;
        std::vector<S> c(reps_.size(), f_.zero());
        for (const auto& [k, x] : red.combo) {
            auto it = std::lower_bound(rep_slot_.begin(), rep_slot_.end(), k,
                                       [](const auto& e, std::uint64_t key) { return e.first < key; });
            if (it != rep_slot_.end() && it->first == k) c[it->second] = x;
        }
        return c;
    }

    bool is_boundary(const Vec& v) const {
        auto c = coordinates(v);
        return c && std::all_of(c->begin(), c->end(), [](const S& x) { return is_zero(x); });
    }

    /// reduce(v): the canonical representative sum_k c_k rep_k of the class of v.
    Vec reduce(const Vec& v) const {
        auto c = coordinates(v);
        if (!c) throw Error(ErrorKind::InvalidInput, "vector is not a cycle");
        return combine(*c);
    }

    Vec combine(const std::vector<S>& c) const {
        Vec out;
        for (std::size_t k = 0; k < c.size(); ++k) axpy(out, c[k], reps_[k]);
        return out;
    }

    template <class G>
    friend QuotientBasis<G> subspace_quotient(const G& f, std::size_t dim,
                                              const std::vector<SparseVector<typename G::Scalar>>& cycles,
                                              const std::vector<SparseVector<typename G::Scalar>>& boundaries);

private:
    F f_;
    Echelon<F> ech_;
    std::vector<Vec> reps_;
    std::vector<std::pair<std::uint64_t, std::size_t>> rep_slot_;  // inserted index -> rep index
    std::size_t cycle_dim_ = 0;
    std::size_t boundary_dim_ = 0;
};

/// Builds cycles / boundaries. Boundaries must lie in span(cycles).
template <class F>
QuotientBasis<F> subspace_quotient(const F& f, std::size_t dim,
                                   const std::vector<SparseVector<typename F::Scalar>>& cycles,
                                   const std::vector<SparseVector<typename F::Scalar>>& boundaries) {
    Echelon<F> zc(f, dim);
    for (const auto& z : cycles) zc.insert(z);
    for (const auto& b : boundaries)
        if (!zc.contains(b)) throw Error(ErrorKind::InvalidInput, "boundary escapes the cycle space");

    QuotientBasis<F> q(f, dim);
    q.cycle_dim_ = zc.rank();
    for (const auto& b : boundaries)
        if (q.ech_.insert(b)) ++q.boundary_dim_;
    for (const auto& z : cycles) {
        std::uint64_t idx = q.ech_.inserted();
        if (q.ech_.insert(z)) {
            q.rep_slot_.emplace_back(idx, q.reps_.size());
            q.reps_.push_back(z);
        }
    }
    // boundary insertions carry tags too; they must not count as coordinates
    return q;
}

}  // namespace massey
