#pragma once

// Formal connections: strictly upper triangular matrices of cochains,
// their Maurer-Cartan defect, related cocycles and scalar conjugation.

#include <cstddef>
#include <optional>
#include <vector>

#include "massey/dga.hpp"

namespace massey {

/// Square matrix of cochains, 0-based.
template <class S>
struct CochainMatrix {
    std::size_t N = 0;
    std::vector<SparseVector<S>> e;

    CochainMatrix() = default;
    explicit CochainMatrix(std::size_t n) : N(n), e(n * n) {}
    SparseVector<S>& at(std::size_t r, std::size_t c) { return e.at(r * N + c); }
    const SparseVector<S>& at(std::size_t r, std::size_t c) const { return e.at(r * N + c); }
    bool is_zero_matrix() const {
        for (const auto& v : e)
            if (!v.empty()) return false;
        return true;
    }
};

template <class F>
CochainMatrix<typename F::Scalar> matrix_d(const Dga<F>& A, const CochainMatrix<typename F::Scalar>& X) {
    CochainMatrix<typename F::Scalar> out(X.N);
    for (std::size_t k = 0; k < X.e.size(); ++k) out.e[k] = A.d(X.e[k]);
    return out;
}

template <class F>
CochainMatrix<typename F::Scalar> matrix_bar(const Dga<F>& A, const CochainMatrix<typename F::Scalar>& X) {
    CochainMatrix<typename F::Scalar> out(X.N);
    for (std::size_t k = 0; k < X.e.size(); ++k) out.e[k] = A.bar(X.e[k]);
    return out;
}

template <class F>
CochainMatrix<typename F::Scalar> matrix_mul(const Dga<F>& A, const CochainMatrix<typename F::Scalar>& X,
                                             const CochainMatrix<typename F::Scalar>& Y) {
    CochainMatrix<typename F::Scalar> out(X.N);
    for (std::size_t i = 0; i < X.N; ++i)
        for (std::size_t k = 0; k < X.N; ++k) {
            if (X.at(i, k).empty()) continue;
            for (std::size_t j = 0; j < X.N; ++j) {
                if (Y.at(k, j).empty()) continue;
                axpy(out.at(i, j), A.field().one(), A.wedge(X.at(i, k), Y.at(k, j)));
            }
        }
    return out;
}

template <class S>
CochainMatrix<S> matrix_sub(CochainMatrix<S> X, const CochainMatrix<S>& Y, const S& one) {
    for (std::size_t k = 0; k < X.e.size(); ++k) axpy(X.e[k], -one, Y.e[k]);
    return X;
}

/// Order-n connection; a(i,j) with 1 <= i <= j <= n sits at row i-1, column j.
template <class F>
struct FormalConnection {
    using S = typename F::Scalar;
    std::size_t n = 0;
    CochainMatrix<S> m;

    FormalConnection() = default;
    explicit FormalConnection(std::size_t order) : n(order), m(order + 1) {}

    SparseVector<S>& a(std::size_t i, std::size_t j) { return m.at(i - 1, j); }
    const SparseVector<S>& a(std::size_t i, std::size_t j) const { return m.at(i - 1, j); }
};

/// mu(A) = dA - bar(A) A.
template <class F>
CochainMatrix<typename F::Scalar> mc_defect(const Dga<F>& A, const FormalConnection<F>& C) {
    return matrix_sub(matrix_d(A, C.m), matrix_mul(A, matrix_bar(A, C.m), C.m), A.field().one());
}

/// Smallest offset j-i (a(i,j) indexing) carrying a nonzero defect entry;
/// n when mu(A) vanishes identically.
template <class S>
std::size_t defect_offset(const CochainMatrix<S>& mu) {
    std::size_t n = mu.N - 1;
    for (std::size_t off = 0; off < n; ++off)
        for (std::size_t i = 1; i + off <= n; ++i)
            if (!mu.at(i - 1, i + off).empty()) return off;
    return n;
}

/// mu(A) lies in T_n^{n-k}: entries vanish below offset k.
template <class S>
bool in_step_ideal(const CochainMatrix<S>& mu, std::size_t k) {
    return defect_offset(mu) >= k;
}

/// mu(A) lies in the corner ideal I_n.
template <class S>
bool in_corner_ideal(const CochainMatrix<S>& mu) {
    std::size_t n = mu.N - 1;
    for (std::size_t r = 0; r < mu.N; ++r)
        for (std::size_t c = 0; c < mu.N; ++c)
            if (!(r == 0 && c == n) && !mu.at(r, c).empty()) return false;
    return true;
}

/// sum_{r=i}^{j-1} bar(a(i,r)) ^ a(r+1,j)
template <class F>
SparseVector<typename F::Scalar> connection_product(const Dga<F>& A, const FormalConnection<F>& C, std::size_t i,
                                                    std::size_t j) {
    SparseVector<typename F::Scalar> out;
    for (std::size_t r = i; r < j; ++r) axpy(out, A.field().one(), A.wedge(A.bar(C.a(i, r)), C.a(r + 1, j)));
    return out;
}

template <class F>
bool is_defining_system(const Dga<F>& A, const FormalConnection<F>& C) {
    for (std::size_t off = 0; off < C.n; ++off)
        for (std::size_t i = 1; i + off <= C.n; ++i) {
            std::size_t j = i + off;
            if (i == 1 && j == C.n) continue;
            auto lhs = A.d(C.a(i, j));
            axpy(lhs, -A.field().one(), connection_product(A, C, i, j));
            if (!lhs.empty()) return false;
        }
    return true;
}

/// c(A) = sum_r bar(a(1,r)) ^ a(r+1,n).
template <class F>
SparseVector<typename F::Scalar> related_cocycle(const Dga<F>& A, const FormalConnection<F>& C) {
    if (!is_defining_system(A, C)) throw Error(ErrorKind::NotADefiningSystem, "entries violate the defining equations");
    return connection_product(A, C, 1, C.n);
}

/// Dense upper triangular scalar matrix, row-major (n+1)x(n+1).
template <class S>
struct ScalarMatrix {
    std::size_t N = 0;
    std::vector<S> v;
    ScalarMatrix(std::size_t n, const S& zero) : N(n), v(n * n, zero) {}
    S& at(std::size_t r, std::size_t c) { return v.at(r * N + c); }
    const S& at(std::size_t r, std::size_t c) const { return v.at(r * N + c); }
};

template <class F>
ScalarMatrix<typename F::Scalar> upper_inverse(const F& f, const ScalarMatrix<typename F::Scalar>& C) {
    const std::size_t N = C.N;
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < r; ++c)
            if (!is_zero(C.at(r, c))) throw Error(ErrorKind::InvalidInput, "matrix is not upper triangular");
    for (std::size_t i = 0; i < N; ++i)
        if (is_zero(C.at(i, i))) throw Error(ErrorKind::SingularMatrix, "zero on the diagonal");
    ScalarMatrix<typename F::Scalar> X(N, f.zero());
    for (std::size_t j = 0; j < N; ++j) {
        X.at(j, j) = f.inv(C.at(j, j));
        for (std::size_t i = j; i-- > 0;) {
            auto s = f.zero();
            for (std::size_t k = i + 1; k <= j; ++k) s += C.at(i, k) * X.at(k, j);
            X.at(i, j) = -(s * f.inv(C.at(i, i)));
        }
    }
    return X;
}

/// C^{-1} A C for C in GT_n.
template <class F>
FormalConnection<F> conjugate(const Dga<F>& A, const FormalConnection<F>& conn,
                              const ScalarMatrix<typename F::Scalar>& C) {
    const auto& f = A.field();
    if (C.N != conn.n + 1) throw Error(ErrorKind::InvalidInput, "conjugating matrix has the wrong size");
    auto Ci = upper_inverse(f, C);
    const std::size_t N = C.N;
    CochainMatrix<typename F::Scalar> tmp(N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t j = 0; j < N; ++j) axpy(tmp.at(i, j), C.at(k, j), conn.m.at(i, k));
    FormalConnection<F> out(conn.n);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t j = 0; j < N; ++j) axpy(out.m.at(i, j), Ci.at(i, k), tmp.at(k, j));
    return out;
}

template <class F>
ScalarMatrix<typename F::Scalar> diagonal_matrix(const F& f, const std::vector<typename F::Scalar>& d) {
    ScalarMatrix<typename F::Scalar> C(d.size(), f.zero());
    for (std::size_t i = 0; i < d.size(); ++i) C.at(i, i) = d[i];
    return C;
}

/// Whether a matrix of 1-forms satisfies dA - bar(A) ^ A = 0 exactly, i.e.
/// defines a Lie algebra homomorphism into upper triangular matrices.
template <class F>
bool strong_mc_check(const Dga<F>& A, const FormalConnection<F>& conn) {
    for (const auto& v : conn.m.e)
        if (!v.empty() && A.qdegree(v) != 1) throw Error(ErrorKind::InvalidInput, "entries must be 1-forms");
    return mc_defect(A, conn).is_zero_matrix();
}

template <class F>
struct LiftResult {
    CohomologyClass<F> obstruction;
    std::vector<typename F::Scalar> coordinates;
    bool liftable = false;
    std::optional<FormalConnection<F>> lifted;  // corner filled so that mu(A) = 0
};

/// Class of c(D) in H^2 for a defining system of 1-forms. When it vanishes the
/// corner entry is chosen with d a(1,n) = c(D), completing a homomorphism.
template <class F>
LiftResult<F> lift_obstruction(const PieceCache<F>& P, const FormalConnection<F>& D) {
    const auto& A = P.algebra();
    for (const auto& v : D.m.e)
        if (!v.empty() && A.qdegree(v) != 1) throw Error(ErrorKind::InvalidInput, "entries must be 1-forms");
    auto c = related_cocycle(A, D);
    LiftResult<F> out;
    out.obstruction.deg = MultiDegree{2, {}};
    out.obstruction.rep = c;
    SparseVector<typename F::Scalar> corner;
    bool exact = true;
    for (auto& [deg, part] : split_by_degree(A, c)) {
        out.obstruction.deg = deg;
        const auto& piece = P.at(deg);
        for (auto& x : piece.classify(part)) out.coordinates.push_back(x);
        auto pre = piece.preimage(part);
        if (!pre) exact = false;
        else axpy(corner, A.field().one(), *pre);
    }
    out.liftable = exact;
    if (exact) {
        FormalConnection<F> L = D;
        L.a(1, D.n) = corner;
        out.lifted = L;
    }
    return out;
}

}  // namespace massey
