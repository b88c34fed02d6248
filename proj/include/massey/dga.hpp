#pragma once

// Finite windows of differential graded algebras.
//
// A window is a finite set of basis monomials, each carrying a multidegree
// (cohomological degree, auxiliary vector). The basis is sorted by multidegree
// so every homogeneous piece is a contiguous index range. Products of basis
// monomials are signed monomials (true for exterior algebras and for the
// Stanley-Reisner models), the differential is an arbitrary sparse map.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "massey/error.hpp"
#include "massey/field.hpp"
#include "massey/linalg.hpp"

namespace massey {

struct MultiDegree {
    int q = 0;
    std::vector<int> aux;

    friend auto operator<=>(const MultiDegree&, const MultiDegree&) = default;
    friend bool operator==(const MultiDegree&, const MultiDegree&) = default;

    MultiDegree operator+(const MultiDegree& o) const {
        if (aux.size() != o.aux.size()) throw Error(ErrorKind::InvalidInput, "auxiliary degree length mismatch");
        MultiDegree r{q + o.q, aux};
        for (std::size_t i = 0; i < aux.size(); ++i) r.aux[i] += o.aux[i];
        return r;
    }
    MultiDegree shifted(int dq) const { return {q + dq, aux}; }

    std::string str() const {
        std::ostringstream os;
        os << "(" << q;
        for (int a : aux) os << "," << a;
        os << ")";
        return os.str();
    }
};

/// Signed monomial result of multiplying two basis monomials; nullopt means zero.
struct SignedKey {
    std::uint64_t key;
    int sign;
};

template <class F>
class Dga {
public:
    using S = typename F::Scalar;
    using Vec = SparseVector<S>;

    struct BasisElement {
        std::uint64_t key;
        MultiDegree deg;
        std::string name;
    };
    using DiffFn = std::function<std::vector<std::pair<std::uint64_t, S>>(std::uint64_t)>;
    using ProdFn = std::function<std::optional<SignedKey>(std::uint64_t, std::uint64_t)>;

    Dga(F f, std::vector<BasisElement> basis, DiffFn diff, ProdFn prod)
        : f_(std::move(f)), basis_(std::move(basis)), prod_(std::move(prod)) {
        std::stable_sort(basis_.begin(), basis_.end(), [](const auto& a, const auto& b) {
            return a.deg != b.deg ? a.deg < b.deg : a.key < b.key;
        });
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            if (!index_.emplace(basis_[i].key, i).second)
                throw Error(ErrorKind::InvalidInput, "duplicate basis key");
            auto& r = ranges_[basis_[i].deg];
            if (r.second == 0) r.first = i;
            r.second = i + 1;
        }
        d_.resize(basis_.size());
        escapes_.assign(basis_.size(), false);
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            std::vector<std::pair<std::uint64_t, S>> terms;
            for (auto& [k, c] : diff(basis_[i].key)) {
                auto it = index_.find(k);
                if (it == index_.end()) {
                    if (!is_zero(c)) escapes_[i] = true;
                    continue;
                }
                if (basis_[it->second].deg != basis_[i].deg.shifted(1))
                    throw Error(ErrorKind::InvalidInput, "differential does not raise degree by one");
                terms.emplace_back(it->second, c);
            }
            d_[i] = make_sparse(std::move(terms));
        }
    }

    const F& field() const { return f_; }
    std::size_t size() const { return basis_.size(); }
    const BasisElement& element(std::size_t i) const { return basis_.at(i); }
    std::optional<std::size_t> index_of(std::uint64_t key) const {
        auto it = index_.find(key);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t index(std::uint64_t key) const {
        auto i = index_of(key);
        if (!i) throw Error(ErrorKind::WindowTooSmall, "monomial outside the window");
        return *i;
    }

    std::vector<MultiDegree> degrees() const {
        std::vector<MultiDegree> out;
        for (const auto& [d, r] : ranges_) out.push_back(d);
        return out;
    }
    bool has_degree(const MultiDegree& d) const { return ranges_.count(d) > 0; }
    /// [begin, end) of the basis indices in degree d (empty range if absent).
    std::pair<std::size_t, std::size_t> range(const MultiDegree& d) const {
        auto it = ranges_.find(d);
        if (it == ranges_.end()) return {0, 0};
        return it->second;
    }
    std::size_t dim(const MultiDegree& d) const {
        auto r = range(d);
        return r.second - r.first;
    }

    /// Cohomological degree of a cochain; throws MixedDegree when inhomogeneous.
    std::optional<int> qdegree(const Vec& c) const {
        std::optional<int> q;
        for (const auto& [i, v] : c) {
            int k = basis_.at(i).deg.q;
            if (q && *q != k) throw Error(ErrorKind::MixedDegree, "cochain mixes cohomological degrees");
            q = k;
        }
        return q;
    }
    /// Full multidegree, or nullopt for zero / aux-inhomogeneous cochains.
    std::optional<MultiDegree> multidegree(const Vec& c) const {
        std::optional<MultiDegree> d;
        for (const auto& [i, v] : c) {
            if (d && *d != basis_.at(i).deg) return std::nullopt;
            d = basis_.at(i).deg;
        }
        return d;
    }

    Vec d(const Vec& c) const {
        Vec out;
        for (const auto& [i, v] : c) {
            if (escapes_[i])
                throw Error(ErrorKind::WindowTooSmall, "differential of " + basis_[i].name + " leaves the window");
            axpy(out, v, d_[i]);
        }
        return out;
    }
    const Vec& d_basis(std::size_t i) const {
        if (escapes_[i])
            throw Error(ErrorKind::WindowTooSmall, "differential of " + basis_[i].name + " leaves the window");
        return d_[i];
    }
    bool d_escapes(std::size_t i) const { return escapes_[i]; }

    Vec wedge(const Vec& a, const Vec& b) const {
        std::vector<std::pair<std::uint64_t, S>> terms;
        for (const auto& [i, x] : a)
            for (const auto& [j, y] : b) {
                auto r = prod_(basis_[i].key, basis_[j].key);
                if (!r) continue;
                S c = x * y;
                if (r->sign < 0) c = -c;
                terms.emplace_back(index(r->key), c);
            }
        return make_sparse(std::move(terms));
    }

    /// a -> (-1)^(k+1) a on a cochain of cohomological degree k.
    Vec bar(const Vec& a) const {
        auto q = qdegree(a);
        if (!q || (*q % 2) != 0) return a;
        return scaled(a, -f_.one());
    }

    Vec basis_vector(std::size_t i) const { return Vec{{i, f_.one()}}; }
    Vec from_key(std::uint64_t key) const { return basis_vector(index(key)); }

    std::string to_string(const Vec& c) const {
        if (c.empty()) return "0";
        std::string s;
        for (const auto& [i, v] : c) {
            if (!s.empty()) s += " + ";
            s += "(" + f_.to_string(v) + ")" + basis_[i].name;
        }
        return s;
    }

private:
    F f_;
    std::vector<BasisElement> basis_;
    ProdFn prod_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
    std::map<MultiDegree, std::pair<std::size_t, std::size_t>> ranges_;
    std::vector<Vec> d_;
    std::vector<bool> escapes_;
};

/// Linear data for one multidegree D: image of d from D-1 (with preimages)
/// and the cohomology H^D.
template <class F>
class DegreePiece {
public:
    using S = typename F::Scalar;
    using Vec = SparseVector<S>;

    DegreePiece(const Dga<F>& A, const MultiDegree& deg)
        : deg_(deg), range_(A.range(deg)), src_(A.range(deg.shifted(-1))),
          image_(A.field(), range_.second - range_.first),
          coh_(A.field(), range_.second - range_.first) {
        const std::size_t n = range_.second - range_.first;
        for (std::size_t i = src_.first; i < src_.second; ++i) image_.insert(to_local(A.d_basis(i)));
        // cycles: kernel of d out of D
        std::vector<Vec> dcols;
        bool any_target = false;
        for (std::size_t i = range_.first; i < range_.second; ++i) {
            const Vec& di = A.d_basis(i);
            if (!di.empty()) any_target = true;
            dcols.push_back(di);
        }
        std::vector<Vec> cycles;
        if (!any_target) {
            for (std::size_t k = 0; k < n; ++k) cycles.push_back(Vec{{k, A.field().one()}});
        } else {
            auto tgt = A.range(deg.shifted(1));
            std::vector<Vec> shifted;
            for (auto& c : dcols) {
                Vec s;
                for (auto& [j, v] : c) s.emplace_back(j - tgt.first, v);
                shifted.push_back(std::move(s));
            }
            auto M = SparseMatrix<S>::from_columns(tgt.second - tgt.first, shifted);
            cycles = kernel(A.field(), M);
        }
        std::vector<Vec> bounds;
        for (std::size_t i = src_.first; i < src_.second; ++i) bounds.push_back(to_local(A.d_basis(i)));
        coh_ = subspace_quotient(A.field(), n, cycles, bounds);
    }

    const MultiDegree& degree() const { return deg_; }
    std::size_t dim() const { return range_.second - range_.first; }
    std::size_t betti() const { return coh_.dim(); }
    const QuotientBasis<F>& cohomology() const { return coh_; }

    Vec to_local(const Vec& v) const {
        Vec out;
        for (const auto& [i, x] : v) {
            if (i < range_.first || i >= range_.second)
                throw Error(ErrorKind::InvalidInput, "cochain term outside degree " + deg_.str());
            out.emplace_back(i - range_.first, x);
        }
        return out;
    }
    Vec to_global(const Vec& v) const {
        Vec out;
        for (const auto& [i, x] : v) out.emplace_back(i + range_.first, x);
        return out;
    }

    /// Global representatives of a basis of H^D.
    std::vector<Vec> class_representatives() const {
        std::vector<Vec> out;
        for (const auto& r : coh_.representatives()) out.push_back(to_global(r));
        return out;
    }

    /// x in degree D-1 with dx = t, or nullopt when t is not exact.
    std::optional<Vec> preimage(const Vec& t) const {
        auto red = image_.reduce(to_local(t));
        if (!red.residual.empty()) return std::nullopt;
        Vec x;
        for (auto& [k, v] : red.combo) x.emplace_back(k + src_.first, v);
        return x;
    }
    /// Residual of t modulo the image of d (canonical complement coordinates).
    Vec residual(const Vec& t) const { return image_.reduce(to_local(t)).residual; }

    /// Coordinates of the class of a cocycle.
    std::vector<S> classify(const Vec& z) const {
        auto c = coh_.coordinates(to_local(z));
        if (!c) throw Error(ErrorKind::InvalidInput, "cochain is not a cocycle in degree " + deg_.str());
        return *c;
    }

private:
    MultiDegree deg_;
    std::pair<std::size_t, std::size_t> range_;
    std::pair<std::size_t, std::size_t> src_;
    Echelon<F> image_;
    QuotientBasis<F> coh_;
};

/// Lazily built DegreePieces; thread-safe.
template <class F>
class PieceCache {
public:
    explicit PieceCache(const Dga<F>& A) : A_(A) {}
    const Dga<F>& algebra() const { return A_; }

    const DegreePiece<F>& at(const MultiDegree& d) const {
        std::lock_guard<std::mutex> lock(m_);
        auto it = pieces_.find(d);
        if (it != pieces_.end()) return *it->second;
        auto p = std::make_shared<DegreePiece<F>>(A_, d);
        return *pieces_.emplace(d, p).first->second;
    }

private:
    const Dga<F>& A_;
    mutable std::mutex m_;
    mutable std::map<MultiDegree, std::shared_ptr<DegreePiece<F>>> pieces_;
};

template <class F>
struct CohomologyClass {
    MultiDegree deg;
    SparseVector<typename F::Scalar> rep;
};

/// Per-degree cohomology on a set of multidegrees.
template <class F>
std::map<MultiDegree, QuotientBasis<F>> cohomology(const Dga<F>& A, const std::vector<MultiDegree>& window) {
    std::map<MultiDegree, QuotientBasis<F>> out;
    for (const auto& d : window) {
        if (!A.has_degree(d)) continue;
        out.emplace(d, DegreePiece<F>(A, d).cohomology());
    }
    return out;
}

/// Splits a cochain into its homogeneous components.
template <class F>
std::map<MultiDegree, SparseVector<typename F::Scalar>> split_by_degree(const Dga<F>& A,
                                                                       const SparseVector<typename F::Scalar>& c) {
    std::map<MultiDegree, SparseVector<typename F::Scalar>> out;
    for (const auto& [i, v] : c) out[A.element(i).deg].emplace_back(i, v);
    return out;
}

/// Class of a (possibly aux-inhomogeneous) cocycle: concatenated coordinates per degree.
template <class F>
std::map<MultiDegree, std::vector<typename F::Scalar>> classify(const PieceCache<F>& P,
                                                                const SparseVector<typename F::Scalar>& z) {
    std::map<MultiDegree, std::vector<typename F::Scalar>> out;
    for (auto& [d, part] : split_by_degree(P.algebra(), z)) {
        auto c = P.at(d).classify(part);
        if (std::any_of(c.begin(), c.end(), [](const auto& x) { return !is_zero(x); })) out.emplace(d, std::move(c));
    }
    return out;
}

template <class F>
bool is_exact(const PieceCache<F>& P, const SparseVector<typename F::Scalar>& z) {
    for (auto& [d, part] : split_by_degree(P.algebra(), z))
        if (!P.at(d).preimage(part)) return false;
    return true;
}

/// Cup product of classes: canonical representative of [bar(x) ^ y].
template <class F>
CohomologyClass<F> cup(const PieceCache<F>& P, const CohomologyClass<F>& x, const CohomologyClass<F>& y) {
    const auto& A = P.algebra();
    MultiDegree deg = x.deg + y.deg;
    auto prod = A.wedge(A.bar(x.rep), y.rep);
    if (!A.has_degree(deg)) {
        if (prod.empty()) return {deg, {}};
        throw Error(ErrorKind::WindowTooSmall, "product degree " + deg.str() + " outside the window");
    }
    const auto& piece = P.at(deg);
    return {deg, piece.to_global(piece.cohomology().reduce(piece.to_local(prod)))};
}

}  // namespace massey
