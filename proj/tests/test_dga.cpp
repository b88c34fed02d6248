#include <random>

#include <gtest/gtest.h>

#include "massey/lie.hpp"

using namespace massey;
using Vec = SparseVector<mpq_class>;

namespace {

Vec random_in(const Dga<Rationals>& A, const MultiDegree& d, std::mt19937_64& rng) {
    auto [b, e] = A.range(d);
    Vec v;
    for (std::size_t i = b; i < e; ++i)
        if (rng() % 2) v.emplace_back(i, mpq_class(static_cast<long>(rng() % 7) - 3));
    return make_sparse(v);
}

int qdeg(const Dga<Rationals>& A, const Vec& v) { return A.qdegree(v).value_or(0); }

bool fits(const MultiDegree& a, const MultiDegree& b, int qmax, int wmax) {
    return a.q + b.q <= qmax && a.aux[0] + b.aux[0] <= wmax;
}

}  // namespace

class WindowProperty : public ::testing::TestWithParam<const char*> {
protected:
    CEWindow<Rationals> make() const {
        std::string n = GetParam();
        return ce_window(Rationals{}, n == std::string("m0") ? m0(9) : witt_plus(9), 3, 9);
    }
};

TEST_P(WindowProperty, DifferentialSquaresToZero) {
    auto w = make();
    const auto& A = w.algebra();
    for (std::size_t i = 0; i < A.size(); ++i) {
        if (A.element(i).deg.q > 2) continue;
        EXPECT_TRUE(A.d(A.d(A.basis_vector(i))).empty()) << A.element(i).name;
    }
}

TEST_P(WindowProperty, LeibnizAndGradedCommutativity) {
    auto w = make();
    const auto& A = w.algebra();
    std::mt19937_64 rng(11);
    auto degs = A.degrees();
    int checked = 0;
    for (int t = 0; t < 20000 && checked < 120; ++t) {
        const auto& da = degs[rng() % degs.size()];
        const auto& db = degs[rng() % degs.size()];
        if (!fits(da, db, 2, 9)) continue;
        auto a = random_in(A, da, rng), b = random_in(A, db, rng);
        if (a.empty() || b.empty()) continue;
        ++checked;
        auto lhs = A.d(A.wedge(a, b));
        auto rhs = A.wedge(A.d(a), b);
        axpy(rhs, qdeg(A, a) % 2 ? mpq_class(-1) : mpq_class(1), A.wedge(a, A.d(b)));
        EXPECT_EQ(lhs, rhs);
        auto ab = A.wedge(a, b), ba = A.wedge(b, a);
        axpy(ab, (qdeg(A, a) * qdeg(A, b)) % 2 ? mpq_class(1) : mpq_class(-1), ba);
        EXPECT_TRUE(ab.empty());
    }
    EXPECT_GT(checked, 50);
}

INSTANTIATE_TEST_SUITE_P(Algebras, WindowProperty, ::testing::Values("m0", "witt_plus"));

TEST(Connection, BianchiIdentity) {
    // d mu = A mu + bar(mu) A for any strictly upper triangular A
    auto w = ce_window(Rationals{}, witt_plus(12), 3, 12);
    const auto& A = w.algebra();
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        FormalConnection<Rationals> C(3);
        for (std::size_t i = 1; i <= 3; ++i)
            for (std::size_t j = i; j <= 3; ++j)
                for (int g = 1; g <= 3; ++g) axpy(C.a(i, j), mpq_class(static_cast<long>(rng() % 5) - 2), w.e(g));
        auto mu = mc_defect(A, C);
        auto lhs = matrix_d(A, mu);
        auto rhs = matrix_mul(A, C.m, mu);
        auto t2 = matrix_mul(A, matrix_bar(A, mu), C.m);
        for (std::size_t k = 0; k < rhs.e.size(); ++k) axpy(rhs.e[k], mpq_class(1), t2.e[k]);
        for (std::size_t k = 0; k < lhs.e.size(); ++k) EXPECT_EQ(lhs.e[k], rhs.e[k]);
    }
}

TEST(Massey, TwoFoldIsCupProduct) {
    auto w = ce_window(Rationals{}, witt_plus(8), 3, 8);
    auto out = massey::massey(w.cache(), {w.e(1), w.e(2)});
    EXPECT_EQ(out.status, MasseyStatus::DefinedStrict);
    auto c = cup(w.cache(), {w.degree(1, 1), w.e(1)}, {w.degree(1, 2), w.e(2)});
    EXPECT_TRUE(is_exact(w.cache(), c.rep));
    EXPECT_EQ(out.triviality, Triviality::Trivial);
}

TEST(Massey, RejectsBadInput) {
    auto w = ce_window(Rationals{}, witt_plus(6), 2, 6);
    EXPECT_THROW(massey::massey(w.cache(), {w.e(1)}), Error);
    EXPECT_THROW(massey::massey(w.cache(), {w.e(3), w.e(1)}), Error);  // e^3 is not closed
}

TEST(Massey, RelatedCocycleIsClosedAndScales) {
    auto w = ce_window(Rationals{}, witt_plus(10), 3, 10);
    const auto& A = w.algebra();
    auto out = massey::massey(w.cache(), {w.e(1), w.e(2), w.e(2)});
    ASSERT_TRUE(out.witness);
    FormalConnection<Rationals> W = *out.witness;
    W.a(1, 3).clear();
    ASSERT_TRUE(is_defining_system(A, W));
    auto c = related_cocycle(A, W);
    EXPECT_TRUE(A.d(c).empty());
    // C^{-1} W C with C = diag(d0..d3) scales a(i,j) by d_j / d_{i-1}
    std::vector<mpq_class> d{2, 3, mpq_class(1, 5), -7};
    auto V = conjugate(A, W, diagonal_matrix(Rationals{}, d));
    ASSERT_TRUE(is_defining_system(A, V));
    auto cv = related_cocycle(A, V);
    EXPECT_EQ(cv, scaled(c, d[3] / d[0]));
    auto broken = W;
    axpy(broken.a(1, 2), mpq_class(1), w.e(3));
    EXPECT_THROW(related_cocycle(A, broken), Error);
}

TEST(Massey, DefinedImpliesTrivialSubProducts) {
    auto w = ce_window(Rationals{}, m0(12), 2, 12);
    const auto& P = w.cache();
    std::vector<Vec> pool{w.e(1), w.e(2)};
    {
        Vec s = w.e(1);
        axpy(s, mpq_class(1), w.e(2));
        pool.push_back(s);
    }
    MasseyOptions opt;
    opt.homogeneous = false;
    std::vector<MultiDegree> one(4, MultiDegree{1, {}});
    int defined = 0;
    for (std::size_t code = 0; code < 81; ++code) {
        std::vector<Vec> cls;
        for (std::size_t k = 0, c = code; k < 4; ++k, c /= 3) cls.push_back(pool[c % 3]);
        auto out = massey::massey(P, cls, opt, std::nullopt, one);
        if (out.status == MasseyStatus::Undefined) continue;
        ++defined;
        std::vector<MultiDegree> three(3, MultiDegree{1, {}});
        auto left = massey::massey(P, {cls[0], cls[1], cls[2]}, opt, std::nullopt, three);
        auto right = massey::massey(P, {cls[1], cls[2], cls[3]}, opt, std::nullopt, three);
        EXPECT_EQ(left.triviality, Triviality::Trivial);
        EXPECT_EQ(right.triviality, Triviality::Trivial);
    }
    EXPECT_GT(defined, 0);
}

TEST(KStep, OneStepIsCupTuple) {
    auto w = ce_window(Rationals{}, witt_plus(10), 3, 10);
    const auto& P = w.cache();
    std::vector<Vec> cls{w.e(1), w.e(2), w.e(2), w.e(1)};
    auto out = k_step_massey(P, cls, 1);
    ASSERT_TRUE(out.defined);
    ASSERT_EQ(out.classes.size(), 3u);
    for (std::size_t i = 0; i + 1 < cls.size(); ++i) {
        auto d1 = P.algebra().multidegree(cls[i]).value(), d2 = P.algebra().multidegree(cls[i + 1]).value();
        auto c = cup(P, {d1, cls[i]}, {d2, cls[i + 1]});
        auto coords = P.at(c.deg).classify(c.rep);
        EXPECT_EQ(out.classes[i], coords) << i;
    }
    EXPECT_THROW(k_step_massey(P, cls, 0), Error);
    EXPECT_THROW(k_step_massey(P, cls, 4), Error);
}

TEST(Connection, UpperInverse) {
    Rationals Q;
    ScalarMatrix<mpq_class> C(3, 0);
    C.at(0, 0) = 2;
    C.at(0, 2) = 5;
    C.at(1, 1) = -1;
    C.at(1, 2) = 3;
    C.at(2, 2) = mpq_class(1, 3);
    auto X = upper_inverse(Q, C);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            mpq_class s = 0;
            for (std::size_t k = 0; k < 3; ++k) s += C.at(i, k) * X.at(k, j);
            EXPECT_EQ(s, i == j ? 1 : 0);
        }
    C.at(1, 1) = 0;
    EXPECT_THROW(upper_inverse(Q, C), Error);
}

TEST(Cohomology, MixedDegreeDetection) {
    auto w = ce_window(Rationals{}, witt_plus(6), 2, 6);
    Vec v = w.e(1);
    axpy(v, mpq_class(1), w.form({2, 3}));
    EXPECT_THROW(w.algebra().qdegree(v), Error);
    EXPECT_FALSE(w.algebra().multidegree(v));
}
