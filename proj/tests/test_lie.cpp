#include <random>

#include <gtest/gtest.h>

#include "massey/lie.hpp"

using namespace massey;
using Vec = SparseVector<mpq_class>;

namespace {

Form random_form(std::mt19937_64& rng, int q, int top) {
    Form f;
    for (int t = 0; t < 4; ++t) {
        std::vector<int> m;
        while (static_cast<int>(m.size()) < q) {
            int i = 2 + static_cast<int>(rng() % (top - 1));
            if (std::find(m.begin(), m.end(), i) == m.end()) m.push_back(i);
        }
        form_add(f, m, mpq_class(static_cast<long>(rng() % 9) - 4));
    }
    return f;
}

// Brute force: solve d x = 0 in bidegree (q, w) of the window and count independent classes.
std::size_t brute_betti(const CEWindow<Rationals>& w, int q, int wt) {
    const auto& A = w.algebra();
    Rationals Q;
    auto d = w.degree(q, wt);
    if (!A.has_degree(d)) return 0;
    auto [b, e] = A.range(d);
    std::vector<Vec> cols;
    for (std::size_t i = b; i < e; ++i) cols.push_back(A.d(A.basis_vector(i)));
    std::size_t rows = A.size();
    std::size_t z = (e - b) - rank(Q, SparseMatrix<mpq_class>::from_columns(rows, cols));
    std::size_t bd = 0;
    auto dm = w.degree(q - 1, wt);
    if (q >= 1 && A.has_degree(dm)) {
        auto [b2, e2] = A.range(dm);
        std::vector<Vec> c2;
        for (std::size_t i = b2; i < e2; ++i) c2.push_back(A.d(A.basis_vector(i)));
        bd = rank(Q, SparseMatrix<mpq_class>::from_columns(rows, c2));
    }
    return z - bd;
}

}  // namespace

TEST(GradedLie, WittBracketsAndJacobi) {
    auto g = witt_plus(10);
    auto b = g.bracket(2, 3);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_EQ(b[0].first, 5);
    EXPECT_EQ(b[0].second, 1);
    EXPECT_TRUE(g.bracket(4, 4).empty());
    EXPECT_EQ(g.bracket(3, 2)[0].second, -1);
    EXPECT_TRUE(g.jacobi_holds());
    EXPECT_TRUE(m0(10).jacobi_holds());
}

TEST(GradedLie, ValidationRejectsBadPresentations) {
    GradedLie g;
    g.generators = {{1, 1}, {2, 2}, {3, 3}};
    g.brackets[{1, 2}] = {{3, mpq_class(1)}};
    EXPECT_NO_THROW(g.validate());
    g.brackets[{1, 3}] = {{3, mpq_class(1)}};  // weight 4 lands on weight 3
    EXPECT_THROW(g.validate(), Error);
    GradedLie h;
    h.generators = {{1, 1}, {2, 1}, {3, 2}, {4, 3}, {5, 3}};
    h.brackets[{1, 2}] = {{3, mpq_class(1)}};
    h.brackets[{1, 3}] = {{4, mpq_class(1)}};
    h.brackets[{2, 3}] = {{5, mpq_class(1)}};
    EXPECT_TRUE(h.jacobi_holds());
    h.generators.push_back({6, 4});
    h.brackets[{1, 5}] = {{6, mpq_class(1)}};  // [[e2,e3],e1] = -e6, the other two terms vanish
    EXPECT_FALSE(h.jacobi_holds());
    EXPECT_THROW(m0(1), Error);
    EXPECT_THROW(ce_window(Rationals{}, m0(6), 2, 8), Error);
}

TEST(CEWindow, DifferentialSign) {
    auto w = ce_window(Rationals{}, m0(6), 2, 6);
    const auto& A = w.algebra();
    EXPECT_EQ(A.d(w.e(3)), w.form({1, 2}));
    EXPECT_TRUE(A.d(w.e(1)).empty());
    EXPECT_TRUE(A.d(w.e(2)).empty());
    auto v = ce_window(Rationals{}, witt_plus(6), 2, 6);
    // [e1, e2] = e3 in W+, so d e^3 = e^1 ^ e^2
    EXPECT_EQ(v.algebra().d(v.e(3)), v.form({1, 2}));
}

TEST(CEWindow, WeightPreservation) {
    for (auto g : {m0(11), witt_plus(11)}) {
        auto w = ce_window(Rationals{}, g, 3, 11);
        const auto& A = w.algebra();
        for (std::size_t i = 0; i < A.size(); ++i) {
            const auto& el = A.element(i);
            if (el.deg.q > 3) continue;
            for (const auto& [k, c] : A.d(A.basis_vector(i))) {
                EXPECT_EQ(A.element(k).deg.aux, el.deg.aux);
                EXPECT_EQ(A.element(k).deg.q, el.deg.q + 1);
            }
        }
    }
}

TEST(CEWindow, BettiAgreesWithBruteForce) {
    auto w = ce_window(Rationals{}, witt_plus(10), 2, 10);
    for (int q = 1; q <= 2; ++q)
        for (int wt = 1; wt <= 10; ++wt) {
            auto d = w.degree(q, wt);
            std::size_t b = w.algebra().has_degree(d) ? w.cache().at(d).betti() : 0;
            EXPECT_EQ(b, brute_betti(w, q, wt)) << q << "," << wt;
        }
}

TEST(Goncharova, SmallTable) {
    auto t = goncharova_table(Rationals{}, 2, 8);
    for (int w = 1; w <= 8; ++w) {
        const auto h1 = t[{1, w}], h2 = t[{2, w}];
        EXPECT_EQ(h1, (w == 1 || w == 2) ? 1u : 0u) << w;
        EXPECT_EQ(h2, (w == 5 || w == 7) ? 1u : 0u) << w;
    }
    auto f = goncharova_table(PrimeField(101), 2, 8);
    EXPECT_EQ(f, t);
}

TEST(Witt, WeightSevenGenerator) {
    auto w = ce_window(Rationals{}, witt_plus(8), 2, 8);
    const auto& A = w.algebra();
    auto naive = w.form({2, 5});
    axpy(naive, mpq_class(-1), w.form({3, 4}));
    EXPECT_FALSE(A.d(naive).empty());
    auto closed = w.form({2, 5});
    axpy(closed, mpq_class(-3), w.form({3, 4}));
    EXPECT_TRUE(A.d(closed).empty());
    EXPECT_FALSE(is_exact(w.cache(), closed));
}

TEST(Omega, SmallCases) {
    EXPECT_EQ(omega({2, 3}).form, monomial({2, 3}));
    Form w34 = monomial({3, 4});
    form_add(w34, {2, 5}, -1);
    EXPECT_EQ(omega({3, 4}).form, w34);
    EXPECT_THROW(omega({3, 5}), Error);
    EXPECT_THROW(omega({1, 2}), Error);
    EXPECT_THROW(omega({4}), Error);
}

TEST(Omega, ClosedAndIndependent) {
    auto w = ce_window(Rationals{}, m0(22), 2, 21);
    const auto& A = w.algebra();
    for (int wt = 1; wt <= 21; ++wt) {
        std::size_t b = A.has_degree(w.degree(2, wt)) ? w.cache().at(w.degree(2, wt)).betti() : 0;
        EXPECT_EQ(b, (wt % 2 == 1 && wt >= 5) ? 1u : 0u) << wt;
    }
    for (int k = 2; k <= 10; ++k) {
        auto c = to_cochain(w, omega({k, k + 1}).form);
        EXPECT_TRUE(A.d(c).empty()) << k;
        EXPECT_FALSE(is_exact(w.cache(), c)) << k;
    }
    // degree three: weights 12 and 11
    auto w3 = ce_window(Rationals{}, m0(14), 3, 14);
    auto a = to_cochain(w3, omega({3, 4, 5}).form);
    auto b = to_cochain(w3, omega({2, 4, 5}).form);
    EXPECT_TRUE(w3.algebra().d(a).empty());
    EXPECT_TRUE(w3.algebra().d(b).empty());
    EXPECT_EQ(w3.cache().at(w3.degree(3, 12)).betti(), 1u);
}

TEST(D1, RightInverseProperty) {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 60; ++t) {
        Form x = random_form(rng, 1 + static_cast<int>(rng() % 3), 9);
        EXPECT_EQ(d1(d_minus1(x)), x);
    }
    EXPECT_EQ(d_minus1(monomial({5})), monomial({6}));
    // D_{-1}(e^i ^ e^k) = sum_{l=0}^{i-2} (-1)^l e^{i-l} ^ e^{k+l+1}
    for (int i = 2; i <= 6; ++i)
        for (int k = i + 1; k <= 9; ++k) {
            Form expect;
            for (int l = 0; l <= i - 2; ++l) form_add(expect, {i - l, k + l + 1}, l % 2 ? -1 : 1);
            EXPECT_EQ(d_minus1(monomial({i, k})), expect);
        }
    EXPECT_THROW(d1(monomial({1, 3})), Error);
}

TEST(D1, ExampleOfDMinus1) {
    Form expect = monomial({4, 6});
    form_add(expect, {3, 7}, -2);
    form_add(expect, {2, 8}, 3);
    EXPECT_EQ(d_minus1(omega({4, 5}).form), expect);
}

TEST(M0Product, GeneratorRules) {
    auto w = ce_window(Rationals{}, m0(20), 4, 20);
    const auto& A = w.algebra();
    for (auto idx : std::vector<std::vector<int>>{{3, 4}, {4, 5}, {3, 5, 6}, {4, 6, 7}}) {
        auto y = omega(idx);
        EXPECT_TRUE(m0_product({1, std::nullopt}, y).empty());
        auto e1y = A.wedge(w.e(1), to_cochain(w, y.form));
        EXPECT_TRUE(is_exact(w.cache(), e1y));
        auto p2 = m0_product({2, std::nullopt}, y);
        std::vector<int> with2{2};
        with2.insert(with2.end(), idx.begin(), idx.end());
        EXPECT_EQ(p2, omega(with2).form);
        auto diff = A.wedge(w.e(2), to_cochain(w, y.form));
        axpy(diff, mpq_class(-1), to_cochain(w, p2));
        EXPECT_TRUE(is_exact(w.cache(), diff));
    }
}

TEST(M0Product, AgreesWithWindowCup) {
    auto w = ce_window(Rationals{}, m0(26), 4, 26);
    const auto& A = w.algebra();
    int checked = 0;
    for (int a = 2; a <= 10; ++a)
        for (int b = a + 1; 2 * a + 2 * b + 2 <= 26; ++b) {
            auto x = omega({a, a + 1}), y = omega({b, b + 1});
            auto diff = A.wedge(to_cochain(w, x.form), to_cochain(w, y.form));
            axpy(diff, mpq_class(-1), to_cochain(w, m0_product({0, x}, y)));
            EXPECT_TRUE(is_exact(w.cache(), diff)) << a << "*" << b;
            ++checked;
        }
    EXPECT_EQ(checked, 20);
    auto x = omega({3, 4}), y = omega({5, 6});
    auto diff = A.wedge(to_cochain(w, x.form), to_cochain(w, y.form));
    axpy(diff, mpq_class(-1), to_cochain(w, m0_product({0, x}, y)));
    EXPECT_TRUE(is_exact(w.cache(), diff));
}

TEST(M0Product, OmegaExpansionRejectsNonClosedForms) {
    EXPECT_THROW(omega_expansion(monomial({2, 4})), Error);
    auto e = omega_expansion(omega({3, 4}).form);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e.begin()->first, (std::vector<int>{3, 4}));
}

TEST(ExplicitConnection, LastColumnOfDMinus1Powers) {
    // <e^2, e^1 x (i1 - 2), omega> with first row (-1)^{k+1} e^{k+1} and last column D_{-1}^{n-j} omega
    for (auto [i1, idx] : std::vector<std::pair<int, std::vector<int>>>{{3, {4, 5}}, {3, {5, 6}}, {4, {5, 6}}}) {
        auto om = omega(idx);
        const int n = i1;
        auto w = ce_window(Rationals{}, m0(i1 + om.weight() + 1), 3, i1 + om.weight());
        const auto& A = w.algebra();
        FormalConnection<Rationals> C(n);
        C.a(1, 1) = w.e(2);
        for (int k = 2; k < n; ++k) {
            C.a(k, k) = w.e(1);
            C.a(1, k) = scaled(w.e(k + 1), mpq_class(k % 2 ? 1 : -1));
        }
        Form col = om.form;
        for (int j = n; j >= 2; --j) {
            C.a(j, n) = to_cochain(w, col);
            col = d_minus1(col);
        }
        ASSERT_TRUE(is_defining_system(A, C)) << i1;
        // (-1)^{i1} sum_k (-1)^k D1^k e^{i1} ^ D_{-1}^k omega
        Form expect;
        Form right = om.form;
        for (int k = 0; k <= i1 - 2; ++k) {
            for (const auto& [m, c] : form_wedge(d1_power(monomial({i1}), k), right))
                form_add(expect, m, ((i1 + k) % 2 ? -c : c));
            right = d_minus1(right);
        }
        auto c = related_cocycle(A, C);
        auto expect_c = to_cochain(w, expect);
        EXPECT_EQ(c, expect_c) << i1;
        if (i1 == 3 && idx[0] == 4) {
            EXPECT_EQ(c, scaled(to_cochain(w, omega({3, 4, 5}).form), mpq_class(-1)));
        }
    }
}

TEST(TripleCriterion, SamplesOverRationals) {
    Rationals Q;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> v(-3, 3);
    for (int t = 0; t < 25; ++t) {
        std::vector<LinearClass> cls;
        for (int k = 0; k < 3; ++k) {
            LinearClass c{v(rng), v(rng)};
            if (sgn(c.first) == 0 && sgn(c.second) == 0) c.second = 1;
            cls.push_back(c);
        }
        auto out = classify_1d_massey(Q, cls);
        ASSERT_NE(out.status, MasseyStatus::Undefined);
        EXPECT_EQ(out.triviality == Triviality::Trivial, sgn(triple_criterion(cls)) == 0) << t;
    }
}

TEST(Families, DefinedAndTrivial) {
    Rationals Q;
    for (int n : {3, 4}) {
        for (auto fam : {Family::A, Family::B, Family::C, Family::D}) {
            if (fam == Family::D && n % 2) {
                EXPECT_THROW(family_classes(fam, n, 1, 2), Error);
                continue;
            }
            auto cls = family_classes(fam, n, fam == Family::C ? mpq_class(1) : mpq_class(2), mpq_class(-3));
            auto out = classify_1d_massey(Q, cls);
            EXPECT_NE(out.status, MasseyStatus::Undefined);
            EXPECT_EQ(out.triviality, Triviality::Trivial);
        }
    }
    EXPECT_THROW(family_classes(Family::B, 3, 0, 1), Error);
    EXPECT_THROW(family_classes(Family::C, 3, 3, 1), Error);
}
