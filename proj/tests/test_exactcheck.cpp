#include "opmat/exactcheck.hpp"
#include "opmat/opmatrix.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace opmat;

namespace {

Rational q(long long p, long long d = 1) { return make_rational(p, d); }

MonomialPoly poly(std::initializer_list<Rational> c) { return MonomialPoly(std::vector<Rational>(c)); }

std::vector<Rational> random_rationals(std::mt19937_64& rng, std::size_t count) {
    std::uniform_int_distribution<long long> num(-20, 20);
    std::uniform_int_distribution<long long> den(1, 11);
    std::vector<Rational> v(count);
    for (auto& x : v) x = make_rational(num(rng), den(rng));
    return v;
}

std::vector<Family> oracle_families() {
    return {Family::jacobi(2, 3),       Family::gegenbauer(12),     Family::chebyshev_first(),
            Family::chebyshev_second(), Family::chebyshev_third(),  Family::chebyshev_fourth(),
            Family::legendre(),         Family::laguerre(),         Family::hermite(),
            Family::bessel()};
}

}  // namespace

TEST(MonomialPoly, TrimAndDegree) {
    EXPECT_EQ(poly({q(1), q(0), q(0)}).degree(), 0);
    EXPECT_TRUE(poly({q(0)}).is_zero());
    EXPECT_EQ(MonomialPoly().degree(), -1);
    EXPECT_EQ(poly({q(1), q(2)})(q(3)), q(7));
}

TEST(Calculus, Examples) {
    EXPECT_EQ(differentiate(poly({q(0), q(0), q(1)})), poly({q(0), q(2)}));
    EXPECT_EQ(integrate(poly({q(1)})), poly({q(0), q(1)}));
    EXPECT_TRUE(differentiate(poly({q(5)})).is_zero());
}

TEST(Calculus, DifferentiateUndoesIntegrate) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> deg(0, 30);
    for (int trial = 0; trial < 100; ++trial) {
        MonomialPoly p(random_rationals(rng, deg(rng) + 1));
        EXPECT_EQ(differentiate(integrate(p)), p);
    }
}

TEST(Basis, LegendreThree) {
    auto b = basis_as_monomials(Family::legendre(), 3);
    ASSERT_EQ(b.size(), 3u);
    EXPECT_EQ(b[0], poly({q(1)}));
    EXPECT_EQ(b[1], poly({q(0), q(1)}));
    EXPECT_EQ(b[2], poly({q(-1, 2), q(0), q(3, 2)}));
}

TEST(Basis, ChebyshevFirstFour) {
    auto b = basis_as_monomials(Family::chebyshev_first(), 4);
    EXPECT_EQ(b[3], poly({q(0), q(-3), q(0), q(4)}));
}

TEST(Basis, SizeOne) {
    for (const auto& f : oracle_families()) EXPECT_EQ(basis_as_monomials(f, 1), std::vector<MonomialPoly>{poly({q(1)})});
}

TEST(Basis, DegreeEqualsIndex) {
    for (const auto& f : oracle_families()) {
        auto b = basis_as_monomials(f, 25);
        for (std::size_t j = 0; j < b.size(); ++j) {
            EXPECT_EQ(b[j].degree(), static_cast<long>(j)) << f.name();
            EXPECT_NE(sgn(b[j].coeffs().back()), 0);
        }
    }
}

TEST(Basis, RequiresRationalParameters) {
    EXPECT_THROW(basis_as_monomials(Family::gegenbauer(1.0 / 7.0), 4), inexact_parameter);
    EXPECT_NO_THROW(basis_as_monomials(Family::gegenbauer(Parameter::ratio(1, 7)), 4));
}

TEST(Project, Examples) {
    const auto f = Family::legendre();
    auto b = basis_as_monomials(f, 8);
    auto e5 = project(b[5], b);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(e5[i], i == 5 ? q(1) : q(0));
    auto x = project(poly({q(0), q(1)}), f, 2);
    EXPECT_EQ(x, (std::vector<Rational>{q(0), q(1)}));
    auto x2 = project(poly({q(0), q(0), q(1)}), f, 3);
    EXPECT_EQ(x2, (std::vector<Rational>{q(1, 3), q(0), q(2, 3)}));
    EXPECT_THROW(project(poly({q(0), q(0), q(1)}), f, 2), std::invalid_argument);
}

TEST(Project, RoundTrip) {
    std::mt19937_64 rng(2);
    for (const auto& f : oracle_families()) {
        auto b = basis_as_monomials(f, 20);
        for (int trial = 0; trial < 5; ++trial) {
            auto c = random_rationals(rng, 20);
            MonomialPoly sum;
            for (std::size_t j = 0; j < 20; ++j) sum = sum + c[j] * b[j];
            EXPECT_EQ(project(sum, b), c) << f.name();
        }
    }
}

TEST(OracleMatrix, HermiteDerivative) {
    auto d = oracle_matrix(OracleKind::Derivative, Family::hermite(), 6);
    for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(d(i, j), i + 1 == j ? q(2 * static_cast<long long>(j)) : q(0));
}

TEST(OracleMatrix, ShiftEqualsBuilder) {
    for (const auto& f : oracle_families()) {
        auto m = first_mismatch(oracle_matrix(OracleKind::Shift, f, 12), shift_matrix<Rational>(f, 12));
        EXPECT_FALSE(m) << f.name() << " " << (m ? m->str() : "");
    }
}

TEST(OracleMatrix, ChebyshevSecondPrimitive) {
    auto o = oracle_matrix(OracleKind::Primitive, Family::chebyshev_second(), 6);
    for (std::size_t j = 0; j + 1 < 6; ++j) EXPECT_EQ(o(j + 1, j), q(1, 2 * (static_cast<long long>(j) + 1)));
    for (std::size_t j = 2; j < 6; ++j) EXPECT_EQ(o(j - 1, j), q(-1, 2 * (static_cast<long long>(j) + 1)));
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(o(0, j), q(0));
}

TEST(OracleMatrix, DefiniteIntegralVanishesAtLimit) {
    const auto f = Family::laguerre();
    auto oa = oracle_matrix(OracleKind::DefiniteIntegral, f, 10, q(2, 5));
    auto row = apply_left(eval_basis<Rational>(f, 10, q(2, 5)), oa);
    for (std::size_t j = 0; j + 2 <= 10; ++j) EXPECT_EQ(row[j], q(0));
}

TEST(OracleMatrix, AgreesWithBuildersAtModerateSize) {
    for (const auto& f : oracle_families()) {
        const std::size_t n = 16;
        auto dn = oracle_matrix(OracleKind::Derivative, f, n);
        auto on = oracle_matrix(OracleKind::Primitive, f, n);
        auto m1 = first_mismatch(derivative_matrix<Rational>(f, n, Route::Recursive), dn);
        auto m2 = first_mismatch(primitive_matrix<Rational>(f, n, Route::Recursive), on);
        EXPECT_FALSE(m1) << f.name() << " N " << (m1 ? m1->str() : "");
        EXPECT_FALSE(m2) << f.name() << " O " << (m2 ? m2->str() : "");
    }
}

TEST(Mismatch, ReportsFirstDifference) {
    OperationalMatrix<Rational> a(3);
    auto b = a;
    b(2, 1) = q(1, 2);
    auto m = first_mismatch(a, b);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->row, 2u);
    EXPECT_EQ(m->col, 1u);
    EXPECT_EQ(m->str(), "(2, 1): 0 != 1/2");
    EXPECT_FALSE(first_mismatch(a, a));
}
