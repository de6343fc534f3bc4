#include "fiberbound/gcd.hpp"
#include "fiberbound/mvpoly.hpp"
#include "fiberbound/upoly.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace fiberbound;
using testing_support::P;
using testing_support::Q;

namespace {

MvPoly<PrimeField> random_form(std::mt19937_64& rng, std::size_t nvars, unsigned deg, unsigned terms)
{
    PrimeField F;
    std::vector<MvPoly<PrimeField>::Term> ts;
    for (unsigned t = 0; t < terms; ++t) {
        Monomial m;
        unsigned left = deg;
        for (std::size_t j = 0; j + 1 < nvars; ++j) {
            unsigned e = static_cast<unsigned>(rng() % (left + 1));
            m.set(j, e);
            left -= e;
        }
        m.set(nvars - 1, left);
        ts.push_back({m, F.from_int(static_cast<std::int64_t>(rng() % 19) - 9)});
    }
    return MvPoly<PrimeField>::from_terms(F, nvars, std::move(ts));
}

} // namespace

TEST(MvPoly, DifferenceOfSquares)
{
    EXPECT_EQ(P("(X0 + X1)*(X0 - X1)"), P("X0^2 - X1^2"));
}

TEST(MvPoly, ExactDivision)
{
    EXPECT_EQ(exact_div(P("X0^2 - X1^2"), P("X0 + X1")), P("X0 - X1"));
    try {
        exact_div(P("X0^2 + X1^2"), P("X0 + X1"));
        FAIL() << "expected NotDivisible";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotDivisible);
    }
}

TEST(MvPoly, ArityMismatchThrows)
{
    try {
        (void)(P("X0", 2) + P("X0", 3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ArityMismatch);
    }
}

TEST(MvPoly, CanonicalFormDropsZeros)
{
    auto a = P("X0*X1 + X2^2 - X0*X1");
    EXPECT_EQ(a, P("X2^2"));
    EXPECT_EQ(a.terms().size(), 1u);
    EXPECT_TRUE((P("X0") - P("X0")).is_zero());
    EXPECT_EQ(P("0").total_degree(), -1);
}

TEST(MvPoly, Homogeneity)
{
    EXPECT_TRUE(P("X0^2 + X1*X2").is_homogeneous());
    EXPECT_FALSE(P("X0^2 + X1").is_homogeneous());
}

TEST(MvPoly, Derivatives)
{
    EXPECT_EQ(partial_derivative(P("X0^3*X1"), 0), P("3*X0^2*X1"));
    EXPECT_TRUE(partial_derivative(P("7"), 2).is_zero());
}

TEST(MvPoly, ProductRuleOnRandomPolynomials)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        auto f = random_form(rng, 3, 1 + rng() % 4, 5) + random_form(rng, 3, rng() % 3, 3);
        auto g = random_form(rng, 3, 1 + rng() % 4, 5);
        for (std::size_t j = 0; j < 3; ++j)
            EXPECT_TRUE((partial_derivative(f * g, j) - f * partial_derivative(g, j) - g * partial_derivative(f, j)).is_zero());
    }
}

TEST(MvPoly, EulerIdentityOnRandomForms)
{
    PrimeField F;
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        unsigned d = 1 + rng() % 6;
        auto f = random_form(rng, 3, d, 6);
        auto lhs = MvPoly<PrimeField>(F, 3);
        for (std::size_t j = 0; j < 3; ++j) lhs += MvPoly<PrimeField>::variable(F, 3, j) * partial_derivative(f, j);
        EXPECT_EQ(lhs, f.scaled(F.from_count(d)));
    }
}

TEST(MvPoly, Evaluation)
{
    PrimeField F;
    std::vector<std::uint64_t> a{1, 1, 0}, b{1, 2, 3};
    EXPECT_EQ(evaluate(P("X0^2 - X1^2"), std::span<const std::uint64_t>(a)), 0u);
    EXPECT_EQ(evaluate(P("X0*X1*X2"), std::span<const std::uint64_t>(b)), 6u);
}

TEST(MvPoly, PrintingUsesSignedCoefficients)
{
    EXPECT_EQ(to_string(P("3*X0^2*X1 - X2^3")), "3*X0^2*X1 - X2^3");
    EXPECT_EQ(to_string(Q("X0 - 2*X1")), "X0 - 2*X1");
}

TEST(Gcd, KnownExamples)
{
    EXPECT_EQ(gcd(P("X0^2 - X1^2"), P("(X0 + X1)^2")), P("X0 + X1"));
    EXPECT_EQ(gcd(P("3*X0*X1 + 6*X2^2"), P("0")), P("X0*X1 + 2*X2^2"));
    EXPECT_ANY_THROW(gcd(P("0"), P("0")));
}

TEST(Gcd, RecoversPlantedCommonFactor)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        auto c = random_form(rng, 3, 1 + rng() % 3, 3);
        auto a = random_form(rng, 3, 1 + rng() % 3, 4);
        auto b = random_form(rng, 3, 1 + rng() % 3, 4);
        if (c.is_zero() || a.is_zero() || b.is_zero()) continue;
        auto g = gcd(a * c, b * c);
        EXPECT_TRUE(divides(c, g));
        EXPECT_TRUE(divides(g, a * c));
        EXPECT_TRUE(divides(g, b * c));
        EXPECT_EQ(g, gcd(b * c, a * c)); // symmetric
        EXPECT_EQ(g, gcd(a * c, b * c + a * c)); // invariant under a -> a, b -> b + a
    }
}

TEST(Gcd, OverRationals)
{
    EXPECT_EQ(gcd(Q("2*X0^2 - 2*X1^2"), Q("3*X0 + 3*X1")), Q("X0 + X1"));
    EXPECT_EQ(gcd(Q("X0^2 + X1^2"), Q("X0 + X1")), Q("1"));
}

TEST(Gcd, MonomialContentShortcut)
{
    EXPECT_EQ(gcd(P("X0^3*X1^2*X2"), P("X0*X1^5")), P("X0*X1^2"));
    EXPECT_EQ(gcd(P("X0^2*(X1 + X2)"), P("X0*X2*(X1 + X2)^2")), P("X0*X1 + X0*X2"));
}

TEST(Squarefree, MixedMultiplicities)
{
    auto parts = squarefree_decompose(P("X0^3*X1^2*(X0 + X1)"));
    ASSERT_EQ(parts.size(), 3u);
    EXPECT_EQ(parts[0].factor, P("X0 + X1"));
    EXPECT_EQ(parts[0].multiplicity, 1u);
    EXPECT_EQ(parts[1].factor, P("X1"));
    EXPECT_EQ(parts[1].multiplicity, 2u);
    EXPECT_EQ(parts[2].factor, P("X0"));
    EXPECT_EQ(parts[2].multiplicity, 3u);
    EXPECT_EQ(weighted_degree(parts), 1 + 3 + 5);
}

TEST(Squarefree, SquarefreeInputIsOnePart)
{
    auto parts = squarefree_decompose(P("2*X0^2 + 2*X1*X2"));
    ASSERT_EQ(parts.size(), 1u);
    EXPECT_EQ(parts[0].factor, P("X0^2 + X1*X2"));
    EXPECT_EQ(parts[0].multiplicity, 1u);
}

TEST(Squarefree, PthPowerHazard)
{
    try {
        squarefree_decompose(P("X0^7 + X1^7", 2, PrimeField(5)));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::PthPowerHazard);
    }
}

TEST(Squarefree, ReconstructsRandomProducts)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_form(rng, 3, 1 + rng() % 2, 3);
        auto b = random_form(rng, 3, 1, 3);
        if (a.is_zero() || b.is_zero()) continue;
        auto f = pow(a, 1 + rng() % 3) * pow(b, 1 + rng() % 3);
        auto parts = squarefree_decompose(f);
        auto back = MvPoly<PrimeField>::one(f.field(), 3);
        for (const auto& p : parts) back *= pow(p.factor, p.multiplicity);
        EXPECT_EQ(back, f.monic());
        for (std::size_t i = 0; i < parts.size(); ++i)
            for (std::size_t j = i + 1; j < parts.size(); ++j)
                EXPECT_TRUE(gcd(parts[i].factor, parts[j].factor).is_one());
    }
}

TEST(Squarefree, OverRationals)
{
    auto parts = squarefree_decompose(Q("3*X0^2*(X1 - X2)^3"));
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0].factor, Q("X0"));
    EXPECT_EQ(parts[1].factor, Q("X1 - X2"));
    EXPECT_EQ(parts[1].multiplicity, 3u);
}

TEST(UnivariateRoots, KnownExamples)
{
    PrimeField F7(7);
    EXPECT_EQ(univariate_roots(UPoly(F7, {6, 0, 1}), 1), (std::vector<std::uint64_t>{1, 6}));
    EXPECT_TRUE(univariate_roots(UPoly(F7, {1, 0, 1}), 1).empty());
}

TEST(UnivariateRoots, RandomSplitProducts)
{
    PrimeField F;
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::uint64_t> roots;
        auto prod = UPoly::constant(F, 1);
        for (int k = 0; k < 1 + static_cast<int>(rng() % 8); ++k) {
            auto r = F.random(rng);
            roots.push_back(r);
            prod = prod * UPoly(F, {F.neg(r), 1});
        }
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
        EXPECT_EQ(univariate_roots(prod, derive_seed(17, trial)), roots);
    }
}

TEST(UnivariateRoots, MultivariateEntryPoint)
{
    PrimeField F7(7);
    EXPECT_EQ(univariate_roots(P("X0^2 - 1", 1, F7), 1), (std::vector<std::uint64_t>{1, 6}));
    try {
        univariate_roots(Q("X0^2 - 1", 1), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::RationalModeUnsupported);
    }
}

TEST(LowDegreeFactors, FindsQuadraticIrreducibles)
{
    PrimeField F;
    // (t^2 + 1)(t - 3)(t^2 + 1) has one linear and one quadratic factor.
    UPoly a = UPoly(F, {1, 0, 1}) * UPoly(F, {F.from_int(-3), 1}) * UPoly(F, {1, 0, 1});
    auto facs = low_degree_factors(a, 2, 4);
    ASSERT_EQ(facs[1].size(), 1u);
    EXPECT_EQ(facs[1][0], UPoly(F, {F.from_int(-3), 1}));
    ASSERT_EQ(facs[2].size(), 1u);
    EXPECT_EQ(facs[2][0], UPoly(F, {1, 0, 1}));
}

TEST(ExtensionField, ArithmeticInQuadraticExtension)
{
    PrimeField F;
    ExtensionField E(UPoly(F, {1, 0, 1})); // s^2 = -1
    auto s = E.generator();
    EXPECT_EQ(E.mul(s, s), E.embed(F.neg(1)));
    auto u = E.add(E.embed(3), s);
    EXPECT_EQ(E.mul(u, E.inv(u)), E.one());
    EXPECT_FALSE(E.in_base(s));
    EXPECT_TRUE(E.in_base(E.mul(s, s)));
}
