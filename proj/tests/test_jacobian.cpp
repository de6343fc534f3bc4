#include "fiberbound/jacobian.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fiberbound;
using testing_support::example2;
using testing_support::family;
using testing_support::map_of;
using testing_support::P;
using testing_support::Q;

namespace {

template <class Fn>
Errc code_of(Fn&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no fiberbound::Error thrown";
    return Errc::ParseError;
}

} // namespace

TEST(Validation, RejectsBadInputs)
{
    EXPECT_EQ(code_of([] { map_of({"X0^2", "X1"}); }), Errc::MixedDegrees);
    EXPECT_EQ(code_of([] { map_of({"X0^2 + X1", "X1^2"}); }), Errc::NotHomogeneous);
    EXPECT_EQ(code_of([] { map_of({"X0^2", "X0*X1"}); }), Errc::CommonFactor);
    EXPECT_EQ(code_of([] { map_of({"X0^5", "X1^5", "X2^5"}, 3, PrimeField(5)); }), Errc::CharDividesDegree);
    EXPECT_EQ(code_of([] {
                  make_rational_map(std::vector{P("X0", 2), P("X0", 3)});
              }),
              Errc::ArityMismatch);
}

TEST(Validation, CommonFactorIsReported)
{
    try {
        map_of({"X0^2", "X0*X1"});
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("X0"), std::string::npos);
    }
}

TEST(Validation, Example2Shape)
{
    auto in = example2();
    EXPECT_EQ(in.m, 2u);
    EXPECT_EQ(in.n, 3u);
    EXPECT_EQ(in.d, 6u);
    EXPECT_EQ(in.outer_bound(), 15);
}

TEST(Jacobian, SmallExamples)
{
    auto in = map_of({"X0^2", "X0*X1", "X1^2"}, 2);
    auto J = build_jacobian(in);
    EXPECT_EQ(J[0][0], P("2*X0", 2));
    EXPECT_TRUE(J[0][1].is_zero());
    EXPECT_EQ(J[1][0], P("X1", 2));
    EXPECT_EQ(J[1][1], P("X0", 2));
    EXPECT_TRUE(J[2][0].is_zero());
    EXPECT_EQ(J[2][1], P("2*X1", 2));

    auto id = build_jacobian(map_of({"X0", "X1", "X2"}));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(id[i][j], P(i == j ? "1" : "0"));
}

TEST(Minors, DiagonalDeterminant)
{
    for (unsigned d = 3; d <= 5; ++d) {
        auto D = std::to_string(d);
        auto in = map_of({"X0^" + D, "X1^" + D, "X2^" + D, "X0*X1*X2^" + std::to_string(d - 2)});
        auto ms = minors(build_jacobian(in), 3);
        ASSERT_EQ(ms.size(), 4u);
        EXPECT_EQ(ms[0].rows, (std::vector<std::size_t>{0, 1, 2}));
        auto dd = std::to_string(d * d * d);
        EXPECT_EQ(ms[0].value, P(dd + "*(X0*X1*X2)^" + std::to_string(d - 1)));
    }
}

TEST(Minors, SOutOfRange)
{
    auto J = build_jacobian(example2());
    EXPECT_EQ(code_of([&] { minors(J, 4); }), Errc::SOutOfRange);
    EXPECT_EQ(code_of([&] { minors(J, 0); }), Errc::SOutOfRange);
    EXPECT_EQ(minors(J, 3).size(), 4u);
    EXPECT_EQ(minors(J, 2).size(), 18u);
}

TEST(GcdOfMinors, Example2)
{
    auto rep = jacobian_report(example2(), 1);
    EXPECT_EQ(rep.minors3.size(), 4u);
    EXPECT_EQ(rep.degF, 11);
    EXPECT_EQ(rep.F, P("X0*X1^3*X2*(X0^4 - X2^4)*(X1^2 - X2^2)").monic());
    EXPECT_TRUE(rep.i3_nonzero);
}

TEST(GcdOfMinors, FamilyAtDegreeFour)
{
    auto rep = jacobian_report(family(4), 1);
    EXPECT_EQ(rep.F, P("X0*X2*(X0^2 - X1^2)*(X1^2 - X2^2)").monic());
    EXPECT_EQ(rep.degF, 6);
}

TEST(GcdOfMinors, FamilyGeneralDegree)
{
    for (unsigned d = 4; d <= 7; ++d) {
        auto rep = jacobian_report(family(d), 1);
        auto expected = P("X0^" + std::to_string(2 * d - 7) + "*X2*(X0^2 - X1^2)*(X1^2 - X2^2)");
        EXPECT_EQ(rep.F, expected.monic()) << "d = " << d;
    }
}

TEST(GcdOfMinors, CubeFixture)
{
    auto rep = jacobian_report(map_of({"X0^3", "X1^3", "X2^3", "X0^3 + X1^3"}), 1);
    EXPECT_EQ(rep.F, P("X0^2*X1^2*X2^2"));
    EXPECT_EQ(rep.degF, 6);
}

TEST(GcdOfMinors, OrderDoesNotMatter)
{
    auto in = example2();
    auto a = jacobian_report(in, 1).F, b = jacobian_report(in, 99).F;
    EXPECT_EQ(a, b);
}

TEST(GcdOfMinors, AllZero)
{
    std::vector<MvPoly<PrimeField>> zeros{P("0"), P("0")};
    EXPECT_EQ(code_of([&] { gcd_of_minors(std::span<const MvPoly<PrimeField>>(zeros)); }), Errc::AllMinorsZero);
}

TEST(GcdOfMinors, RationalAgreesWithPrime)
{
    auto in = map_of<RationalField>({testing_support::example2_forms[0], testing_support::example2_forms[1],
                                     testing_support::example2_forms[2], testing_support::example2_forms[3]});
    auto rep = jacobian_report(in, 1);
    EXPECT_EQ(rep.F, Q("X0*X1^3*X2*(X0^4 - X2^4)*(X1^2 - X2^2)"));
}

TEST(Finiteness, Flags)
{
    auto id = generic_finiteness_check(map_of({"X0", "X1", "X2"}), 1);
    EXPECT_TRUE(id.i_top_nonzero);
    EXPECT_TRUE(id.i3_nonzero);
    auto flat = generic_finiteness_check(map_of({"X0^2", "X0*X1", "X1^2", "X0^2 + X1^2"}), 1);
    EXPECT_FALSE(flat.i3_nonzero);
    EXPECT_FALSE(flat.i_top_nonzero);
    EXPECT_TRUE(generic_finiteness_check(example2(), 1).i3_nonzero);
    EXPECT_FALSE(jacobian_report(map_of({"X0^2", "X0*X1", "X1^2", "X0^2 + X1^2"}), 1).i3_nonzero);
}

TEST(EulerSyzygy, Example2)
{
    auto in = example2();
    auto F = jacobian_report(in, 1).F;
    auto syz = euler_syzygy(in, F);
    EXPECT_EQ(syz.delta, 4);
    EXPECT_TRUE(syz.verified);
    for (const auto& a : syz.a) {
        if (!a.is_zero()) {
            EXPECT_EQ(a.total_degree(), 4);
        }
    }
}

TEST(EulerSyzygy, DependentCubes)
{
    auto in = map_of({"X0^3", "X1^3", "X2^3", "X0^3 + X1^3"});
    auto syz = euler_syzygy(in, jacobian_report(in, 1).F);
    EXPECT_EQ(syz.delta, 0);
    EXPECT_TRUE(syz.verified);
    // proportional to (1, 1, 0, -1)
    PrimeField K;
    auto c = syz.a[0].leading_coefficient();
    EXPECT_TRUE(syz.a[0].is_constant());
    EXPECT_EQ(syz.a[1], syz.a[0]);
    EXPECT_TRUE(syz.a[2].is_zero());
    EXPECT_EQ(syz.a[3], MvPoly<PrimeField>::constant(K, 3, K.neg(c)));
}

TEST(EulerSyzygy, CofactorIdentityOnRandomQuartics)
{
    PrimeField K;
    std::mt19937_64 rng(21);
    auto monos = std::vector<std::string>{"X0^4", "X1^4", "X2^4", "X0^3*X1", "X0*X1^2*X2", "X1*X2^3", "X0^2*X2^2"};
    for (int t = 0; t < 10; ++t) {
        std::vector<MvPoly<PrimeField>> f;
        for (int i = 0; i < 4; ++i) {
            auto g = MvPoly<PrimeField>(K, 3);
            for (const auto& m : monos) g += P(m).scaled(K.from_int(static_cast<std::int64_t>(rng() % 11) - 5));
            f.push_back(g);
        }
        RationalMapInput<PrimeField> in;
        try {
            in = make_rational_map(f);
        } catch (const Error&) {
            continue;
        }
        auto J = build_jacobian(in);
        std::vector<MvPoly<PrimeField>> D;
        std::vector<std::size_t> cols{0, 1, 2};
        for (std::size_t i = 0; i < 4; ++i) {
            std::vector<std::size_t> rows;
            for (std::size_t r = 0; r < 4; ++r)
                if (r != i) rows.push_back(r);
            auto det = determinant<PrimeField>(J, rows, cols);
            D.push_back(i % 2 ? -det : det);
        }
        for (std::size_t j = 0; j < 3; ++j) {
            auto s = MvPoly<PrimeField>(K, 3);
            for (std::size_t i = 0; i < 4; ++i) s += D[i] * J[i][j];
            EXPECT_TRUE(s.is_zero());
        }
    }
}

TEST(EulerSyzygy, CharDividesDegree)
{
    // A prime dividing d is refused already at construction.
    EXPECT_EQ(code_of([] { map_of({"X0^7", "X1^7", "X2^7", "X0^6*X1"}, 3, PrimeField(7)); }),
              Errc::CharDividesDegree);
}

TEST(LinearDependence, Examples)
{
    auto cubes = linear_dependence_check(map_of({"X0^3", "X1^3", "X2^3", "X0^3 + X1^3"}));
    EXPECT_TRUE(cubes.dependent);
    ASSERT_TRUE(cubes.relation.has_value());
    PrimeField K;
    EXPECT_EQ(*cubes.relation, (std::vector<std::uint64_t>{1, 1, 0, K.neg(1)}));

    EXPECT_FALSE(linear_dependence_check(example2()).dependent);

    auto repeated = linear_dependence_check(map_of({"X0^2 + X1*X2", "X0^2 + X1*X2", "X1^2"}));
    EXPECT_TRUE(repeated.dependent);
}

TEST(FittingInvariance, IdentityPermutationAndRandom)
{
    PrimeField K;
    auto in = example2();
    Matrix<PrimeField> id(K, 4, 4), perm(K, 4, 4), sing(K, 4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        id(i, i) = 1;
        perm(i, (i + 1) % 4) = 1;
        sing(0, i) = 1;
    }
    EXPECT_TRUE(fitting_invariance_check(in, id, 1));
    EXPECT_TRUE(fitting_invariance_check(in, perm, 1));
    EXPECT_EQ(code_of([&] { fitting_invariance_check(in, sing, 1); }), Errc::SingularChange);

    std::mt19937_64 rng(8);
    for (int t = 0; t < 5; ++t) {
        Matrix<PrimeField> c(K, 4, 4);
        do {
            for (auto& v : c.data) v = K.random(rng);
        } while (rank(c) != 4);
        EXPECT_TRUE(fitting_invariance_check(in, c, 1));
    }
}
