#include "weylab/weight.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace weylab;

namespace {

std::vector<std::vector<double>> random_points(int dim, int count, double radius, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<std::vector<double>> pts(static_cast<std::size_t>(count), std::vector<double>(dim));
    for (auto& p : pts)
        for (auto& v : p) v = u(rng);
    return pts;
}

std::vector<WeightSpec> chain(int N, double s) {
    std::vector<WeightSpec> w;
    w.push_back(WeightSpec::polynomial(4, -s, WeightBlock::second));
    for (int j = 1; j <= N; ++j) w.push_back(WeightSpec::polynomial(4, s, WeightBlock::second));
    return w;
}

} // namespace

TEST(Weight, PointValues) {
    const std::vector<double> x{3.0, 4.0};
    EXPECT_DOUBLE_EQ(evaluate_weight(WeightSpec::polynomial(2, 0.0), x), 1.0);
    EXPECT_NEAR(evaluate_weight(WeightSpec::polynomial(2, 2.0), x), 26.0, 1e-12);
    EXPECT_NEAR(evaluate_weight(WeightSpec::exponential(2, 1.0), std::vector<double>{2.0, 0.0}), std::exp(2.0), 1e-12);
    EXPECT_DOUBLE_EQ(evaluate_weight(WeightSpec::unit(2), x), 1.0);
}

TEST(Weight, BlocksSelectHalvesOfTheArgument) {
    const std::vector<double> p{3.0, 4.0, 0.0, 1.0};
    EXPECT_NEAR(evaluate_weight(WeightSpec::polynomial(4, 2.0, WeightBlock::first), p), 26.0, 1e-12);
    EXPECT_NEAR(evaluate_weight(WeightSpec::polynomial(4, 2.0, WeightBlock::second), p), 2.0, 1e-12);
    EXPECT_NEAR(evaluate_weight(WeightSpec::polynomial(4, 2.0), p), 27.0, 1e-12);
}

TEST(Weight, ParsesLiterals) {
    EXPECT_TRUE(WeightSpec::parse("unit", 4).factors.empty() ||
                WeightSpec::parse("unit", 4).factors.front().kind == WeightKind::unit);
    const auto w = WeightSpec::parse("split:poly:s=1@Y", 4);
    ASSERT_EQ(w.factors.size(), 1u);
    EXPECT_EQ(w.factors[0].kind, WeightKind::polynomial);
    EXPECT_EQ(w.factors[0].block, WeightBlock::second);
    EXPECT_DOUBLE_EQ(w.factors[0].param, 1.0);
    const auto e = WeightSpec::parse("exp:c=0.25", 2);
    EXPECT_EQ(e.factors[0].kind, WeightKind::exponential);
    const auto prod = WeightSpec::parse("poly:s=1.5*exp:c=0.5@X", 4);
    EXPECT_EQ(prod.factors.size(), 2u);
    const std::vector<double> p{1.0, 0.0, 2.0, 0.0};
    EXPECT_NEAR(evaluate_weight(prod, p), std::pow(6.0, 0.75) * std::exp(0.5), 1e-12);
}

TEST(Weight, RejectsMalformedLiterals) {
    EXPECT_THROW(WeightSpec::parse("exp:c=2", 2), std::invalid_argument);
    EXPECT_THROW(WeightSpec::parse("poly:t=1", 2), std::invalid_argument);
    EXPECT_THROW(WeightSpec::parse("poly:s=abc", 2), std::invalid_argument);
    EXPECT_THROW(WeightSpec::parse("gauss", 2), std::invalid_argument);
    EXPECT_THROW(WeightSpec::parse("poly:s=1@Z", 4), std::invalid_argument);
    EXPECT_THROW(WeightSpec::exponential(2, -1.5), std::invalid_argument);
}

TEST(Weight, LiteralRoundTrip) {
    for (const char* lit : {"unit", "poly:s=1.5", "exp:c=0.25", "poly:s=1@Y", "poly:s=-1@X*exp:c=0.5"}) {
        const auto w = WeightSpec::parse(lit, 4);
        const auto again = WeightSpec::parse(w.str(), 4);
        const std::vector<double> p{0.3, -1.2, 2.0, 0.7};
        EXPECT_DOUBLE_EQ(evaluate_weight(w, p), evaluate_weight(again, p)) << lit;
    }
}

TEST(Weight, InverseAndProduct) {
    const auto w = WeightSpec::parse("poly:s=2@X*exp:c=0.3", 4);
    const auto one = w.times(w.inverse());
    for (const auto& p : random_points(4, 50, 5.0, 1)) EXPECT_NEAR(evaluate_weight(one, p), 1.0, 1e-12);
}

TEST(Moderate, UnitWeightHasRatioOne) {
    const auto c = verify_moderate(WeightSpec::unit(2), WeightSpec::unit(2), random_points(2, 40, 3.0, 2));
    EXPECT_TRUE(c.ok);
    EXPECT_DOUBLE_EQ(c.worst_ratio, 1.0);
}

TEST(Moderate, ExponentialIsSubmultiplicative) {
    const auto w = WeightSpec::exponential(2, 1.0);
    const auto c = verify_moderate(w, w, random_points(2, 60, 4.0, 3));
    EXPECT_TRUE(c.ok);
    EXPECT_LE(c.worst_ratio, 1.0 + 1e-12);
}

TEST(Moderate, PolynomialSatisfiesPeetre) {
    for (double s : {-2.0, -0.5, 1.0, 3.0}) {
        const auto w = WeightSpec::polynomial(2, s);
        const auto c = verify_moderate(w, w.moderator(), random_points(2, 60, 6.0, 4));
        EXPECT_TRUE(c.ok) << s;
        EXPECT_LE(c.worst_ratio, std::pow(2.0, std::abs(s) / 2.0) + 1e-12) << s;
    }
}

TEST(Moderate, BuiltInModeratorsAreAccepted) {
    for (const char* lit : {"unit", "poly:s=2", "poly:s=-1@Y", "exp:c=0.5", "exp:c=-0.25@X*poly:s=1"}) {
        const auto w = WeightSpec::parse(lit, 4);
        EXPECT_TRUE(verify_moderate(w, w.moderator(), random_points(4, 30, 3.0, 5)).ok) << lit;
    }
}

TEST(Moderate, ExponentialGrowthEscapesAPolynomialModerator) {
    const auto w = WeightSpec::exponential(2, 0.5);
    const auto c = verify_moderate(w, WeightSpec::polynomial(2, 4.0), random_points(2, 20, 2.0, 6));
    EXPECT_FALSE(c.ok);
}

TEST(ProductWeight, UnitWeightsGiveInfimumOne) {
    const std::vector<WeightSpec> w(4, WeightSpec::unit(4));
    for (auto kind : {ProductWeightKind::weyl, ProductWeightKind::a_calculus, ProductWeightKind::twist}) {
        const auto r = product_weight_condition(kind, w, {0.0}, 500, 7);
        EXPECT_TRUE(r.satisfied);
        EXPECT_DOUBLE_EQ(r.inf_estimate, 1.0);
    }
}

TEST(ProductWeight, PolynomialChainIsSatisfied) {
    for (auto kind : {ProductWeightKind::weyl, ProductWeightKind::twist, ProductWeightKind::a_calculus}) {
        const auto r = product_weight_condition(kind, chain(3, 1.0), {0.5}, 10000, 8);
        EXPECT_TRUE(r.satisfied);
        EXPECT_GT(r.inf_estimate, 1e-3);
    }
}

TEST(ProductWeight, ChainOracleBoundsEverySample) {
    // The Weyl arguments carry the increments X_j - X_{j-1} in their second
    // block; <a + b> <= sqrt(2) <a> <b> applied twice bounds the product below by 1/2.
    const auto r = product_weight_condition(ProductWeightKind::weyl, chain(3, 1.0), {0.5}, 5000, 9);
    EXPECT_GE(r.inf_estimate, 0.5 - 1e-12);
}

TEST(ProductWeight, DecayingOmegaZeroFails) {
    std::vector<WeightSpec> w(4, WeightSpec::unit(4));
    w[0] = WeightSpec::polynomial(4, -1.0, WeightBlock::second);
    const auto r = product_weight_condition(ProductWeightKind::weyl, w, {0.5}, 2000, 10);
    EXPECT_FALSE(r.satisfied);
    EXPECT_LT(r.inf_estimate, kWeightConditionFloor);
    // the growing choice is harmless
    w[0] = WeightSpec::polynomial(4, 1.0, WeightBlock::second);
    EXPECT_TRUE(product_weight_condition(ProductWeightKind::weyl, w, {0.5}, 2000, 10).satisfied);
}

TEST(ProductWeight, WeylArgumentIsTheHalfShearAfterRescaling) {
    // T_{1/2}(X, Y) mapped by (u, v, w, z) -> (2u, 2v, z, -w) is (X + Y, X - Y)
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int t = 0; t < 50; ++t) {
        const std::vector<double> X{u(rng), u(rng)}, Y{u(rng), u(rng)};
        const auto a = product_weight_argument(ProductWeightKind::a_calculus, X, Y, {0.5});
        const auto w = product_weight_argument(ProductWeightKind::weyl, X, Y, {0.5});
        ASSERT_EQ(a.size(), 4u);
        const std::vector<double> mapped{2 * a[0], 2 * a[1], a[3], -a[2]};
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(mapped[i], w[i], 1e-12);
        EXPECT_NEAR(w[0], X[0] + Y[0], 1e-12);
        EXPECT_NEAR(w[3], X[1] - Y[1], 1e-12);
    }
}

TEST(ProductWeight, ArityMismatchIsRejected) {
    std::vector<WeightSpec> w(4, WeightSpec::unit(2));
    EXPECT_THROW(product_weight_condition(ProductWeightKind::weyl, w, {0.5}, 10, 1), std::invalid_argument);
}

TEST(ProductWeight, DeterministicForAFixedSeed) {
    const auto a = product_weight_condition(ProductWeightKind::twist, chain(3, 0.5), {0.5}, 300, 42);
    const auto b = product_weight_condition(ProductWeightKind::twist, chain(3, 0.5), {0.5}, 300, 42);
    EXPECT_EQ(a.inf_estimate, b.inf_estimate);
}
