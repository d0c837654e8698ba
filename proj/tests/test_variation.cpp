#include <prefemo/variation.hpp>

#include <gtest/gtest.h>

using namespace prefemo;

TEST(Sbx, MidpointDrawReproducesParents)
{
    const auto [c1, c2] = sbx_gene(0.2, 0.7, 0.5, 20.0);
    EXPECT_NEAR(c1, 0.2, 1e-15);
    EXPECT_NEAR(c2, 0.7, 1e-15);
    EXPECT_DOUBLE_EQ(sbx_beta(0.5, 15.0), 1.0);
}

TEST(Sbx, ChildrenKeepParentOrderAndMean)
{
    Rng rng(1);
    for (int t = 0; t < 1000; ++t) {
        const double p1 = rng.uniform(-5, 5), p2 = rng.uniform(-5, 5);
        const auto [c1, c2] = sbx_gene(p1, p2, rng.uniform(), 20.0);
        EXPECT_NEAR(c1 + c2, p1 + p2, 1e-9);
        if (p1 < p2) {
            EXPECT_LE(c1, c2);
        }
    }
}

TEST(Sbx, ZeroProbabilityLeavesParentsUnchanged)
{
    Rng rng(2);
    const auto bounds = BoxBounds::uniform(5, 0, 1);
    const Vec p1{0.1, 0.2, 0.3, 0.4, 0.5}, p2{0.9, 0.8, 0.7, 0.6, 0.5};
    for (int t = 0; t < 100; ++t) {
        const auto [c1, c2] = sbx_crossover(p1, p2, 20.0, 0.0, bounds, rng);
        EXPECT_EQ(c1, p1);
        EXPECT_EQ(c2, p2);
    }
}

TEST(Sbx, ChildrenStayInBounds)
{
    Rng rng(3);
    const BoxBounds bounds(Vec{-1, 0, 2}, Vec{1, 0.5, 3});
    for (int t = 0; t < 2000; ++t) {
        Vec p1(3), p2(3);
        for (std::size_t i = 0; i < 3; ++i) {
            p1[i] = rng.uniform(bounds.lower[i], bounds.upper[i]);
            p2[i] = rng.uniform(bounds.lower[i], bounds.upper[i]);
        }
        const auto [c1, c2] = sbx_crossover(p1, p2, 2.0, 1.0, bounds, rng);
        EXPECT_TRUE(bounds.contains(c1));
        EXPECT_TRUE(bounds.contains(c2));
    }
}

TEST(PolynomialMutation, MidpointDrawIsNoMove)
{
    EXPECT_EQ(polynomial_delta(0.5, 20.0), 0.0);
    EXPECT_LT(polynomial_delta(0.1, 20.0), 0.0);
    EXPECT_GT(polynomial_delta(0.9, 20.0), 0.0);
}

TEST(PolynomialMutation, ZeroRateLeavesVectorUnchanged)
{
    Rng rng(4);
    const auto bounds = BoxBounds::uniform(4, 0, 1);
    const Vec x{0.1, 0.5, 0.9, 1.0};
    for (int t = 0; t < 100; ++t)
        EXPECT_EQ(polynomial_mutation(x, 20.0, 0.0, bounds, rng), x);
}

TEST(PolynomialMutation, StaysInBoundsAtTheEdges)
{
    Rng rng(5);
    const auto bounds = BoxBounds::uniform(3, 0, 1);
    for (int t = 0; t < 2000; ++t) {
        const Vec y = polynomial_mutation(Vec{0.0, 1.0, rng.uniform()}, 5.0, 1.0, bounds, rng);
        EXPECT_TRUE(bounds.contains(y));
    }
}

TEST(Variation, SameSeedSameChildren)
{
    const auto bounds = BoxBounds::uniform(6, 0, 1);
    const Vec p1(6, 0.2), p2(6, 0.8);
    Rng a(9), b(9);
    for (int t = 0; t < 50; ++t) {
        EXPECT_EQ(sbx_crossover(p1, p2, 20.0, 0.9, bounds, a), sbx_crossover(p1, p2, 20.0, 0.9, bounds, b));
        EXPECT_EQ(polynomial_mutation(p1, 20.0, 0.5, bounds, a), polynomial_mutation(p1, 20.0, 0.5, bounds, b));
    }
}

TEST(VariationParams, DefaultMutationRateIsOneOverN)
{
    EXPECT_DOUBLE_EQ(VariationParams{}.mutation_rate(30), 1.0 / 30.0);
    VariationParams p;
    p.p_m = 0.25;
    EXPECT_DOUBLE_EQ(p.mutation_rate(30), 0.25);
}
