#include <prefemo/core.hpp>
#include <prefemo/rng.hpp>

#include <gtest/gtest.h>

#include <algorithm>

using namespace prefemo;

namespace {

std::vector<ObjectiveVector> random_points(Rng& rng, std::size_t n, std::size_t m, int grid = 0)
{
    std::vector<ObjectiveVector> pts(n, ObjectiveVector(m));
    for (auto& p : pts)
        for (double& v : p)
            v = grid > 0 ? static_cast<double>(rng.index(static_cast<std::size_t>(grid))) : rng.uniform();
    return pts;
}

// O(N^2 m) oracle: a point's front is one more than the deepest front of
// anything dominating it.
std::vector<std::size_t> brute_force_ranks(const std::vector<ObjectiveVector>& pts)
{
    const std::size_t n = pts.size();
    std::vector<std::size_t> rank(n, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                bool dom = true, strict = false;
                for (std::size_t k = 0; k < pts[i].size(); ++k) {
                    dom = dom && pts[j][k] <= pts[i][k];
                    strict = strict || pts[j][k] < pts[i][k];
                }
                if (dom && strict && rank[i] < rank[j] + 1) {
                    rank[i] = rank[j] + 1;
                    changed = true;
                }
            }
    }
    return rank;
}

std::vector<std::size_t> ranks_of(const Fronts& fronts, std::size_t n)
{
    std::vector<std::size_t> rank(n, n + 1);
    for (std::size_t f = 0; f < fronts.size(); ++f)
        for (std::size_t idx : fronts[f])
            rank[idx] = f;
    return rank;
}

}  // namespace

TEST(ParetoCompare, WorkedExamples)
{
    EXPECT_EQ(pareto_compare(Vec{1, 2}, Vec{2, 3}), Dominance::ADominates);
    EXPECT_EQ(pareto_compare(Vec{2, 3}, Vec{1, 2}), Dominance::BDominates);
    EXPECT_EQ(pareto_compare(Vec{1, 3}, Vec{3, 1}), Dominance::Incomparable);
    EXPECT_EQ(pareto_compare(Vec{1, 2}, Vec{1, 2}), Dominance::Equal);
}

TEST(ParetoCompare, WeakImprovementInOneObjectiveDominates)
{
    EXPECT_EQ(pareto_compare(Vec{1, 2}, Vec{1, 3}), Dominance::ADominates);
}

TEST(ParetoCompare, DimensionMismatchIsContractViolation)
{
    EXPECT_THROW(pareto_compare(Vec{1, 2}, Vec{1, 2, 3}), ContractViolation);
}

TEST(ParetoCompare, SymmetricUnderSwap)
{
    Rng rng(11);
    for (int t = 0; t < 500; ++t) {
        const auto pts = random_points(rng, 2, 3, 3);
        const auto ab = pareto_compare(pts[0], pts[1]);
        const auto ba = pareto_compare(pts[1], pts[0]);
        switch (ab) {
        case Dominance::ADominates:
            EXPECT_EQ(ba, Dominance::BDominates);
            break;
        case Dominance::BDominates:
            EXPECT_EQ(ba, Dominance::ADominates);
            break;
        default:
            EXPECT_EQ(ba, ab);
        }
    }
}

TEST(ParetoCompare, StrictPartialOrderOnRandomTriples)
{
    Rng rng(12);
    for (int t = 0; t < 3000; ++t) {
        const auto p = random_points(rng, 3, 3, 3);
        EXPECT_FALSE(dominates(p[0], p[0]));
        if (dominates(p[0], p[1])) {
            EXPECT_FALSE(dominates(p[1], p[0]));
        }
        if (dominates(p[0], p[1]) && dominates(p[1], p[2])) {
            EXPECT_TRUE(dominates(p[0], p[2]));
        }
    }
}

TEST(FastNondominatedSort, WorkedExample)
{
    const std::vector<ObjectiveVector> pts{{1, 2}, {2, 1}, {3, 3}};
    const Fronts expected{{0, 1}, {2}};
    EXPECT_EQ(fast_nondominated_sort(pts), expected);
}

TEST(FastNondominatedSort, SingleSolution)
{
    const std::vector<ObjectiveVector> pts{{0.3, 0.7}};
    EXPECT_EQ(fast_nondominated_sort(pts), (Fronts{{0}}));
}

TEST(FastNondominatedSort, EqualVectorsShareAFront)
{
    const std::vector<ObjectiveVector> pts{{1, 1}, {1, 1}, {2, 2}};
    EXPECT_EQ(fast_nondominated_sort(pts), (Fronts{{0, 1}, {2}}));
}

TEST(FastNondominatedSort, TwentyRandomPointsMatchOracle)
{
    Rng rng(5);
    const auto pts = random_points(rng, 20, 2);
    EXPECT_EQ(ranks_of(fast_nondominated_sort(pts), pts.size()), brute_force_ranks(pts));
}

TEST(FastNondominatedSort, MatchesOracleOnRandomPopulations)
{
    Rng rng(6);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + rng.index(50);
        const std::size_t m = 2 + rng.index(4);
        const auto pts = random_points(rng, n, m, t % 2 ? 4 : 0);
        const auto fronts = fast_nondominated_sort(pts);
        ASSERT_EQ(ranks_of(fronts, n), brute_force_ranks(pts)) << "population " << t;
        std::size_t total = 0;
        for (const auto& f : fronts) {
            total += f.size();
            EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
        }
        EXPECT_EQ(total, n);
    }
}

TEST(CrowdingDistance, WorkedExample)
{
    const std::vector<ObjectiveVector> front{{0, 2}, {1, 1}, {2, 0}};
    const Vec d = crowding_distance(front);
    EXPECT_TRUE(std::isinf(d[0]));
    EXPECT_DOUBLE_EQ(d[1], 2.0);
    EXPECT_TRUE(std::isinf(d[2]));
}

TEST(CrowdingDistance, TwoOrFewerMembersAreAllInfinite)
{
    for (const auto& front : {std::vector<ObjectiveVector>{{0.5, 0.5}}, std::vector<ObjectiveVector>{{0, 1}, {1, 0}}})
        for (double d : crowding_distance(front))
            EXPECT_TRUE(std::isinf(d));
}

TEST(CrowdingDistance, DegenerateObjectiveContributesNothing)
{
    const std::vector<ObjectiveVector> front{{0, 5}, {1, 5}, {3, 5}, {4, 5}};
    const Vec d = crowding_distance(front);
    EXPECT_DOUBLE_EQ(d[1], 3.0 / 4.0);
    EXPECT_DOUBLE_EQ(d[2], 3.0 / 4.0);
}

TEST(CrowdingDistance, NonNegative)
{
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        const auto pts = random_points(rng, 12, 3);
        for (double d : crowding_distance(pts))
            EXPECT_GE(d, 0.0);
    }
}

TEST(CrowdingDistance, PermutationInvariant)
{
    Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        // grid values force ties and duplicates
        auto pts = random_points(rng, 2 + rng.index(15), 2 + rng.index(3), t % 2 ? 5 : 0);
        const Vec base = crowding_distance(pts);
        std::vector<std::size_t> perm(pts.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        rng.shuffle(perm.begin(), perm.end());
        std::vector<ObjectiveVector> shuffled;
        for (std::size_t k : perm)
            shuffled.push_back(pts[k]);
        const Vec d = crowding_distance(shuffled);
        for (std::size_t k = 0; k < perm.size(); ++k) {
            if (std::isinf(base[perm[k]]))
                EXPECT_TRUE(std::isinf(d[k]));
            else
                EXPECT_NEAR(d[k], base[perm[k]], 1e-12);
        }
    }
}

TEST(Normalize, WorkedExamples)
{
    const Vec ideal{1, 2}, nadir{3, 6};
    EXPECT_EQ(normalize(ideal, ideal, nadir), (Vec{0, 0}));
    EXPECT_EQ(normalize(nadir, ideal, nadir), (Vec{1, 1}));
    EXPECT_EQ(normalize(Vec{2, 4}, ideal, nadir), (Vec{0.5, 0.5}));
}

TEST(Normalize, DegenerateDimensionMapsToZero)
{
    EXPECT_EQ(normalize(Vec{5, 0.5}, Vec{5, 0}, Vec{5, 1}), (Vec{0, 0.5}));
}

TEST(Normalize, IdempotentOnUnitBox)
{
    Rng rng(10);
    const Vec zero{0, 0, 0}, one{1, 1, 1};
    for (int t = 0; t < 100; ++t) {
        const Vec f = random_points(rng, 1, 3).front();
        const Vec once = normalize(f, zero, one);
        EXPECT_EQ(normalize(once, zero, one), once);
    }
}

TEST(BoxBounds, RejectsEmptyInterval)
{
    EXPECT_THROW(BoxBounds(Vec{0, 1}, Vec{1, 1}), ContractViolation);
    EXPECT_TRUE(BoxBounds::uniform(3, 0, 1).contains(Vec{0, 0.5, 1}));
    EXPECT_FALSE(BoxBounds::uniform(3, 0, 1).contains(Vec{0, 1.5, 1}));
}

TEST(Population, IdealBelowEveryMemberAndNadirAboveIdeal)
{
    Rng rng(13);
    Population pop;
    for (const auto& f : random_points(rng, 30, 3))
        pop.members.push_back({Vec{}, f, pop.members.size()});
    pop.refresh_nadir();
    for (const auto& s : pop.members)
        for (std::size_t i = 0; i < 3; ++i)
            EXPECT_LE(pop.ideal[i], s.f[i]);
    for (std::size_t i = 0; i < 3; ++i)
        EXPECT_GE(pop.nadir_est[i], pop.ideal[i]);
}

TEST(Population, IdealNeverIncreases)
{
    Population pop;
    pop.observe(Vec{0.2, 0.8});
    pop.observe(Vec{0.5, 0.1});
    pop.observe(Vec{0.9, 0.9});
    EXPECT_EQ(pop.ideal, (Vec{0.2, 0.1}));
}

TEST(Rng, SameSeedSameStream)
{
    Rng a(42), b(42);
    for (int k = 0; k < 100; ++k)
        EXPECT_EQ(a.next_u64(), b.next_u64());
}
