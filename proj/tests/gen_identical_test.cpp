#include <gtest/gtest.h>

#include <cmath>

#include "poa/generators.hpp"
#include "poa/identical.hpp"

using namespace poa;

namespace {
const LatencyFunction kLin = LatencyFunction::monomial(1);
}

TEST(IdenticalWeighted, SixteenResourceReferenceInstance) {
    // m=16, h=7, x=8, [x]=8/3 at (f = t, eps = 0.2); opt congestion 5
    auto inst = gen_identical_weighted(8.0, 16, 0.2, kLin, 7.0 / 16.0);
    EXPECT_TRUE(*inst.checks.equilibrium);
    EXPECT_NEAR(inst.checks.sim_sum_sigma, 512.0, 1e-9);   // 7*64 + 9*(8/3)^2
    EXPECT_NEAR(inst.checks.sim_sum_opt, 16.0 * 25.0, 1e-9);
    EXPECT_TRUE(inst.checks.closed_form_match);
    double r = inst.checks.sim_sum_sigma / inst.checks.sim_sum_opt;
    EXPECT_NEAR(r, gamma_identical(0.2, kLin, 8.0, 7.0 / 16.0), 1e-9);
    EXPECT_NEAR(r, 1.28, 1e-9);
    // red player deviating to a bracket-congested resource is exactly blocked
    EXPECT_NEAR(inst.checks.equilibrium_worst_ratio, 1.2, 1e-9);
}

TEST(IdenticalWeighted, LinearOptimumRatioConvergesToNineEighths) {
    auto inst = gen_identical_weighted(2.0, 300, 0.0, kLin);
    EXPECT_TRUE(*inst.checks.equilibrium);
    double r = inst.checks.sim_sum_sigma / inst.checks.sim_sum_opt;
    EXPECT_NEAR(r, 1.125, 0.005);
    EXPECT_NEAR(inst.closed_form_ratio.limit, 1.125, 1e-8);
}

TEST(IdenticalWeighted, DegenerateLambdaGivesRatioNearOne) {
    auto inst = gen_identical_weighted(2.0, 200, 0.0, kLin, 1e-9);
    EXPECT_TRUE(*inst.checks.equilibrium);
    double r = inst.checks.sim_sum_sigma / inst.checks.sim_sum_opt;
    EXPECT_NEAR(r, 1.0, 0.01);
}

TEST(IdenticalWeighted, ValidatesInputs) {
    EXPECT_THROW(gen_identical_weighted(2.0, 15, 0.0, kLin), std::invalid_argument);  // odd m
    EXPECT_THROW(gen_identical_weighted(2.0, 16, 0.0, kLin, 0.9), std::invalid_argument);
    EXPECT_THROW(gen_identical_weighted(0.0, 16, 0.0, kLin), std::invalid_argument);
}

TEST(IdenticalWeighted, QuadraticLatency) {
    auto f = LatencyFunction::monomial(2);
    auto inst = gen_identical_weighted(2.0, 100, 0.0, f);
    EXPECT_TRUE(*inst.checks.equilibrium);
    EXPECT_TRUE(inst.checks.closed_form_match);
    double r = inst.checks.sim_sum_sigma / inst.checks.sim_sum_opt;
    EXPECT_NEAR(r, corollary_poly_identical(2).value, 0.01);
}

TEST(IdenticalWalk, TrivialSingleType) {
    auto inst = gen_identical_unweighted_walk(1, {1}, kLin);
    EXPECT_NEAR(inst.closed_form_ratio.finite, 1.0, 1e-12);
    EXPECT_TRUE(*inst.checks.walk_valid);
}

TEST(IdenticalWalk, MaterializedSmallInstance) {
    // o = (1,1,2): |E_0| = 12, sizes 12, 6, 3, 2
    auto inst = gen_identical_unweighted_walk(3, {1, 1, 2}, kLin);
    const auto& g = inst.g();
    EXPECT_EQ(g.num_resources(), 12u);
    EXPECT_EQ(g.num_players(), static_cast<std::size_t>(6 + 3 + 2));
    EXPECT_TRUE(*inst.checks.walk_valid);       // selfish and cooperative
    EXPECT_TRUE(*inst.checks.walk_reproduces);
    EXPECT_LE(inst.checks.max_step_eq_dev, 1e-9);
    // simulated ratio equals the summation-formula value
    double sim = social_cost(g, inst.canonical_profile) /
                 social_cost(g, inst.optimal_profile);
    EXPECT_NEAR(sim, inst.closed_form_ratio.finite, 1e-9);
    EXPECT_TRUE(inst.checks.closed_form_match);
}

TEST(IdenticalWalk, AnalyticMatchesDirectSummationOracle) {
    // independent oracle: explicit size vectors, no Abel rearrangement
    auto oracle = [](int n, const std::vector<int>& o, const LatencyFunction& f) {
        std::vector<double> e(static_cast<std::size_t>(n) + 2);
        e[0] = 1.0;
        for (int i = 1; i <= n; ++i)
            e[i] = e[i - 1] * o[i - 1] / (o[i - 1] + 1.0);
        e[static_cast<std::size_t>(n) + 1] = 0.0;
        double num = 0.0, den = 0.0;
        for (int i = 1; i <= n; ++i) {
            num += (e[i] - e[i + 1]) * i * f.eval(i);
            den += (e[i - 1] - e[i]) * o[i - 1] * f.eval(o[i - 1]);
        }
        return num / den;
    };
    std::vector<int> o{1, 1, 2, 2, 3, 4, 4, 5};
    auto got = identical_walk_ratio_analytic(
        8, [&](std::int64_t i) { return static_cast<std::int64_t>(o[i - 1]); }, kLin);
    EXPECT_NEAR(got.ratio, oracle(8, o, kLin), 1e-12);
}

TEST(IdenticalWalk, BenchmarkSequencePrefixValues) {
    // frozen from two independent implementations of the ratio formula
    auto r3 = identical_walk_ratio_analytic(1000, benchmark_o_sequence, kLin);
    EXPECT_NEAR(r3.ratio, 3.811423, 1e-5);
    auto r4 = identical_walk_ratio_analytic(10000, benchmark_o_sequence, kLin);
    EXPECT_NEAR(r4.ratio, 3.908432, 1e-5);
    EXPECT_GT(r4.ratio, r3.ratio);
}

TEST(IdenticalWalk, ValidatesSequence) {
    EXPECT_THROW(gen_identical_unweighted_walk(2, {2, 2}, kLin), std::invalid_argument);
    EXPECT_THROW(gen_identical_unweighted_walk(3, {1, 2, 1}, kLin), std::invalid_argument);
    Caps caps;
    caps.max_e0 = 4;
    EXPECT_THROW(gen_identical_unweighted_walk(3, {1, 1, 2}, kLin, caps), cap_exceeded);
}
