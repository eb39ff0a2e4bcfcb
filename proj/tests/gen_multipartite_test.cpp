#include <gtest/gtest.h>

#include <cmath>

#include "poa/bounds.hpp"
#include "poa/dynamics.hpp"
#include "poa/generators.hpp"

using namespace poa;

namespace {
const LatencyFunction kLin = LatencyFunction::monomial(1);

WitnessTuple poa_d1_witness() {  // (k1,k2,o1,o2) = (2,1,1,1)
    return unweighted_closed_form(MetricKind::poa, 0.0, 1).witness;
}
}  // namespace

TEST(Multipartite, HandComputedSumsS2) {
    auto inst = gen_unweighted_multipartite(2, poa_d1_witness(), 0.0);
    // identical to the weighted-tree hand computation at o = 1
    EXPECT_NEAR(inst.cf_sum_sigma, 40.0 / 3.0, 1e-12);
    EXPECT_NEAR(inst.cf_sum_opt, 28.0 / 3.0, 1e-12);
    EXPECT_TRUE(inst.checks.closed_form_match);
    EXPECT_TRUE(*inst.checks.equilibrium);
    EXPECT_NEAR(inst.closed_form_ratio.limit, 2.5, 1e-12);
}

TEST(Multipartite, EquilibriumExactAndConvergentInS) {
    double prev = 0.0;
    for (int s = 1; s <= 8; ++s) {
        auto inst = gen_unweighted_multipartite(s, poa_d1_witness(), 0.0);
        EXPECT_TRUE(*inst.checks.equilibrium) << "s=" << s;
        EXPECT_NEAR(inst.checks.equilibrium_worst_ratio, 1.0, 1e-9);
        EXPECT_TRUE(inst.checks.closed_form_match);
        double r = social_cost(inst.g(), inst.canonical_profile) /
                   social_cost(inst.g(), inst.optimal_profile);
        EXPECT_GE(r, prev - 1e-9);  // monotone convergence
        prev = r;
    }
    EXPECT_NEAR(prev, 2.5, 0.05);  // within 2% at s = 8
}

TEST(Multipartite, TinyInstanceEnumerationOracle) {
    // sigma* is the reference profile of the asymptotic family, not the true
    // optimum at tiny s: the level-2s boundary term makes it cost 8 at s = 1
    // while the enumerated optimum is SUM(sigma) = 6
    auto inst = gen_unweighted_multipartite(1, poa_d1_witness(), 0.0);
    auto opt = brute_force_optimum(inst.g());
    EXPECT_NEAR(opt.value, 6.0, 1e-12);
    EXPECT_NEAR(social_cost(inst.g(), inst.canonical_profile), 6.0, 1e-12);
    EXPECT_NEAR(social_cost(inst.g(), inst.optimal_profile), 8.0, 1e-12);
    EXPECT_LE(opt.value, social_cost(inst.g(), inst.optimal_profile));
}

TEST(Multipartite, LevelSizeCombinatorics) {
    // witness (3,2,1,1) would be k1=3: use crc d=1 integer bracket (3,2)
    auto w = unweighted_closed_form(MetricKind::cr_cooperative, 0.0, 1).witness;
    ASSERT_TRUE(w.case2);
    auto inst = gen_unweighted_multipartite(2, w, 0.0);
    // levels: o1^{s-i} k1^{i-1} o2^s then o2^{2s-i} k2^{i-s-1} k1^s
    // s=2, k1=3, k2=2: N = (1, 3, 9, 18); resources 31
    EXPECT_EQ(inst.g().num_resources(), 31u);
    // players: out-degrees 3,3,2,2 per level node
    EXPECT_EQ(inst.g().num_players(), static_cast<std::size_t>(1 * 3 + 3 * 3 + 9 * 2 + 18 * 2));
    EXPECT_TRUE(*inst.checks.equilibrium);
    EXPECT_TRUE(inst.checks.closed_form_match);
}

TEST(Multipartite, GeneralInOutDegrees) {
    // synthetic witness with o1 = 2, o2 = 1: beta signs per Case 2 for PoA at
    // eps = 0 with f = t: beta(k2=1,o2=1) = 1 > 0, beta(k1=4,o1=2) = -16+2*5 = -6 < 0
    auto w = WitnessTuple::case_2(4.0, 1.0, 2.0, 1.0, kLin, kLin, 0.0, 0.0);
    refresh_case2_alphas(Mode::unweighted, {MetricKind::poa, 0.0}, w);
    auto inst = gen_unweighted_multipartite(2, w, 0.0);
    EXPECT_TRUE(*inst.checks.equilibrium);
    EXPECT_TRUE(inst.checks.closed_form_match);
    // in-degree o1 = 2 at level 2: every level-2 node hosts 2 players in sigma*
    auto& opt = inst.optimal_profile;
    // level-1 size = o1^{s-1} o2^s = 2; level-2 base = 2, size = k1 o2^s / ... = 4
    for (ResourceId e = 2; e < 6; ++e) EXPECT_DOUBLE_EQ(opt.congestion(e), 2.0);
}

TEST(MultipartiteWalk, SelfishValidTightAndConvergent) {
    auto w = unweighted_closed_form(MetricKind::cr_selfish, 0.0, 1).witness;  // Case 1, k=2
    double prev = 0.0;
    for (int s = 1; s <= 8; ++s) {
        auto inst = gen_unweighted_walk_multipartite(s, w, 0.0, WalkMode::selfish);
        EXPECT_TRUE(*inst.checks.walk_valid) << "s=" << s;
        EXPECT_TRUE(*inst.checks.walk_reproduces);
        EXPECT_LE(inst.checks.max_step_eq_dev, 1e-9);
        EXPECT_TRUE(inst.checks.closed_form_match);
        double r = social_cost(inst.g(), inst.canonical_profile) /
                   social_cost(inst.g(), inst.optimal_profile);
        EXPECT_GE(r, prev - 1e-9);
        prev = r;
    }
    // Case-1 beta=0 witness: exact ratio is 8s/(2s + 7), approaching 4 like 1/s
    EXPECT_NEAR(prev, 64.0 / 23.0, 1e-9);
    EXPECT_NEAR(
        gen_unweighted_walk_multipartite(2, w, 0.0, WalkMode::selfish).closed_form_ratio.limit,
        4.0, 1e-9);
}

TEST(MultipartiteWalk, CooperativeD2ApproachesTableValue) {
    auto w = unweighted_closed_form(MetricKind::cr_cooperative, 0.0, 2).witness;  // (4,3)
    auto inst = gen_unweighted_walk_multipartite(2, w, 0.0, WalkMode::cooperative);
    EXPECT_TRUE(*inst.checks.walk_valid);
    EXPECT_TRUE(*inst.checks.walk_reproduces);
    EXPECT_LE(inst.checks.max_step_eq_dev, 1e-9);
    EXPECT_TRUE(inst.checks.closed_form_match);
    EXPECT_NEAR(inst.closed_form_ratio.limit, 55.46, 0.01);
}

TEST(MultipartiteWalk, AIndependentOfIncomingEdge) {
    // recompute A_v through every parent; the group construction makes the
    // products identical, so the comparison is exact
    auto w = WitnessTuple::case_2(4.0, 1.0, 2.0, 1.0, kLin, kLin, 0.0, 0.0);
    refresh_case2_alphas(Mode::unweighted, {MetricKind::poa, 0.0}, w);
    auto inst = gen_unweighted_walk_multipartite(2, w, 0.0, WalkMode::selfish);
    const auto& g = inst.g();
    // collect per-head parents from the player list (first = tail, second = head)
    std::map<ResourceId, std::vector<ResourceId>> parents;
    for (PlayerId i = 0; i < g.num_players(); ++i) {
        if (g.strategy_count(i) < 2) continue;
        parents[g.strategy(i, 1)[0]].push_back(g.strategy(i, 0)[0]);
    }
    int multi = 0;
    for (auto& [head, tails] : parents) {
        if (tails.size() < 2) continue;
        ++multi;
        // A_u equal across parents <=> their latencies are bitwise identical
        for (std::size_t t = 1; t < tails.size(); ++t)
            EXPECT_TRUE(g.latency(tails[t]) == g.latency(tails[0]));
    }
    EXPECT_GT(multi, 0);
}

TEST(MultipartiteWalk, EpsilonSlackRealizedExactly) {
    // at eps > 0 every two-strategy step costs exactly (1+eps) times the minimum
    double eps = 0.25;
    auto w = unweighted_closed_form(MetricKind::cr_selfish, eps, 1).witness;
    auto inst = gen_unweighted_walk_multipartite(3, w, eps, WalkMode::selfish);
    EXPECT_TRUE(*inst.checks.walk_valid);
    EXPECT_TRUE(*inst.checks.walk_reproduces);
    EXPECT_LE(inst.checks.max_step_eq_dev, 1e-9);
    EXPECT_TRUE(inst.checks.closed_form_match);
}

TEST(MultipartiteWalk, RejectsNonIntegerWitness) {
    auto w = WitnessTuple::case_1(2.5, 1.0, kLin);
    EXPECT_THROW(gen_unweighted_walk_multipartite(2, w, 0.0, WalkMode::selfish),
                 std::invalid_argument);
}
