#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "poa/bounds.hpp"
#include "poa/io.hpp"

using namespace poa;

TEST(Io, LatencyRoundTrip) {
    auto f = LatencyFunction::polynomial({1.0, 0.0, 2.5});
    auto back = latency_from_json(to_json(f));
    EXPECT_TRUE(f == back);

    register_custom_latency("io_exp", {[](double x) { return std::exp(x); }, {}, true});
    auto g = LatencyFunction::custom("io_exp").scale_ordinate(2.0).scale_abscissa(0.5);
    auto gb = latency_from_json(to_json(g));
    EXPECT_TRUE(g == gb);
    EXPECT_NEAR(g.eval(1.3), gb.eval(1.3), 1e-15);
}

TEST(Io, GameAndProfileRoundTripPreservesCosts) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        CongestionGame g;
        int m = 1 + static_cast<int>(rng() % 4);
        for (int e = 0; e < m; ++e)
            g.add_resource(LatencyFunction::polynomial(
                {1.0 + (rng() % 3), static_cast<double>(rng() % 2)}));
        int n = 2 + static_cast<int>(rng() % 3);
        for (int i = 0; i < n; ++i) {
            std::vector<std::vector<ResourceId>> strats;
            int ns = 1 + static_cast<int>(rng() % 3);
            for (int s = 0; s < ns; ++s) {
                std::vector<ResourceId> strat;
                int sz = 1 + static_cast<int>(rng() % m);
                for (int t = 0; t < sz; ++t)
                    strat.push_back(static_cast<ResourceId>(rng() % m));
                strats.push_back(strat);
            }
            g.add_player(1.0 + (rng() % 2), strats);
        }
        auto j = to_json(g);
        auto back = game_from_json(j);
        ASSERT_EQ(back.num_players(), g.num_players());
        ASSERT_EQ(back.num_resources(), g.num_resources());
        StrategyProfile p(g);
        for (PlayerId i = 0; i < g.num_players(); ++i)
            if (rng() % 5) p.set_choice(i, static_cast<std::int32_t>(rng() % g.strategy_count(i)));
        auto pj = to_json(p);
        auto pback = profile_from_json(back, pj);
        EXPECT_NEAR(social_cost(g, p), social_cost(back, pback), 1e-12);
    }
}

TEST(Io, WitnessRoundTrip) {
    auto w = unweighted_closed_form(MetricKind::poa, 0.0, 2).witness;
    auto back = witness_from_json(to_json(w));
    EXPECT_EQ(back.case2, w.case2);
    EXPECT_DOUBLE_EQ(back.k1, w.k1);
    EXPECT_DOUBLE_EQ(back.k2, w.k2);
    EXPECT_NEAR(witness_value(back), witness_value(w), 1e-15);
}

TEST(Io, VerifyRederivesManifestChecks) {
    auto inst = gen_unweighted_multipartite(
        2, unweighted_closed_form(MetricKind::poa, 0.0, 1).witness, 0.0);
    auto game_json = to_json(inst.g());
    auto manifest = manifest_to_json(inst);
    auto game = game_from_json(game_json);
    EXPECT_TRUE(verify_manifest(game, manifest).empty());

    // tampered closed form must be caught
    manifest["closed_form"]["sum_sigma"] = 999.0;
    EXPECT_FALSE(verify_manifest(game, manifest).empty());
}

TEST(Io, VerifyWalkManifests) {
    auto inst = gen_unweighted_walk_multipartite(
        2, unweighted_closed_form(MetricKind::cr_selfish, 0.0, 1).witness, 0.0,
        WalkMode::selfish);
    auto game = game_from_json(to_json(inst.g()));
    auto manifest = manifest_to_json(inst);
    EXPECT_TRUE(verify_manifest(game, manifest).empty());

    // corrupting the prescription breaks validity or reproduction
    manifest["prescribed_choices"][0] = 1;
    EXPECT_FALSE(verify_manifest(game, manifest).empty());
}

TEST(Io, CapsEnvOverride) {
    setenv("POA_LAB_CAPS", "profiles=123,kcap=77,ocap=9,xmax=2e4", 1);
    auto c = poa::Caps::from_env();
    EXPECT_EQ(c.max_profiles, 123);
    EXPECT_EQ(c.k_cap, 77);
    EXPECT_EQ(c.o_cap, 9);
    EXPECT_DOUBLE_EQ(c.x_max, 2e4);
    setenv("POA_LAB_CAPS", "bogus=1", 1);
    EXPECT_THROW(poa::Caps::from_env(), std::invalid_argument);
    unsetenv("POA_LAB_CAPS");
    EXPECT_EQ(poa::Caps::from_env().k_cap, 10000);
}

TEST(Io, TraceSerialization) {
    CongestionGame g;
    g.add_resource(LatencyFunction::monomial(1));
    g.add_resource(LatencyFunction::monomial(1));
    g.add_player(1.0, {{0u}, {1u}});
    g.add_player(1.0, {{0u}, {1u}});
    auto tr = run_walk(g, {1, 0}, WalkMode::selfish, 0.0);
    auto j = to_json(tr);
    EXPECT_EQ(j["order"][0], 1u);
    EXPECT_EQ(j["steps"].size(), 2u);
    EXPECT_EQ(j["mode"], "selfish");
}
