#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "leodtn/env.hpp"

using namespace leodtn;

namespace {

const ContactPlan& reference_plan() {
    static ContactPlan plan =
        generate_contact_plan(ConstellationSpec{3, 8, 710.0, 98.5, 1}, 0.0, 8000.0,
                              VisibilityParams{});
    return plan;
}

DtnEnv make_env(bool force_max = false) {
    EnvConfig cfg;
    cfg.force_max_rates_on_reset = force_max;
    return DtnEnv(reference_plan(), 24, cfg, TrafficConfig{});
}

}  // namespace

TEST(Reward, PenaltyFactorAnchors) {
    EXPECT_DOUBLE_EQ(penalty_factor(0.3, 25.0, 0.3), 0.5);   // sigmoid midpoint
    EXPECT_NEAR(penalty_factor(0.0, 25.0, 0.3), 0.999447, 1e-6);
    EXPECT_LT(penalty_factor(1.0, 25.0, 0.3), 3e-8);
}

TEST(Reward, PenaltyFactorStrictlyDecreasing) {
    double prev = penalty_factor(0.0, 25.0, 0.3);
    for (double u = 0.05; u <= 1.0; u += 0.05) {
        double f = penalty_factor(u, 25.0, 0.3);
        EXPECT_LT(f, prev);
        EXPECT_GT(f, 0.0);
        EXPECT_LE(f, 1.0);
        prev = f;
    }
}

TEST(Reward, ComputeRewardCases) {
    DtnEnv env = make_env();
    StepMetrics m;
    m.node_utilization.assign(24, 0.0);

    m.delivered_bits = 800;
    m.cost_bits = 800;
    m.node_utilization[5] = 0.3;
    EXPECT_DOUBLE_EQ(env.compute_reward(m), 0.5);

    m.delivered_bits = 500;
    m.cost_bits = 1000;
    EXPECT_NEAR(env.compute_reward(m), 0.25, 1e-12);

    m.cost_bits = 0;
    m.delivered_bits = 0;
    EXPECT_DOUBLE_EQ(env.compute_reward(m), 0.0);  // idle network earns nothing
}

TEST(Observe, RatioAndClamping) {
    DtnEnv env = make_env();
    env.reset(1);
    StepMetrics m;
    m.node_utilization.assign(24, 0.0);
    m.cost_bits = 1000;
    m.total_link_capacity = 4000.0;
    EXPECT_DOUBLE_EQ(env.observe(m).link_occupancy, 0.25);

    m.total_link_capacity = 0.0;
    EXPECT_DOUBLE_EQ(env.observe(m).link_occupancy, 0.0);

    m.total_link_capacity = 500.0;  // boundary-spanning hops can exceed the step's capacity
    EXPECT_DOUBLE_EQ(env.observe(m).link_occupancy, 1.0);

    m.cost_bits = 0;
    m.mean_delivery_delay = 40.0;
    auto obs = env.observe(m);
    EXPECT_DOUBLE_EQ(obs.mean_delay, 40.0);
    EXPECT_EQ(obs.size(), 50u);
}

TEST(Reset, DeterministicAndLadderRates) {
    DtnEnv env = make_env();
    Observation a = env.reset(42);
    Observation b = env.reset(42);
    EXPECT_EQ(a.flatten(), b.flatten());

    EXPECT_DOUBLE_EQ(a.link_occupancy, 0.0);
    EXPECT_DOUBLE_EQ(a.mean_delay, 0.0);
    for (double u : a.utilizations) EXPECT_DOUBLE_EQ(u, 0.0);

    const std::set<double> ladder{500.0, 250.0, 125.0, 62.5, 31.25, 15.625, 7.8125};
    for (double r : a.rates) EXPECT_TRUE(ladder.count(r)) << r;

    // different seeds visit different rate vectors
    Observation c = env.reset(43);
    EXPECT_NE(a.rates, c.rates);
}

TEST(Reset, ForcedMaxRates) {
    DtnEnv env = make_env(true);
    Observation o = env.reset(7);
    for (double r : o.rates) EXPECT_DOUBLE_EQ(r, 500.0);
}

TEST(Reset, LadderRespectsNonDyadicFloor) {
    EnvConfig cfg;
    cfg.rate_min_bps = 100.0;  // 500/2^2 = 125 is the lowest admissible rung
    EXPECT_EQ(cfg.ladder_rungs(), 3);
    DtnEnv env(reference_plan(), 24, cfg, TrafficConfig{});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Observation o = env.reset(seed);
        for (double r : o.rates) EXPECT_GE(r, 100.0);
    }
}

TEST(ApplyAction, RateClampAtMaximum) {
    DtnEnv env = make_env(true);  // all rates at 500
    env.reset(1);
    env.apply_action(Action::double_rate);
    for (double r : env.engine().rates()) EXPECT_DOUBLE_EQ(r, 500.0);
}

TEST(ApplyAction, HalveThenDoubleRestores) {
    DtnEnv env = make_env(true);
    env.reset(1);
    env.apply_action(Action::halve_rate);
    env.apply_action(Action::halve_rate);  // 125
    for (double r : env.engine().rates()) EXPECT_DOUBLE_EQ(r, 125.0);
    env.apply_action(Action::halve_rate);
    env.apply_action(Action::double_rate);
    for (double r : env.engine().rates()) EXPECT_DOUBLE_EQ(r, 125.0);
}

TEST(ApplyAction, DoubleThenHalveIsIdentityBelowCap) {
    DtnEnv env = make_env();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        env.reset(seed);
        std::vector<double> before(env.engine().rates().begin(), env.engine().rates().end());
        env.apply_action(Action::double_rate);
        env.apply_action(Action::halve_rate);
        for (int i = 0; i < 24; ++i) {
            if (2.0 * before[i] <= 500.0)
                EXPECT_DOUBLE_EQ(env.engine().rates()[i], before[i]);
        }
    }
}

TEST(ApplyAction, RateFloorAtMinimum) {
    DtnEnv env = make_env(true);
    env.reset(1);
    for (int i = 0; i < 12; ++i) env.apply_action(Action::halve_rate);
    for (double r : env.engine().rates()) EXPECT_DOUBLE_EQ(r, 7.8125);  // 500 / 2^6
}

TEST(ApplyAction, DropAllEmptiesEveryBuffer) {
    DtnEnv env = make_env();
    env.reset(3);
    auto r1 = env.step(Action::no_op);  // accumulate some traffic
    (void)r1;
    env.apply_action(Action::drop_all);
    for (int i = 0; i < 24; ++i) EXPECT_EQ(env.engine().node(i).buffered_bits, 0);
}

TEST(ApplyAction, InvalidActionRejected) {
    DtnEnv env = make_env();
    env.reset(1);
    EXPECT_THROW(env.apply_action(static_cast<Action>(0)), std::invalid_argument);
    EXPECT_THROW(env.apply_action(static_cast<Action>(7)), std::invalid_argument);
    EXPECT_THROW(action_from_index(6), std::invalid_argument);
}

TEST(EpisodeLifecycle, DoneAfterConfiguredSteps) {
    EnvConfig cfg;
    cfg.steps_per_episode = 5;  // short episode, same semantics
    DtnEnv env(reference_plan(), 24, cfg, TrafficConfig{});
    env.reset(9);
    for (int s = 0; s < 4; ++s) EXPECT_FALSE(env.step(Action::no_op).done);
    EXPECT_TRUE(env.step(Action::no_op).done);
    EXPECT_THROW(env.step(Action::no_op), std::logic_error);
}

TEST(EpisodeLifecycle, NoOpKeepsRatesConstant) {
    EnvConfig cfg;
    cfg.steps_per_episode = 10;
    DtnEnv env(reference_plan(), 24, cfg, TrafficConfig{});
    Observation o0 = env.reset(11);
    std::vector<double> initial = o0.rates;
    for (int s = 0; s < 10; ++s) {
        auto r = env.step(Action::no_op);
        EXPECT_EQ(r.obs.rates, initial);
    }
}

TEST(EpisodeLifecycle, ObservationBoundsHold) {
    EnvConfig cfg;
    cfg.steps_per_episode = 30;
    DtnEnv env(reference_plan(), 24, cfg, TrafficConfig{});
    env.reset(13);
    RngStream rng(77);
    for (int s = 0; s < 30; ++s) {
        auto r = env.step(static_cast<Action>(rng.uniform_int(1, 6)));
        EXPECT_EQ(r.obs.size(), 50u);
        EXPECT_GE(r.obs.link_occupancy, 0.0);
        EXPECT_LE(r.obs.link_occupancy, 1.0);
        EXPECT_GE(r.obs.mean_delay, 0.0);
        for (double u : r.obs.utilizations) {
            EXPECT_GE(u, 0.0);
            EXPECT_LE(u, 1.0);
        }
        for (double rate : r.obs.rates) {
            EXPECT_GE(rate, 7.8125);
            EXPECT_LE(rate, 500.0);
        }
        EXPECT_GE(r.reward, 0.0);
        EXPECT_LE(r.reward, 1.0);
    }
}

TEST(EpisodeLifecycle, SeededReplayIsIdentical) {
    EnvConfig cfg;
    cfg.steps_per_episode = 25;
    auto run = [&] {
        DtnEnv env(reference_plan(), 24, cfg, TrafficConfig{});
        env.reset(21);
        RngStream rng(55);
        std::vector<double> rewards;
        for (int s = 0; s < 25; ++s)
            rewards.push_back(env.step(static_cast<Action>(rng.uniform_int(1, 6))).reward);
        return rewards;
    };
    EXPECT_EQ(run(), run());
}
