#include "vrrw/walk.hpp"

#include <gtest/gtest.h>

#include <random>

#include "vrrw/rng.hpp"

using namespace vrrw;

namespace {

// Deterministic variate source for tie-breaking tests.
struct ScriptedRng {
    std::vector<double> variates;
    std::size_t next = 0;
    double next_unit() { return variates.at(next++); }
};

Environment linear_env() { return Environment(WeightSpec::linear()); }
Environment const_env() { return Environment(WeightSpec::power(0)); }

}  // namespace

TEST(WalkState, InitExamples) {
    WalkState s = init_walk(linear_env());
    EXPECT_EQ(s.position, 0);
    EXPECT_EQ(s.step_count, 0u);
    EXPECT_EQ(s.local_time(0), 1u);
    EXPECT_EQ(s.local_time(5), 0u);
    EXPECT_EQ(s.local_time(-1), 0u);
    EXPECT_EQ(s.min_site(), 0);
    EXPECT_EQ(s.max_site(), 0);
}

TEST(StepProbability, InitialStateIsHalf) {
    WalkState s = init_walk(linear_env());
    EXPECT_DOUBLE_EQ(step_probability_right(s, linear_env()), 0.5);
    EXPECT_DOUBLE_EQ(step_probability_right(s, const_env()), 0.5);
}

TEST(StepProbability, LinearAfterOneRightStep) {
    // path (0,1): at site 1, Z(0)=1 -> w=2, Z(2)=0 -> w=1, so p_right = 1/3
    Environment env = linear_env();
    WalkState s = init_walk(env);
    ScriptedRng rng{{0.0}};
    step(s, env, rng);
    EXPECT_EQ(s.position, 1);
    EXPECT_DOUBLE_EQ(step_probability_right(s, env), 1.0 / 3.0);
}

TEST(StepProbability, ConstantWeightsAlwaysHalf) {
    Environment env = const_env();
    WalkState s = init_walk(env);
    RngStream rng(5, 0);
    for (int i = 0; i < 200; ++i) {
        ASSERT_DOUBLE_EQ(step_probability_right(s, env), 0.5);
        step(s, env, rng);
    }
}

TEST(Step, TieBreakingConvention) {
    // right iff u < p_right; u == p_right goes left
    Environment env = const_env();
    {
        WalkState s = init_walk(env);
        ScriptedRng rng{{0.49}};
        step(s, env, rng);
        EXPECT_EQ(s.position, 1);
    }
    {
        WalkState s = init_walk(env);
        ScriptedRng rng{{0.5}};
        step(s, env, rng);
        EXPECT_EQ(s.position, -1);
    }
}

TEST(Step, ConservationAndIntervalRange) {
    std::mt19937_64 pick(11);
    for (double alpha : {0.0, 0.3, 1.0, 2.0}) {
        Environment env(WeightSpec::power(alpha));
        WalkState s = init_walk(env);
        RngStream rng(123, static_cast<std::uint64_t>(alpha * 10));
        for (int n = 1; n <= 2000; ++n) {
            step(s, env, rng);
            std::uint64_t total = 0;
            for (std::int64_t y = s.min_site(); y <= s.max_site(); ++y) {
                std::uint64_t z = s.local_time(y);
                ASSERT_GE(z, 1u) << "gap in visited interval at " << y;
                total += z;
            }
            ASSERT_EQ(total, s.step_count + 1);
            ASSERT_GE(s.position, s.min_site());
            ASSERT_LE(s.position, s.max_site());
            ASSERT_LE(s.min_site(), 0);
            ASSERT_GE(s.max_site(), 0);
        }
    }
    (void)pick;
}

TEST(Step, LocalTimeCountsPathIndices) {
    // path (0,1,0): Z(0)=2
    Environment env = linear_env();
    WalkState s = init_walk(env);
    ScriptedRng rng{{0.0, 0.99}};
    step(s, env, rng);
    step(s, env, rng);
    EXPECT_EQ(s.position, 0);
    EXPECT_EQ(s.local_time(0), 2u);
    EXPECT_EQ(s.local_time(1), 1u);
}

TEST(Step, DeterministicTrajectories) {
    Environment env(WeightSpec::power(0.3));
    std::vector<std::int64_t> a, b;
    for (auto* out : {&a, &b}) {
        WalkState s = init_walk(env);
        RngStream rng(777, 4);
        for (int i = 0; i < 5000; ++i) {
            step(s, env, rng);
            out->push_back(s.position);
        }
    }
    EXPECT_EQ(a, b);
}

TEST(StoppingClock, HitAndVisitSemantics) {
    Environment env = const_env();
    WalkState s = init_walk(env);
    StoppingClock clock;
    std::size_t t0 = clock.watch_visits(0, 1);  // T_0(1) = 0 by Z_0(0)=1
    std::size_t t02 = clock.watch_visits(0, 2);
    clock.arm(s);
    ASSERT_TRUE(clock.fired_at(t0).has_value());
    EXPECT_EQ(*clock.fired_at(t0), 0u);
    EXPECT_FALSE(clock.fired_at(t02).has_value());

    // drive the walk back to 0
    ScriptedRng rng{{0.0, 0.99}};
    step(s, env, rng, &clock);
    step(s, env, rng, &clock);
    ASSERT_TRUE(clock.fired_at(t02).has_value());
    EXPECT_EQ(*clock.fired_at(t02), 2u);
}

TEST(StoppingClock, MonotoneFiringInThreshold) {
    Environment env = const_env();
    WalkState s = init_walk(env);
    StoppingClock clock;
    std::size_t w2 = clock.watch_visits(0, 2);
    std::size_t w3 = clock.watch_visits(0, 3);
    RngStream rng(9, 9);
    run_until(s, env, rng, clock, 100000,
              [&](const StoppingClock& c) { return c.fired_at(w3).has_value(); });
    ASSERT_TRUE(clock.fired_at(w2) && clock.fired_at(w3));
    EXPECT_LT(*clock.fired_at(w2), *clock.fired_at(w3));
}

TEST(RunUntil, FirstStepRace) {
    // watch T_1 and T_{-1} with constant weights: exactly one fires at step 1
    Environment env = const_env();
    for (std::uint64_t stream = 0; stream < 20; ++stream) {
        WalkState s = init_walk(env);
        StoppingClock clock;
        std::size_t right = clock.watch_hit(1);
        std::size_t left = clock.watch_hit(-1);
        RngStream rng(3, stream);
        RunOutcome out = run_until(s, env, rng, clock, 1000);
        ASSERT_EQ(out, RunOutcome::Fired);
        EXPECT_EQ(s.step_count, 1u);
        EXPECT_NE(clock.fired_at(right).has_value(), clock.fired_at(left).has_value());
    }
}

TEST(RunUntil, CapZeroRejected) {
    Environment env = const_env();
    WalkState s = init_walk(env);
    StoppingClock clock;
    clock.watch_hit(1);
    RngStream rng(1, 1);
    EXPECT_THROW(run_until(s, env, rng, clock, 0), std::invalid_argument);
}

TEST(RunUntil, FirstStepAnalysisEnsemble) {
    // {T_0(2) < T_{-1}} happens iff the first step goes right: probability 1/2
    Environment env = const_env();
    int wins = 0;
    const int trials = 20000;
    for (int r = 0; r < trials; ++r) {
        WalkState s = init_walk(env);
        StoppingClock clock;
        std::size_t w = clock.watch_visits(0, 2);
        std::size_t l = clock.watch_hit(-1);
        RngStream rng(2024, static_cast<std::uint64_t>(r));
        RunOutcome out = run_until(s, env, rng, clock, 100000);
        if (out == RunOutcome::Fired && clock.fired_at(w) && !clock.fired_at(l)) ++wins;
    }
    double p = static_cast<double>(wins) / trials;
    EXPECT_NEAR(p, 0.5, 0.015);
}

TEST(LocalTimes, GrowsBothDirections) {
    LocalTimes lt;
    lt.increment(0);
    for (std::int64_t y = -1; y >= -300; --y) lt.increment(y);
    for (std::int64_t y = 1; y <= 300; ++y) lt.increment(y);
    EXPECT_EQ(lt.min_site(), -300);
    EXPECT_EQ(lt.max_site(), 300);
    EXPECT_EQ(lt.total(), 601u);
    EXPECT_EQ(lt.at(-300), 1u);
    EXPECT_EQ(lt.at(301), 0u);
    EXPECT_EQ(lt.at(-301), 0u);
}
