#include "vrrw/weights.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace vrrw;

TEST(WeightSpec, PowerExamples) {
    EXPECT_DOUBLE_EQ(WeightSpec::power(0).at(7), 1.0);
    EXPECT_DOUBLE_EQ(WeightSpec::power(1).at(3), 4.0);
    // 5^0.4 = 1.90365393871587848...
    EXPECT_NEAR(WeightSpec::power(0.4).at(4), 1.9036539387158785, 1e-12);
    EXPECT_DOUBLE_EQ(WeightSpec::power(2).at(3), 16.0);
}

TEST(WeightSpec, PowerRejectsBadAlpha) {
    EXPECT_THROW(WeightSpec::power(-0.1), std::invalid_argument);
    EXPECT_THROW(WeightSpec::power(std::nan("")), std::invalid_argument);
    EXPECT_THROW(WeightSpec::power(std::numeric_limits<double>::infinity()),
                 std::invalid_argument);
}

TEST(WeightSpec, LinearExamples) {
    EXPECT_DOUBLE_EQ(WeightSpec::linear().at(0), 1.0);
    EXPECT_DOUBLE_EQ(WeightSpec::linear().at(9), 10.0);
}

TEST(WeightSpec, PowerOneEqualsLinearExhaustive) {
    WeightSpec p1 = WeightSpec::power(1);
    WeightSpec lin = WeightSpec::linear();
    for (std::int64_t k = 0; k <= 1000000; ++k)
        ASSERT_EQ(p1.at(k), lin.at(k)) << "k=" << k;
}

TEST(WeightSpec, TableTails) {
    WeightSpec t = WeightSpec::table({2, 5, 5}, TailRule::constant());
    EXPECT_DOUBLE_EQ(t.at(0), 2.0);
    EXPECT_DOUBLE_EQ(t.at(2), 5.0);
    EXPECT_DOUBLE_EQ(t.at(9), 5.0);

    WeightSpec none = WeightSpec::table({2, 5, 5}, TailRule::none());
    EXPECT_DOUBLE_EQ(none.at(2), 5.0);
    EXPECT_THROW(none.at(3), std::out_of_range);

    WeightSpec pw = WeightSpec::table({1, 2, 3}, TailRule::power(1.0));
    EXPECT_DOUBLE_EQ(pw.at(2), 3.0);
    // continues as last * ((k+1)/len)^1
    EXPECT_DOUBLE_EQ(pw.at(5), 3.0 * 2.0);
}

TEST(WeightSpec, TableRejectsBadValues) {
    EXPECT_THROW(WeightSpec::table({}, TailRule::constant()), std::invalid_argument);
    EXPECT_THROW(WeightSpec::table({1, 0}, TailRule::constant()), std::invalid_argument);
    EXPECT_THROW(WeightSpec::table({-2}, TailRule::constant()), std::invalid_argument);
}

TEST(WeightSpec, CustomFormulas) {
    WeightSpec sc = WeightSpec::custom("scaled_power", {{"c", 3.0}, {"alpha", 2.0}});
    EXPECT_DOUBLE_EQ(sc.at(1), 12.0);
    WeightSpec sh = WeightSpec::custom("shifted_power", {{"alpha", 1.0}, {"shift", 1.0}});
    EXPECT_DOUBLE_EQ(sh.at(0), 2.0);  // w'_k = w_{k+1} for linear base
    EXPECT_DOUBLE_EQ(sh.at(4), 6.0);
    WeightSpec lg = WeightSpec::custom("log_power", {{"alpha", 0.5}, {"beta", 1.0}});
    EXPECT_NEAR(lg.at(0), std::log(2.0), 1e-15);
    EXPECT_THROW(WeightSpec::custom("nope", {}), std::invalid_argument);
}

TEST(WeightSpec, PositivityProperty) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> alpha_d(0.0, 3.0);
    for (int rep = 0; rep < 50; ++rep) {
        WeightSpec s = WeightSpec::power(alpha_d(gen));
        for (std::int64_t k : {0, 1, 5, 100, 4095, 16384, 100000}) {
            double w = s.at(k);
            ASSERT_TRUE(std::isfinite(w) && w > 0);
        }
    }
}

TEST(WeightSpec, ExactValues) {
    auto q = WeightSpec::power(2).exact_at(3);
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, Rational(16));
    EXPECT_FALSE(WeightSpec::power(0.4).exact_at(3).has_value());
    auto lin = WeightSpec::linear().exact_at(9);
    ASSERT_TRUE(lin.has_value());
    EXPECT_EQ(*lin, Rational(10));
    auto tbl = WeightSpec::table({2.5, 7}, TailRule::constant()).exact_at(0);
    ASSERT_TRUE(tbl.has_value());
    EXPECT_EQ(*tbl, Rational(5, 2));
    EXPECT_FALSE(WeightSpec::table({1, 2}, TailRule::power(0.5)).exact_at(6).has_value());
}

TEST(Environment, HomogeneousLookup) {
    Environment env(WeightSpec::power(0.3));
    EXPECT_TRUE(env.homogeneous());
    for (std::int64_t x : {-5, 0, 17})
        for (std::int64_t k : {0, 3, 50})
            EXPECT_EQ(env.weight(x, k), env.default_spec().at(k));
}

TEST(Environment, Overrides) {
    Environment env(WeightSpec::linear(),
                    {{-1, WeightSpec::table({100}, TailRule::constant())}});
    EXPECT_DOUBLE_EQ(env.weight(-1, 0), 100.0);
    EXPECT_DOUBLE_EQ(env.weight(-1, 9), 100.0);
    EXPECT_DOUBLE_EQ(env.weight(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(env.weight(-2, 4), 5.0);
}

TEST(Environment, NegativeSiteShiftedFamily) {
    // the proof environment: w'_k(x) = w_{k+1} for x < 0, w'_k(x) = w_k else
    WeightSpec base = WeightSpec::power(1);
    WeightSpec shifted = WeightSpec::custom("shifted_power", {{"alpha", 1.0}, {"shift", 1.0}});
    Environment env(base, {{-1, shifted}, {-2, shifted}, {-3, shifted}});
    EXPECT_DOUBLE_EQ(env.weight(-2, 0), 2.0);
    EXPECT_DOUBLE_EQ(env.weight(1, 0), 1.0);
}

TEST(Environment, AgreementOnNonnegativeSites) {
    Environment a(WeightSpec::power(1));
    Environment b(WeightSpec::power(1), {{-2, WeightSpec::table({9}, TailRule::constant())}});
    Environment c(WeightSpec::power(1), {{0, WeightSpec::table({9}, TailRule::constant())}});
    EXPECT_TRUE(Environment::agree_on_nonnegative_sites(a, b));
    EXPECT_FALSE(Environment::agree_on_nonnegative_sites(a, c));
    // overriding x >= 0 with a structurally identical spec still agrees
    Environment d(WeightSpec::power(1), {{0, WeightSpec::power(1)}});
    EXPECT_TRUE(Environment::agree_on_nonnegative_sites(a, d));
}
