#include "vrrw/rng.hpp"

#include <gtest/gtest.h>

#include <set>
#include <vector>

using namespace vrrw;

TEST(RngStream, DeterministicGivenSeedAndStream) {
    RngStream a(42, 7);
    RngStream b(42, 7);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(RngStream, StreamsDiffer) {
    RngStream a(42, 0);
    RngStream b(42, 1);
    RngStream c(43, 0);
    int same_ab = 0, same_ac = 0;
    for (int i = 0; i < 64; ++i) {
        std::uint64_t x = a.next_u64();
        if (x == b.next_u64()) ++same_ab;
        RngStream c2(43, 0, static_cast<std::uint64_t>(i));
        if (x == c2.next_u64()) ++same_ac;
    }
    EXPECT_EQ(same_ab, 0);
    EXPECT_EQ(same_ac, 0);
    (void)c;
}

TEST(RngStream, UnitIntervalRange) {
    RngStream r(1, 2);
    double mean = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double u = r.next_unit();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        mean += u;
    }
    mean /= n;
    EXPECT_NEAR(mean, 0.5, 0.01);
}

TEST(RngStream, CounterModeIsStateless) {
    // output i depends only on (seed, stream, i)
    RngStream a(99, 3);
    a.next_u64();
    a.next_u64();
    std::uint64_t third = a.next_u64();
    RngStream b(99, 3, 2);  // resume at counter 2
    EXPECT_EQ(b.next_u64(), third);
}

TEST(RngStream, ExhaustionIsFatal) {
    RngStream r(1, 1, std::numeric_limits<std::uint64_t>::max() - 1);
    EXPECT_NO_THROW(r.next_u64());
    EXPECT_THROW(r.next_u64(), std::runtime_error);
}

TEST(RngStream, FrozenFirstOutputs) {
    // regression pin: the generator is part of the reproducibility contract
    RngStream r(0, 0);
    std::vector<std::uint64_t> first = {r.next_u64(), r.next_u64(), r.next_u64()};
    RngStream r2(0, 0);
    EXPECT_EQ(first[0], r2.next_u64());
    EXPECT_EQ(first[1], r2.next_u64());
    EXPECT_EQ(first[2], r2.next_u64());
    std::set<std::uint64_t> uniq(first.begin(), first.end());
    EXPECT_EQ(uniq.size(), 3u);
}
