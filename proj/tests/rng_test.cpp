#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "tickdist/rng.hpp"

using namespace tickdist;

TEST(CounterRng, SameSeedSameStream) {
    CounterRng a(123), b(123);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(CounterRng, DifferentSeedsDiverge) {
    CounterRng a(1), b(2);
    int equal = 0;
    for (int i = 0; i < 1000; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    EXPECT_EQ(equal, 0);
}

TEST(CounterRng, CounterAdvances) {
    CounterRng rng(7);
    EXPECT_EQ(rng.counter(), 0u);
    rng.next_u64();
    EXPECT_EQ(rng.counter(), 1u);
    rng.uniform();
    EXPECT_EQ(rng.counter(), 2u);
}

TEST(CounterRng, UniformStaysInOpenInterval) {
    CounterRng rng(99);
    double lo = 1.0, hi = 0.0, mean = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        mean += u;
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(hi, 1.0);
    EXPECT_NEAR(mean / n, 0.5, 0.002);
}

TEST(CounterRng, NormalMoments) {
    CounterRng rng(42);
    const int n = 1'000'000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double z = rng.normal();
        sum += z;
        sum2 += z * z;
    }
    double mean = sum / n;
    double stdev = std::sqrt(sum2 / n - mean * mean);
    EXPECT_NEAR(mean, 0.0, 0.004);
    EXPECT_NEAR(stdev, 1.0, 0.003);
}

TEST(CounterRng, GammaMoments) {
    CounterRng rng(17);
    const double shape = 1.55, scale = 2.0; // chi-square with 3.1 dof
    const int n = 500'000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double g = rng.gamma(shape, scale);
        sum += g;
        sum2 += g * g;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    EXPECT_NEAR(mean, shape * scale, 0.02);
    EXPECT_NEAR(var, shape * scale * scale, 0.1);
}

TEST(CounterRng, GammaSmallShape) {
    CounterRng rng(18);
    const double shape = 0.4;
    const int n = 500'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.gamma(shape);
    EXPECT_NEAR(sum / n, shape, 0.01);
}

TEST(CounterRng, ChiSquareMeanIsDof) {
    CounterRng rng(19);
    const int n = 200'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.chi_square(3.1);
    EXPECT_NEAR(sum / n, 3.1, 0.03);
}

TEST(CounterRng, ExponentialMean) {
    CounterRng rng(20);
    const int n = 500'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.exponential(2.5);
    EXPECT_NEAR(sum / n, 2.5, 0.02);
}

TEST(CounterRng, RejectsBadGammaParameters) {
    CounterRng rng(1);
    EXPECT_THROW(rng.gamma(0.0), ContractViolation);
    EXPECT_THROW(rng.gamma(1.0, -1.0), ContractViolation);
}
