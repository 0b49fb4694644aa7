#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "tickdist/histogram.hpp"
#include "tickdist/moments.hpp"
#include "tickdist/synth.hpp"

using namespace tickdist;

TEST(Moments, TwoPointDistribution) {
    std::vector<double> xs;
    for (int i = 0; i < 100; ++i) {
        xs.push_back(-1.0);
        xs.push_back(1.0);
    }
    auto ms = moments(xs);
    EXPECT_NEAR(ms.skewness, 0.0, 1e-14);
    EXPECT_NEAR(ms.kurtosis, 1.0, 1e-14);
}

TEST(Moments, GaussianKurtosisIsThree) {
    auto xs = sample({GaussianParams{0.0, 1.0}, 11, 1'000'000});
    auto ms = moments(xs);
    EXPECT_NEAR(ms.kurtosis, 3.0, 0.05);
    EXPECT_NEAR(ms.skewness, 0.0, 0.01);
}

TEST(Moments, DegenerateInputs) {
    std::vector<double> three{1.0, 2.0, 3.0};
    EXPECT_THROW(moments(three), InsufficientDataError);
    std::vector<double> flat(10, 4.2);
    EXPECT_THROW(moments(flat), DegenerateSeriesError);
}

TEST(Moments, AgreesWithBruteForcePasses) {
    auto xs = sample({StudentParams{5.0, 0.2, 1.3}, 7, 10'000});
    auto ms = moments(xs);
    auto bf = oracles::brute_force_moments(xs);
    double n = static_cast<double>(xs.size());
    EXPECT_NEAR(ms.mean, bf.mean, 1e-10 * std::abs(bf.mean));
    EXPECT_NEAR(ms.stdev, std::sqrt(bf.m2 * n / (n - 1.0)), 1e-10);
    EXPECT_NEAR(ms.skewness, bf.m3 / std::pow(bf.m2, 1.5), 1e-10);
    EXPECT_NEAR(ms.kurtosis, bf.m4 / (bf.m2 * bf.m2), 1e-10);
}

TEST(Moments, KurtosisBoundedBelowBySkewness) {
    // kurtosis >= skewness^2 + 1 for any sample.
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        auto xs = sample({StretchedExpParams{0.7, 2.0}, seed, 5'000});
        auto ms = moments(xs);
        EXPECT_GE(ms.kurtosis, ms.skewness * ms.skewness + 1.0 - 1e-12);
    }
}

TEST(Moments, HeavyTailKurtosisFinitePerRun) {
    // alpha = 3.1 has no fourth moment; per-run sample kurtosis is still a
    // finite number.
    auto xs = sample({StudentParams{3.1, 0.0, 1.9}, 99, 1'000'000});
    auto ms = moments(xs);
    EXPECT_TRUE(std::isfinite(ms.kurtosis));
    EXPECT_GT(ms.kurtosis, 3.0);
}

TEST(EmpiricalPdf, UniformDensityNearOne) {
    CounterRng rng(5);
    std::vector<double> xs;
    for (int i = 0; i < 200'000; ++i) xs.push_back(rng.uniform());
    auto pdf = empirical_pdf(xs);
    int checked = 0;
    for (std::size_t k = 0; k < pdf.bin_count(); ++k) {
        if (pdf.centers[k] > 0.05 && pdf.centers[k] < 0.9) {
            EXPECT_NEAR(pdf.density[k], 1.0, 0.1) << "bin " << k;
            ++checked;
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(EmpiricalPdf, GaussianDensityAtZero) {
    auto xs = sample({GaussianParams{0.0, 1.0}, 21, 1'000'000});
    auto pdf = empirical_pdf(xs);
    EXPECT_NEAR(pdf.density_at(0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 0.01);
}

TEST(EmpiricalPdf, StudentDensityAtZero) {
    // f(0) = 2 / (sqrt(3) pi) for alpha = 3, L = 1, m = 0.
    auto xs = sample({StudentParams{3.0, 0.0, 1.0}, 22, 1'000'000});
    auto pdf = empirical_pdf(xs);
    EXPECT_NEAR(pdf.density_at(0.0), 2.0 / (std::sqrt(3.0) * std::numbers::pi), 0.01);
}

TEST(EmpiricalPdf, DensityInvariantExact) {
    auto xs = sample({StudentParams{3.0, 0.0, 1.0}, 23, 50'000});
    auto pdf = empirical_pdf(xs);
    for (std::size_t k = 0; k < pdf.bin_count(); ++k) {
        double expected = static_cast<double>(pdf.counts[k]) /
                          (static_cast<double>(pdf.total_n) * pdf.width(k));
        EXPECT_DOUBLE_EQ(pdf.density[k], expected);
    }
}

TEST(EmpiricalPdf, IntegralMatchesCoverage) {
    auto xs = sample({StudentParams{3.0, 0.0, 1.0}, 24, 100'000});
    auto pdf = empirical_pdf(xs);
    double integral = 0.0;
    for (std::size_t k = 0; k < pdf.bin_count(); ++k) integral += pdf.density[k] * pdf.width(k);
    EXPECT_LE(integral, 1.0 + 1e-12);
    EXPECT_NEAR(integral, pdf.coverage(), 1e-12);

    // Binning out to the extreme sample covers everything.
    PdfBinConfig full;
    full.tail_quantile = 1.0;
    auto pdf_full = empirical_pdf(xs, full);
    double integral_full = 0.0;
    for (std::size_t k = 0; k < pdf_full.bin_count(); ++k)
        integral_full += pdf_full.density[k] * pdf_full.width(k);
    EXPECT_NEAR(integral_full, 1.0, 1e-12);
}

TEST(EmpiricalPdf, IdenticalSamplesRejected) {
    std::vector<double> flat(100, 0.5);
    EXPECT_THROW(empirical_pdf(flat), DegenerateSeriesError);
}

TEST(TailCcdf, CountingWithTies) {
    // Three copies each of {1,2,3,4}: the survival fractions at 1, 2, 3 are
    // 3/4, 2/4, 1/4; points at the maximum drop out.
    std::vector<double> xs;
    for (int rep = 0; rep < 3; ++rep)
        for (double v : {1.0, 2.0, 3.0, 4.0}) xs.push_back(v);
    auto c = tail_ccdf(xs, TailSign::Positive);
    EXPECT_EQ(c.n_sign, 12u);
    ASSERT_EQ(c.magnitudes.size(), 9u);
    EXPECT_DOUBLE_EQ(c.ccdf[0], 0.75);
    EXPECT_DOUBLE_EQ(c.ccdf[3], 0.5);
    EXPECT_DOUBLE_EQ(c.ccdf[6], 0.25);
}

TEST(TailCcdf, SymmetricSampleGivesIdenticalSides) {
    CounterRng rng(31);
    std::vector<double> xs;
    for (int i = 0; i < 5'000; ++i) {
        double v = rng.normal();
        xs.push_back(v);
        xs.push_back(-v);
    }
    auto pos = tail_ccdf(xs, TailSign::Positive);
    auto neg = tail_ccdf(xs, TailSign::Negative);
    ASSERT_EQ(pos.magnitudes.size(), neg.magnitudes.size());
    for (std::size_t i = 0; i < pos.magnitudes.size(); ++i) {
        EXPECT_DOUBLE_EQ(pos.magnitudes[i], neg.magnitudes[i]);
        EXPECT_DOUBLE_EQ(pos.ccdf[i], neg.ccdf[i]);
    }
}

TEST(TailCcdf, MonotoneAndBounded) {
    auto xs = sample({StudentParams{3.0, 0.0, 1.0}, 44, 20'000});
    for (TailSign sign : {TailSign::Positive, TailSign::Negative}) {
        auto c = tail_ccdf(xs, sign);
        EXPECT_LE(c.ccdf.front(), 1.0);
        for (std::size_t i = 1; i < c.ccdf.size(); ++i) {
            EXPECT_LE(c.ccdf[i], c.ccdf[i - 1]);
            EXPECT_GT(c.ccdf[i], 0.0);
            EXPECT_GE(c.magnitudes[i], c.magnitudes[i - 1]);
        }
        EXPECT_DOUBLE_EQ(c.ccdf.back(), 1.0 / static_cast<double>(c.n_sign));
    }
}

TEST(TailCcdf, TooFewSignedSamples) {
    std::vector<double> xs{1.0, 2.0, 3.0, -1.0, -2.0, -3.0, -4.0, -5.0, -6.0, -7.0, -8.0, -9.0, -10.0};
    EXPECT_THROW(tail_ccdf(xs, TailSign::Positive), InsufficientDataError);
    EXPECT_NO_THROW(tail_ccdf(xs, TailSign::Negative));
}
