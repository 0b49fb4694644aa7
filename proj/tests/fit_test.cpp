#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tickdist/fit.hpp"
#include "tickdist/synth.hpp"

using namespace tickdist;

namespace {

// Histogram whose densities sit exactly on a Student curve.
EmpiricalPdf exact_student_histogram(const StudentParams& truth) {
    auto xs = sample({truth, 3, 100'000});
    EmpiricalPdf pdf = empirical_pdf(xs);
    for (std::size_t k = 0; k < pdf.bin_count(); ++k) {
        pdf.density[k] = student_pdf(pdf.centers[k], truth);
        pdf.counts[k] = 1;
    }
    return pdf;
}

TailCcdf exact_power_law_ccdf(double alpha, double lo, double hi, int n_points) {
    TailCcdf c;
    c.sign = TailSign::Positive;
    c.n_sign = 1'000'000;
    for (int i = 0; i < n_points; ++i) {
        double x = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n_points - 1));
        c.magnitudes.push_back(x);
        c.ccdf.push_back(std::pow(x, -alpha));
    }
    return c;
}

} // namespace

TEST(FitStudent, RecoversExactCurve) {
    StudentParams truth{3.1, 0.0, 1.9};
    auto fit = fit_student(exact_student_histogram(truth));
    EXPECT_TRUE(fit.converged);
    EXPECT_NEAR(fit.params.alpha, truth.alpha, 1e-3);
    EXPECT_NEAR(fit.params.L, truth.L, 1e-3);
}

TEST(FitStudent, FreeLocationRecoversShift) {
    StudentParams truth{3.5, 0.4, 1.2};
    auto xs = sample({truth, 4, 100'000});
    EmpiricalPdf pdf = empirical_pdf(xs);
    for (std::size_t k = 0; k < pdf.bin_count(); ++k) {
        pdf.density[k] = student_pdf(pdf.centers[k], truth);
        pdf.counts[k] = 1;
    }
    auto fit = fit_student(pdf, /*fix_m_to_zero=*/false, {3.0, 0.0, 1.0});
    EXPECT_TRUE(fit.converged);
    EXPECT_NEAR(fit.params.alpha, truth.alpha, 1e-3);
    EXPECT_NEAR(fit.params.m, truth.m, 1e-3);
    EXPECT_NEAR(fit.params.L, truth.L, 1e-3);
}

TEST(FitStudent, SampledRecoveryWithinTolerance) {
    auto xs = sample({StudentParams{3.1, 0.0, 1.9}, 1, 1'000'000});
    auto fit = fit_student(empirical_pdf(xs));
    EXPECT_TRUE(fit.converged);
    EXPECT_NEAR(fit.params.alpha, 3.1, 0.15);
    EXPECT_NEAR(fit.params.L, 1.9, 0.15);
    EXPECT_GT(fit.alpha_stderr, 0.0);
}

TEST(FitStudent, GaussianDrivesAlphaLarge) {
    auto xs = sample({GaussianParams{0.0, 1.0}, 2, 1'000'000});
    auto fit = fit_student(empirical_pdf(xs));
    EXPECT_GT(fit.params.alpha, 10.0);
}

TEST(FitStudent, MirroredInputGivesIdenticalParameters) {
    auto xs = sample({StudentParams{3.1, 0.0, 1.9}, 5, 200'000});
    std::vector<double> flipped(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) flipped[i] = -xs[i];
    auto fit_a = fit_student(empirical_pdf(xs));
    auto fit_b = fit_student(empirical_pdf(flipped));
    EXPECT_NEAR(fit_a.params.alpha, fit_b.params.alpha, 1e-12);
    EXPECT_NEAR(fit_a.params.L, fit_b.params.L, 1e-12);
}

TEST(FitStudent, TooFewBinsRejected) {
    EmpiricalPdf pdf;
    pdf.total_n = 100;
    for (int k = 0; k < 5; ++k) {
        pdf.edges.push_back(0.1 * k);
        pdf.centers.push_back(0.1 * k + 0.05);
        pdf.density.push_back(1.0);
        pdf.counts.push_back(10);
    }
    pdf.edges.push_back(0.6);
    EXPECT_THROW(fit_student(pdf), InsufficientDataError);
}

TEST(FitTail, ExactPowerLawIsExact) {
    auto c = exact_power_law_ccdf(3.0, 1.0, 10.0, 40);
    auto fit = fit_tail(c, {1.0, 10.0});
    EXPECT_NEAR(fit.exponent, 3.0, 1e-10);
    EXPECT_LT(fit.stderr_, 1e-10);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(FitTail, ScaleEquivariance) {
    auto xs = sample({StudentParams{3.0, 0.0, 3.0}, 6, 200'000});
    auto c = tail_ccdf(xs, TailSign::Positive);
    auto base = fit_tail(c, {2.0, 50.0});

    const double lambda = 7.3;
    TailCcdf scaled = c;
    for (double& m : scaled.magnitudes) m *= lambda;
    auto fit = fit_tail(scaled, {2.0 * lambda, 50.0 * lambda});
    EXPECT_NEAR(fit.exponent, base.exponent, 1e-12);
}

TEST(FitTail, StudentSampleMatchesTabulatedRange) {
    // Raw draws, scaling range 2.4 <= g <= 60.3.
    auto xs = sample({StudentParams{3.1, 0.0, 1.9}, 12, 1'000'000});
    auto c = tail_ccdf(xs, TailSign::Positive);
    auto fit = fit_tail(c, {2.4, 60.3});
    EXPECT_NEAR(fit.exponent, 3.1, 0.15);
    EXPECT_GT(fit.r_squared, 0.98);
}

TEST(FitTail, InsufficientRangeRejected) {
    auto c = exact_power_law_ccdf(3.0, 1.0, 10.0, 40);
    EXPECT_THROW(fit_tail(c, {9.5, 10.0}), InsufficientDataError);
    EXPECT_THROW(fit_tail(c, {0.0, 10.0}), ContractViolation);
}

TEST(FitTail, GaussianTailCurvatureLowersRSquared) {
    auto gauss = sample({GaussianParams{0.0, 1.0}, 7, 1'000'000});
    auto student = sample({StudentParams{3.0, 0.0, 3.0}, 7, 1'000'000});
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto fit_g = fit_tail(tail_ccdf(gauss, TailSign::Positive), {2.4, inf});
    auto fit_s = fit_tail(tail_ccdf(student, TailSign::Positive), {2.4, inf});
    EXPECT_LT(fit_g.r_squared, fit_s.r_squared);
}

TEST(Hill, SingleRatioHandValue) {
    std::vector<double> mags{std::exp(1.0), 1.0}; // descending
    auto h = hill_estimate(mags, 1);
    EXPECT_NEAR(h.exponent, 1.0, 1e-12);
}

TEST(Hill, ParetoGroundTruth) {
    auto xs = sample({ParetoParams{3.0, 1.0}, 8, 1'000'000});
    std::sort(xs.begin(), xs.end(), std::greater<>());
    auto h = hill_estimate(xs, 5'000);
    EXPECT_NEAR(h.exponent, 3.0, 0.1);
    EXPECT_NEAR(h.stderr_, h.exponent / std::sqrt(5000.0), 1e-12);
}

TEST(Hill, OutOfRangeKRejected) {
    std::vector<double> mags{3.0, 2.0, 1.0};
    EXPECT_THROW(hill_estimate(mags, 0), ContractViolation);
    EXPECT_THROW(hill_estimate(mags, 3), ContractViolation);
}

TEST(Hill, AgreesWithTailFitOnStudent) {
    auto xs = sample({StudentParams{3.1, 0.0, 1.9}, 9, 1'000'000});
    std::vector<double> pos;
    for (double v : xs)
        if (v > 0) pos.push_back(v);
    std::sort(pos.begin(), pos.end(), std::greater<>());

    auto c = tail_ccdf(xs, TailSign::Positive);
    auto fit = fit_tail(c, {2.4, std::numeric_limits<double>::infinity()});
    std::size_t k = static_cast<std::size_t>(
        std::count_if(pos.begin(), pos.end(), [](double v) { return v > 4.8; })) - 1;
    auto h = hill_estimate(pos, k);
    double joint = 3.0 * std::sqrt(h.stderr_ * h.stderr_ + fit.stderr_ * fit.stderr_);
    EXPECT_LT(std::abs(h.exponent - fit.exponent), joint);
}

TEST(AutoScalingRange, FindsPowerLawOnPareto) {
    auto xs = sample({ParetoParams{3.0, 1.0}, 10, 200'000});
    auto c = tail_ccdf(xs, TailSign::Positive);
    auto fit = auto_scaling_range(c);
    EXPECT_NEAR(fit.exponent, 3.0, 0.25);
    EXPECT_GT(fit.r_squared, 0.99);
}
