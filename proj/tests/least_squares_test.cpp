#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "tickdist/least_squares.hpp"

using namespace tickdist;

namespace {

// Overdetermined linear system r = A theta - b (3 equations, 2 unknowns).
const double A[3][2] = {{1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}};
const double b[3] = {1.0, 2.0, 2.0};

bool linear_residual(std::span<const double> theta, std::vector<double>& out) {
    out.resize(3);
    for (int i = 0; i < 3; ++i) out[i] = A[i][0] * theta[0] + A[i][1] * theta[1] - b[i];
    return true;
}

// Exact solution via the normal equations, solved by hand for this fixture:
// theta* = (2/3, 1/2).
constexpr double theta_star[2] = {2.0 / 3.0, 0.5};

} // namespace

TEST(DampedLsq, LinearProblemExactInTwoIterations) {
    std::vector<double> init{10.0, -5.0};
    auto res = minimize_damped_lsq(linear_residual, nullptr, init);
    EXPECT_TRUE(res.converged);
    EXPECT_LE(res.iterations, 2);
    EXPECT_NEAR(res.params[0], theta_star[0], 1e-9);
    EXPECT_NEAR(res.params[1], theta_star[1], 1e-9);
}

TEST(DampedLsq, AnalyticJacobianMatchesNumeric) {
    auto jac = [](std::span<const double>, std::vector<double>& out) {
        out = {A[0][0], A[0][1], A[1][0], A[1][1], A[2][0], A[2][1]};
        return true;
    };
    std::vector<double> init{0.0, 0.0};
    auto with_jac = minimize_damped_lsq(linear_residual, jac, init);
    auto numeric = minimize_damped_lsq(linear_residual, nullptr, init);
    EXPECT_NEAR(with_jac.params[0], numeric.params[0], 1e-8);
    EXPECT_NEAR(with_jac.params[1], numeric.params[1], 1e-8);
}

TEST(DampedLsq, RosenbrockConverges) {
    auto rosen = [](std::span<const double> t, std::vector<double>& out) {
        out.resize(2);
        out[0] = 10.0 * (t[1] - t[0] * t[0]);
        out[1] = 1.0 - t[0];
        return true;
    };
    std::vector<double> init{-1.2, 1.0};
    auto res = minimize_damped_lsq(rosen, nullptr, init);
    EXPECT_TRUE(res.converged);
    EXPECT_NEAR(res.params[0], 1.0, 1e-6);
    EXPECT_NEAR(res.params[1], 1.0, 1e-6);
}

TEST(DampedLsq, ZeroResidualAtInitReturnsImmediately) {
    auto residual = [](std::span<const double> t, std::vector<double>& out) {
        out = {t[0] - 4.0};
        return true;
    };
    std::vector<double> init{4.0};
    auto res = minimize_damped_lsq(residual, nullptr, init);
    EXPECT_TRUE(res.converged);
    EXPECT_EQ(res.iterations, 0);
    EXPECT_DOUBLE_EQ(res.params[0], 4.0);
}

TEST(DampedLsq, DeterministicBitIdenticalRuns) {
    auto rosen = [](std::span<const double> t, std::vector<double>& out) {
        out.resize(2);
        out[0] = 10.0 * (t[1] - t[0] * t[0]);
        out[1] = 1.0 - t[0];
        return true;
    };
    std::vector<double> init{-1.2, 1.0};
    auto a = minimize_damped_lsq(rosen, nullptr, init);
    auto b_ = minimize_damped_lsq(rosen, nullptr, init);
    EXPECT_EQ(a.iterations, b_.iterations);
    EXPECT_EQ(a.params[0], b_.params[0]); // bit-identical
    EXPECT_EQ(a.params[1], b_.params[1]);
    EXPECT_EQ(a.cost, b_.cost);
}

TEST(DampedLsq, SingularDirectionHandledByDamping) {
    // Second parameter never enters the residual: J^T J is singular, the
    // damped system is not.
    auto residual = [](std::span<const double> t, std::vector<double>& out) {
        out = {t[0] - 1.0, 2.0 * (t[0] - 1.0)};
        return true;
    };
    std::vector<double> init{5.0, 3.0};
    auto res = minimize_damped_lsq(residual, nullptr, init);
    EXPECT_TRUE(res.converged);
    EXPECT_NEAR(res.params[0], 1.0, 1e-7);
    EXPECT_DOUBLE_EQ(res.params[1], 3.0); // untouched flat direction
}

TEST(DampedLsq, DomainRejectionRecovers) {
    // Residual undefined for t <= 0; the first Gauss-Newton step from t = 20
    // overshoots to t < 0 and must be damped back into the domain.
    auto residual = [](std::span<const double> t, std::vector<double>& out) {
        if (t[0] <= 0.0) return false;
        out = {std::log(t[0]) - 1.0};
        return true;
    };
    std::vector<double> init{20.0};
    auto res = minimize_damped_lsq(residual, nullptr, init);
    EXPECT_TRUE(res.converged);
    EXPECT_NEAR(res.params[0], std::exp(1.0), 1e-6);
}

TEST(DampedLsq, CovarianceShapeAndPositivity) {
    std::vector<double> init{0.0, 0.0};
    auto res = minimize_damped_lsq(linear_residual, nullptr, init);
    ASSERT_EQ(res.jtj_inverse.size(), 4u);
    EXPECT_GT(res.jtj_inverse[0], 0.0);
    EXPECT_GT(res.jtj_inverse[3], 0.0);
}
