#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tickdist/error.hpp"

namespace tickdist {

// ============================================================================
// Damped Gauss-Newton (Levenberg-Marquardt) minimizer for small nonlinear
// least-squares problems. Dense normal equations with Marquardt scaling;
// intended for a handful of parameters, not large systems.
// ============================================================================

// Fills `out` with the residual vector at `params`; returns false when the
// parameters are outside the model's domain (treated as a rejected step).
using ResidualFn = std::function<bool(std::span<const double>, std::vector<double>&)>;

// Fills `out` (row-major n_residuals x n_params) with the Jacobian.
using JacobianFn = std::function<bool(std::span<const double>, std::vector<double>&)>;

struct LsqOptions {
    double step_tol = 1e-8;   // relative parameter step
    double cost_tol = 1e-10;  // relative residual-sum decrease
    int max_iterations = 200;
    double lambda_init = 0.0; // pure Gauss-Newton first; damping grows on failure
    double lambda_grow = 10.0;
    double lambda_shrink = 0.25;
    double lambda_max = 1e12;
};

struct LsqResult {
    std::vector<double> params;
    double cost = 0.0; // sum of squared residuals at the solution
    int iterations = 0;
    bool converged = false;
    std::size_t n_residuals = 0;
    // Inverse of J^T J at the solution (row-major); empty if it was singular.
    // Parameter stderr_j = sqrt(cost / (n - p) * inv[j][j]).
    std::vector<double> jtj_inverse;
};

namespace detail {

// Cholesky solve of (p x p) A x = b; false if A is not positive definite.
inline bool cholesky_solve(std::vector<double> a, std::span<const double> b,
                           std::vector<double>& x, std::size_t p) {
    std::vector<double> chol(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i * p + j];
            for (std::size_t k = 0; k < j; ++k) sum -= chol[i * p + k] * chol[j * p + k];
            if (i == j) {
                if (!(sum > 0.0)) return false;
                chol[i * p + i] = std::sqrt(sum);
            } else {
                chol[i * p + j] = sum / chol[j * p + j];
            }
        }
    }
    x.assign(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) { // forward: L y = b
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) sum -= chol[i * p + k] * x[k];
        x[i] = sum / chol[i * p + i];
    }
    for (std::size_t ii = p; ii-- > 0;) { // backward: L^T x = y
        double sum = x[ii];
        for (std::size_t k = ii + 1; k < p; ++k) sum -= chol[k * p + ii] * x[k];
        x[ii] = sum / chol[ii * p + ii];
    }
    return true;
}

inline bool invert_spd(const std::vector<double>& a, std::vector<double>& inv, std::size_t p) {
    inv.assign(p * p, 0.0);
    std::vector<double> e(p, 0.0), col;
    for (std::size_t j = 0; j < p; ++j) {
        e.assign(p, 0.0);
        e[j] = 1.0;
        if (!cholesky_solve(a, e, col, p)) return false;
        for (std::size_t i = 0; i < p; ++i) inv[i * p + j] = col[i];
    }
    return true;
}

inline double sum_sq(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

// Central-difference Jacobian built from the residual function.
inline JacobianFn numeric_jacobian(const ResidualFn& residual) {
    return [residual](std::span<const double> params, std::vector<double>& out) {
        std::vector<double> theta(params.begin(), params.end());
        std::vector<double> rp, rm;
        const std::size_t p = theta.size();
        for (std::size_t j = 0; j < p; ++j) {
            double h = std::max(1e-7 * std::abs(theta[j]), 1e-9);
            double saved = theta[j];
            theta[j] = saved + h;
            bool okp = residual(theta, rp);
            theta[j] = saved - h;
            bool okm = residual(theta, rm);
            theta[j] = saved;
            if (!okp || !okm || rp.size() != rm.size()) return false;
            if (j == 0) out.assign(rp.size() * p, 0.0);
            for (std::size_t i = 0; i < rp.size(); ++i)
                out[i * p + j] = (rp[i] - rm[i]) / (2.0 * h);
        }
        return true;
    };
}

} // namespace detail

// Iterates damped Gauss-Newton steps from `init`. Terminates on relative step
// < step_tol, relative cost decrease < cost_tol, or max_iterations. Singular
// or non-improving steps raise the damping; damping beyond lambda_max ends
// with converged = false. Fully deterministic: identical inputs produce
// bit-identical iterates.
inline LsqResult minimize_damped_lsq(const ResidualFn& residual, const JacobianFn& jacobian_in,
                                     std::span<const double> init, const LsqOptions& options = {}) {
    const std::size_t p = init.size();
    if (p == 0) throw ContractViolation("minimize_damped_lsq: empty parameter vector");
    JacobianFn jacobian = jacobian_in ? jacobian_in : detail::numeric_jacobian(residual);

    LsqResult result;
    result.params.assign(init.begin(), init.end());

    std::vector<double> r;
    if (!residual(result.params, r) || r.empty())
        throw ContractViolation("minimize_damped_lsq: residual undefined at init");
    for (double v : r)
        if (!std::isfinite(v)) throw ContractViolation("minimize_damped_lsq: residual not finite at init");
    result.n_residuals = r.size();
    result.cost = detail::sum_sq(r);

    std::vector<double> jac, jtj(p * p), jtr(p), damped, step, trial, r_trial;
    double lambda = options.lambda_init;

    auto compute_normal = [&]() -> bool {
        if (!jacobian(result.params, jac) || jac.size() != r.size() * p) return false;
        for (std::size_t i = 0; i < p; ++i) {
            jtr[i] = 0.0;
            for (std::size_t j = i; j < p; ++j) jtj[i * p + j] = 0.0;
        }
        for (std::size_t k = 0; k < r.size(); ++k) {
            const double* row = &jac[k * p];
            for (std::size_t i = 0; i < p; ++i) {
                jtr[i] += row[i] * r[k];
                for (std::size_t j = i; j < p; ++j) jtj[i * p + j] += row[i] * row[j];
            }
        }
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < i; ++j) jtj[i * p + j] = jtj[j * p + i];
        return true;
    };

    if (result.cost == 0.0) { // residual already zero: nothing to do
        result.converged = true;
        if (compute_normal()) detail::invert_spd(jtj, result.jtj_inverse, p);
        return result;
    }

    while (result.iterations < options.max_iterations) {
        ++result.iterations;
        if (!compute_normal()) break;

        bool accepted = false;
        while (lambda <= options.lambda_max) {
            damped = jtj;
            for (std::size_t i = 0; i < p; ++i) {
                double d = jtj[i * p + i];
                damped[i * p + i] = d + lambda * (d > 0.0 ? d : 1.0);
            }
            std::vector<double> neg_g(jtr);
            for (double& v : neg_g) v = -v;
            if (!detail::cholesky_solve(damped, neg_g, step, p)) {
                lambda = lambda == 0.0 ? 1e-4 : lambda * options.lambda_grow;
                continue;
            }
            trial = result.params;
            for (std::size_t i = 0; i < p; ++i) trial[i] += step[i];
            bool finite = residual(trial, r_trial) && r_trial.size() == result.n_residuals;
            double trial_cost = 0.0;
            if (finite) {
                trial_cost = detail::sum_sq(r_trial);
                finite = std::isfinite(trial_cost);
            }
            if (finite && trial_cost <= result.cost) {
                double step_norm = std::sqrt(detail::sum_sq(step));
                double param_norm = std::sqrt(detail::sum_sq(result.params));
                double prev_cost = result.cost;
                result.params = trial;
                r = r_trial;
                result.cost = trial_cost;
                lambda = lambda > 1e-14 ? lambda * options.lambda_shrink : 0.0;
                accepted = true;
                if (step_norm < options.step_tol * (param_norm + options.step_tol) ||
                    prev_cost - trial_cost <= options.cost_tol * prev_cost)
                    result.converged = true;
                break;
            }
            lambda = lambda == 0.0 ? 1e-4 : lambda * options.lambda_grow;
        }
        if (!accepted || result.converged) break;
    }

    if (compute_normal()) detail::invert_spd(jtj, result.jtj_inverse, p);
    return result;
}

} // namespace tickdist
