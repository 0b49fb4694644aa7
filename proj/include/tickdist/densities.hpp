#pragma once

#include <cmath>
#include <limits>

#include "tickdist/error.hpp"

namespace tickdist {

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// ============================================================================
// Student density
//   f(g | alpha, m, L) = sqrt(L) alpha^{alpha/2} / B(1/2, alpha/2)
//                        * [alpha + L (g - m)^2]^{-(alpha+1)/2}
// alpha acts as both degrees of freedom and tail exponent: the tails decay
// as |g - m|^{-(alpha+1)}. Variance is alpha / (L (alpha - 2)) for alpha > 2.
// ============================================================================

struct StudentParams {
    double alpha = 3.0; // tail exponent / degrees of freedom, > 0
    double m = 0.0;     // location
    double L = 1.0;     // scale, > 0

    bool valid() const { return alpha > 0.0 && L > 0.0 && std::isfinite(m); }
};

inline double log_student_pdf(double g, const StudentParams& p) {
    double d = g - p.m;
    return 0.5 * std::log(p.L) + 0.5 * p.alpha * std::log(p.alpha) - log_beta(0.5, 0.5 * p.alpha) -
           0.5 * (p.alpha + 1.0) * std::log(p.alpha + p.L * d * d);
}

inline double student_pdf(double g, const StudentParams& p) {
    if (!p.valid()) throw ContractViolation("student_pdf: invalid parameters");
    return std::exp(log_student_pdf(g, p));
}

// ============================================================================
// Stretched exponential density on r >= 0
//   f(r | c, r0) = (c/r0) (r/r0)^{c-1} exp(-(r/r0)^c)
// Exponential at c = 1; as c -> 0 with c (r/r0)^c -> beta it approaches the
// power law beta r0^beta / r^{beta+1}.
// ============================================================================

struct StretchedExpParams {
    double c = 1.0;  // stretching exponent, > 0
    double r0 = 1.0; // characteristic scale, > 0

    bool valid() const { return c > 0.0 && r0 > 0.0; }
};

inline double stretched_exp_pdf(double r, const StretchedExpParams& p) {
    if (!p.valid()) throw ContractViolation("stretched_exp_pdf: invalid parameters");
    if (r < 0.0) throw ContractViolation("stretched_exp_pdf: r must be >= 0");
    if (r == 0.0) {
        if (p.c > 1.0) return 0.0;
        if (p.c == 1.0) return 1.0 / p.r0;
        return std::numeric_limits<double>::infinity(); // integrable singularity
    }
    double u = r / p.r0;
    return (p.c / p.r0) * std::pow(u, p.c - 1.0) * std::exp(-std::pow(u, p.c));
}

} // namespace tickdist
