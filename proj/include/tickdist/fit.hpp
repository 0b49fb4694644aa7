#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "tickdist/densities.hpp"
#include "tickdist/error.hpp"
#include "tickdist/histogram.hpp"
#include "tickdist/least_squares.hpp"

namespace tickdist {

// ============================================================================
// Student density fit: least squares on log density over nonzero bins.
// ============================================================================

struct StudentFit {
    StudentParams params;
    double residual_norm = 0.0; // sqrt(sum of squared log-density residuals)
    int iterations = 0;
    bool converged = false;
    std::size_t n_bins = 0;      // bins entering the objective
    double alpha_stderr = 0.0;   // from the linearized covariance at the solution
    double l_stderr = 0.0;
    double m_stderr = 0.0;       // 0 when m is fixed
};

// Fits (alpha, L) -- and m unless fix_m_to_zero -- by minimizing
//   sum over nonzero bins of (log density_bin - log student_pdf(center))^2
// with the damped least-squares minimizer. Log-density weighting matches the
// log-log diagnostics this feeds; zero-count bins carry no information about
// log f and are excluded rather than floored.
inline StudentFit fit_student(const EmpiricalPdf& pdf, bool fix_m_to_zero = true,
                              StudentParams init = {3.0, 0.0, 1.0},
                              const LsqOptions& options = {}) {
    struct BinPoint {
        double center;
        double log_density;
    };
    std::vector<BinPoint> pts;
    for (std::size_t k = 0; k < pdf.bin_count(); ++k)
        if (pdf.counts[k] > 0) pts.push_back({pdf.centers[k], std::log(pdf.density[k])});
    if (pts.size() < 10)
        throw InsufficientDataError("fit_student: fewer than 10 nonzero bins");

    if (fix_m_to_zero) {
        // With m = 0 the model depends on |center| only. Ordering terms by
        // (|center|, log density) makes the whole iteration bit-identical for
        // mirrored histograms.
        std::sort(pts.begin(), pts.end(), [](const BinPoint& a, const BinPoint& b) {
            double ma = std::abs(a.center), mb = std::abs(b.center);
            return ma != mb ? ma < mb : a.log_density < b.log_density;
        });
    } else {
        std::sort(pts.begin(), pts.end(),
                  [](const BinPoint& a, const BinPoint& b) { return a.center < b.center; });
    }

    auto residual = [&pts, fix_m_to_zero](std::span<const double> theta, std::vector<double>& out) {
        StudentParams p;
        p.alpha = theta[0];
        p.L = theta[1];
        p.m = fix_m_to_zero ? 0.0 : theta[2];
        if (!p.valid()) return false;
        out.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            out[i] = pts[i].log_density - log_student_pdf(pts[i].center, p);
        return true;
    };

    std::vector<double> theta{init.alpha, init.L};
    if (!fix_m_to_zero) theta.push_back(init.m);

    LsqResult res = minimize_damped_lsq(residual, nullptr, theta, options);

    StudentFit fit;
    fit.params.alpha = res.params[0];
    fit.params.L = res.params[1];
    fit.params.m = fix_m_to_zero ? 0.0 : res.params[2];
    fit.residual_norm = std::sqrt(res.cost);
    fit.iterations = res.iterations;
    fit.converged = res.converged;
    fit.n_bins = pts.size();
    const std::size_t np = res.params.size();
    if (!res.jtj_inverse.empty() && res.n_residuals > np) {
        double sigma2 = res.cost / static_cast<double>(res.n_residuals - np);
        fit.alpha_stderr = std::sqrt(sigma2 * res.jtj_inverse[0]);
        fit.l_stderr = std::sqrt(sigma2 * res.jtj_inverse[1 * np + 1]);
        if (!fix_m_to_zero) fit.m_stderr = std::sqrt(sigma2 * res.jtj_inverse[2 * np + 2]);
    }
    return fit;
}

// ============================================================================
// Power-law tail fit on the CCDF.
// ============================================================================

struct ScalingRange {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity(); // infinity = sample max
};

struct TailFitOptions {
    // The regression runs on a log-spaced magnitude grid across the scaling
    // range, with the empirical CCDF interpolated in log-log coordinates.
    // Regressing on the raw data points instead would let the dense low end
    // of the range dominate and understate the exponent wherever the tail is
    // still bending toward its asymptote.
    int points_per_decade = 25;
    // Grid top is capped where the CCDF still rests on at least this many
    // exceedances; beyond that the curve is extreme-order-statistic noise.
    int min_exceedances = 3;
};

struct TailFit {
    TailSign sign = TailSign::Positive;
    double exponent = 0.0; // minus the log-log slope
    double stderr_ = 0.0;  // OLS standard error of the slope
    ScalingRange range;    // range actually used after data clamping
    int n_points = 0;      // regression grid points
    double r_squared = 0.0;
};

// Ordinary least squares of ln ccdf on ln magnitude over the scaling range.
inline TailFit fit_tail(const TailCcdf& ccdf, ScalingRange range, const TailFitOptions& options = {}) {
    if (!(range.lo > 0.0) || !(range.hi > range.lo))
        throw ContractViolation("fit_tail: need 0 < g_min < g_max");
    const auto& mag = ccdf.magnitudes;
    if (mag.size() < 2) throw InsufficientDataError("fit_tail: ccdf has too few points");

    std::size_t in_range = 0;
    for (std::size_t i = 0; i < mag.size(); ++i)
        if (mag[i] >= range.lo && mag[i] <= range.hi) ++in_range;
    if (in_range < 10)
        throw InsufficientDataError("fit_tail: fewer than 10 ccdf points inside the scaling range");

    double lo = std::max(range.lo, mag.front());
    double hi = std::min(range.hi, mag.back());
    if (ccdf.n_sign > 0) {
        double floor_ccdf = static_cast<double>(options.min_exceedances) /
                            static_cast<double>(ccdf.n_sign);
        for (std::size_t i = mag.size(); i-- > 0;) {
            if (ccdf.ccdf[i] >= floor_ccdf) {
                hi = std::min(hi, mag[i]);
                break;
            }
        }
    }
    if (!(hi > lo)) throw InsufficientDataError("fit_tail: scaling range collapsed");

    // Deduplicated log-log polyline of the empirical curve.
    std::vector<double> lx, ly;
    lx.reserve(mag.size());
    for (std::size_t i = 0; i < mag.size(); ++i) {
        if (!lx.empty() && mag[i] == mag[i - 1]) continue;
        lx.push_back(std::log(mag[i]));
        ly.push_back(std::log(ccdf.ccdf[i]));
    }

    double decades = std::log10(hi / lo);
    int n_grid = std::max(10, static_cast<int>(std::lround(decades * options.points_per_decade)) + 1);

    auto interp = [&](double x) {
        auto it = std::lower_bound(lx.begin(), lx.end(), x);
        if (it == lx.begin()) return ly.front();
        if (it == lx.end()) return ly.back();
        std::size_t j = static_cast<std::size_t>(it - lx.begin());
        double w = (x - lx[j - 1]) / (lx[j] - lx[j - 1]);
        return ly[j - 1] + w * (ly[j] - ly[j - 1]);
    };

    double log_lo = std::log(lo), log_hi = std::log(hi);
    std::vector<double> gx(static_cast<std::size_t>(n_grid)), gy(static_cast<std::size_t>(n_grid));
    for (int i = 0; i < n_grid; ++i) {
        gx[static_cast<std::size_t>(i)] = log_lo + (log_hi - log_lo) * i / (n_grid - 1);
        gy[static_cast<std::size_t>(i)] = interp(gx[static_cast<std::size_t>(i)]);
    }

    double xm = 0.0, ym = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        xm += gx[static_cast<std::size_t>(i)];
        ym += gy[static_cast<std::size_t>(i)];
    }
    xm /= n_grid;
    ym /= n_grid;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        double dx = gx[static_cast<std::size_t>(i)] - xm;
        double dy = gy[static_cast<std::size_t>(i)] - ym;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    double slope = sxy / sxx;
    double ssr = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        double dy = gy[static_cast<std::size_t>(i)] - ym - slope * (gx[static_cast<std::size_t>(i)] - xm);
        ssr += dy * dy;
    }

    TailFit fit;
    fit.sign = ccdf.sign;
    fit.exponent = -slope;
    fit.stderr_ = std::sqrt(ssr / std::max(n_grid - 2, 1) / sxx);
    fit.range = {lo, hi};
    fit.n_points = n_grid;
    fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    return fit;
}

// Searches g_min over a log-spaced candidate grid (g_max = sample max) for
// the range with the highest r_squared. Never the default path; the standard
// ranges are chosen by hand.
inline TailFit auto_scaling_range(const TailCcdf& ccdf, int n_candidates = 30,
                                  const TailFitOptions& options = {}) {
    if (ccdf.magnitudes.size() < 20)
        throw InsufficientDataError("auto_scaling_range: too few ccdf points");
    double lo_min = ccdf.magnitudes[ccdf.magnitudes.size() / 2]; // median magnitude
    double lo_max = ccdf.magnitudes[ccdf.magnitudes.size() - 10];
    if (!(lo_max > lo_min)) throw InsufficientDataError("auto_scaling_range: degenerate magnitudes");

    bool found = false;
    TailFit best;
    for (int i = 0; i < n_candidates; ++i) {
        double lo = std::exp(std::log(lo_min) +
                             (std::log(lo_max) - std::log(lo_min)) * i / (n_candidates - 1));
        try {
            TailFit fit = fit_tail(ccdf, {lo, std::numeric_limits<double>::infinity()}, options);
            if (!found || fit.r_squared > best.r_squared) {
                best = fit;
                found = true;
            }
        } catch (const InsufficientDataError&) {
            break; // candidates only shrink the range further
        }
    }
    if (!found) throw InsufficientDataError("auto_scaling_range: no admissible range");
    return best;
}

// ============================================================================
// Hill tail-index estimator (order-statistics cross-check on fit_tail).
// ============================================================================

struct HillEstimate {
    double exponent = 0.0;
    double stderr_ = 0.0; // asymptotic exponent / sqrt(k)
    std::size_t k = 0;
};

// magnitudes must be sorted descending and strictly positive;
// k order statistics are used, 1 <= k < size.
inline HillEstimate hill_estimate(std::span<const double> magnitudes_desc, std::size_t k) {
    if (k < 1 || k >= magnitudes_desc.size())
        throw ContractViolation("hill_estimate: require 1 <= k < n");
    double xk1 = magnitudes_desc[k];
    if (!(xk1 > 0.0)) throw ContractViolation("hill_estimate: magnitudes must be positive");
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += std::log(magnitudes_desc[j] / xk1);
    if (!(sum > 0.0)) throw DegenerateSeriesError("hill_estimate: degenerate order statistics");
    HillEstimate out;
    out.k = k;
    out.exponent = static_cast<double>(k) / sum;
    out.stderr_ = out.exponent / std::sqrt(static_cast<double>(k));
    return out;
}

} // namespace tickdist
