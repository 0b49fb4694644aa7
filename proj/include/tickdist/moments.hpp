#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "tickdist/error.hpp"

namespace tickdist {

// Sample moment summary. Skewness and kurtosis are the third and fourth
// standardized central moments with n-denominator central moments; kurtosis
// is Pearson (non-excess), so a Gaussian scores 3.
struct MomentStats {
    double mean = 0.0;
    double stdev = 0.0; // sample (n-1) standard deviation
    double skewness = 0.0;
    double kurtosis = 0.0;
};

inline MomentStats moments(std::span<const double> sample) {
    if (sample.size() < 4)
        throw InsufficientDataError("moments: need at least 4 values");
    const double n = static_cast<double>(sample.size());

    double lo = sample[0], hi = sample[0];
    double mean = 0.0;
    for (double x : sample) {
        mean += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (lo == hi) throw DegenerateSeriesError("moments: zero variance");
    mean /= n;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : sample) {
        double d = x - mean;
        double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0))
        throw DegenerateSeriesError("moments: zero variance");

    MomentStats out;
    out.mean = mean;
    out.stdev = std::sqrt(m2 * n / (n - 1.0));
    out.skewness = m3 / (m2 * std::sqrt(m2));
    out.kurtosis = m4 / (m2 * m2);
    return out;
}

} // namespace tickdist
