#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "tickdist/error.hpp"

namespace tickdist {

// ============================================================================
// Empirical density: log-spaced bins in |g| on each side of the origin,
// linear bins across the center (-g_lo, g_lo).
// ============================================================================

struct PdfBinConfig {
    double g_lo = 0.1;          // boundary between linear center and log sides
    int log_bins_per_side = 50;
    int linear_bins = 20;
    // Per-side upper edge sits at this magnitude quantile of the side's
    // samples rather than its max. Bins beyond it would hold O(1) counts
    // whose log-density is pure floor noise; the uncovered mass is reported
    // via coverage(). Set to 1.0 to bin out to the extreme sample.
    double tail_quantile = 0.9999;
};

struct EmpiricalPdf {
    std::vector<double> edges;    // bin k spans [edges[k], edges[k+1])
    std::vector<double> centers;  // geometric centers on log sides, midpoints in the linear core
    std::vector<double> density;  // counts[k] / (total_n * width[k])
    std::vector<std::int64_t> counts;
    std::int64_t total_n = 0;

    std::size_t bin_count() const { return density.size(); }
    double width(std::size_t k) const { return edges[k + 1] - edges[k]; }

    // Fraction of the sample that landed inside the binned range.
    double coverage() const {
        std::int64_t inside = 0;
        for (auto c : counts) inside += c;
        return static_cast<double>(inside) / static_cast<double>(total_n);
    }

    // Density of the bin containing g (0 if g is out of range).
    double density_at(double g) const {
        auto it = std::upper_bound(edges.begin(), edges.end(), g);
        if (it == edges.begin() || it == edges.end()) return 0.0;
        return density[static_cast<std::size_t>(it - edges.begin()) - 1];
    }
};

namespace detail {

// q-quantile (0 < q <= 1) of a copy of the values, nearest-rank.
inline double magnitude_quantile(std::vector<double> mags, double q) {
    std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(mags.size())));
    rank = std::min(std::max<std::size_t>(rank, 1), mags.size());
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(rank - 1), mags.end());
    return mags[rank - 1];
}

} // namespace detail

inline EmpiricalPdf empirical_pdf(std::span<const double> sample, const PdfBinConfig& config = {}) {
    if (sample.empty()) throw InsufficientDataError("empirical_pdf: empty sample");
    if (!(config.g_lo > 0.0) || config.log_bins_per_side < 1 || config.linear_bins < 1 ||
        !(config.tail_quantile > 0.0) || config.tail_quantile > 1.0)
        throw ContractViolation("empirical_pdf: bad bin config");

    std::vector<double> pos, neg;
    for (double x : sample) {
        if (x >= config.g_lo) pos.push_back(x);
        else if (x <= -config.g_lo) neg.push_back(-x);
    }
    double pos_hi = pos.empty() ? 0.0 : detail::magnitude_quantile(pos, config.tail_quantile);
    double neg_hi = neg.empty() ? 0.0 : detail::magnitude_quantile(neg, config.tail_quantile);

    double lo_sample = *std::min_element(sample.begin(), sample.end());
    double hi_sample = *std::max_element(sample.begin(), sample.end());
    if (lo_sample == hi_sample)
        throw DegenerateSeriesError("empirical_pdf: all samples identical");

    EmpiricalPdf pdf;
    pdf.total_n = static_cast<std::int64_t>(sample.size());

    // Edges ascend: negative log side, linear core, positive log side.
    // Endpoints are pinned exactly so extreme samples land inside the range.
    auto log_mag = [&](double hi, int k) {
        if (k == 0) return config.g_lo;
        if (k == config.log_bins_per_side) return hi;
        double step = (std::log(hi) - std::log(config.g_lo)) / config.log_bins_per_side;
        return std::exp(std::log(config.g_lo) + step * k);
    };
    if (neg_hi > config.g_lo)
        for (int k = config.log_bins_per_side; k >= 1; --k) pdf.edges.push_back(-log_mag(neg_hi, k));
    for (int k = 0; k <= config.linear_bins; ++k)
        pdf.edges.push_back(-config.g_lo + 2.0 * config.g_lo * k / config.linear_bins);
    if (pos_hi > config.g_lo)
        for (int k = 1; k <= config.log_bins_per_side; ++k) pdf.edges.push_back(log_mag(pos_hi, k));

    const std::size_t nbins = pdf.edges.size() - 1;
    pdf.counts.assign(nbins, 0);
    for (double x : sample) {
        if (x == pdf.edges.back()) { // topmost edge belongs to the last bin
            ++pdf.counts[nbins - 1];
            continue;
        }
        auto it = std::upper_bound(pdf.edges.begin(), pdf.edges.end(), x);
        if (it == pdf.edges.begin() || it == pdf.edges.end()) continue;
        ++pdf.counts[static_cast<std::size_t>(it - pdf.edges.begin()) - 1];
    }

    pdf.centers.resize(nbins);
    pdf.density.resize(nbins);
    for (std::size_t k = 0; k < nbins; ++k) {
        double a = pdf.edges[k], b = pdf.edges[k + 1];
        if (a >= config.g_lo - 1e-15 || b <= -config.g_lo + 1e-15) {
            double c = std::sqrt(std::abs(a) * std::abs(b));
            pdf.centers[k] = (a + b) < 0 ? -c : c;
        } else {
            pdf.centers[k] = 0.5 * (a + b);
        }
        pdf.density[k] = static_cast<double>(pdf.counts[k]) /
                         (static_cast<double>(pdf.total_n) * (b - a));
    }
    return pdf;
}

// ============================================================================
// Signed tail CCDF, evaluated at the data points themselves (no binning).
// ============================================================================

enum class TailSign { Positive, Negative };

struct TailCcdf {
    TailSign sign = TailSign::Positive;
    std::vector<double> magnitudes; // ascending
    std::vector<double> ccdf;       // P(value of this sign exceeds magnitude), > 0
    std::size_t n_sign = 0;         // number of samples of this sign
};

// For Positive uses the g > 0 values, for Negative the magnitudes of g < 0.
// ccdf(x) = #{values > x} / n_sign at every sorted data point; points whose
// exceedance count is zero (the sample maximum) are omitted so the curve
// stays strictly positive and ends at 1/n_sign.
inline TailCcdf tail_ccdf(std::span<const double> sample, TailSign sign) {
    TailCcdf out;
    out.sign = sign;
    std::vector<double> mags;
    for (double x : sample) {
        if (sign == TailSign::Positive && x > 0.0) mags.push_back(x);
        if (sign == TailSign::Negative && x < 0.0) mags.push_back(-x);
    }
    if (mags.size() < 10)
        throw InsufficientDataError("tail_ccdf: fewer than 10 samples of requested sign");
    std::sort(mags.begin(), mags.end());
    out.n_sign = mags.size();

    const double n = static_cast<double>(mags.size());
    for (std::size_t i = 0; i < mags.size(); ++i) {
        auto above = mags.end() - std::upper_bound(mags.begin() + static_cast<std::ptrdiff_t>(i),
                                                   mags.end(), mags[i]);
        if (above == 0) break; // ties with the maximum
        out.magnitudes.push_back(mags[i]);
        out.ccdf.push_back(static_cast<double>(above) / n);
    }
    return out;
}

} // namespace tickdist
