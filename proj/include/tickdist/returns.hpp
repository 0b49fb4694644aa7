#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tickdist/error.hpp"
#include "tickdist/tick_data.hpp"

namespace tickdist {

// ============================================================================
// Timescales
// ============================================================================

enum class TimescaleKind { EventTime, ClockTime };

// Delta counts trades (event time) or minutes (clock time).
struct TimescaleSpec {
    TimescaleKind kind = TimescaleKind::EventTime;
    int delta = 1;

    bool operator==(const TimescaleSpec&) const = default;

    std::string label() const {
        return (kind == TimescaleKind::EventTime ? "event:" : "clock:") + std::to_string(delta);
    }
    // Filename-safe variant ("event_4").
    std::string slug() const {
        return (kind == TimescaleKind::EventTime ? "event_" : "clock_") + std::to_string(delta);
    }
};

struct ReturnSeries {
    std::string instrument_id;
    TimescaleSpec timescale;
    std::vector<double> values;
};

// ============================================================================
// Event-time returns: ln S(t) - ln S(t - delta), both endpoints inside the
// same continuous session of the same trading day. Windows overlap (stride 1),
// so a session of n prices yields n - delta returns.
// ============================================================================

inline ReturnSeries event_returns(const MidpriceSeries& series, int delta) {
    if (delta < 1) throw ContractViolation("event_returns: delta must be >= 1");
    ReturnSeries out;
    out.instrument_id = series.instrument_id;
    out.timescale = {TimescaleKind::EventTime, delta};

    const auto& pts = series.points;
    std::size_t run_start = 0;
    for (std::size_t i = 0; i <= pts.size(); ++i) {
        bool boundary = i == pts.size() || (i > run_start && (pts[i].trade_date != pts[run_start].trade_date ||
                                                              pts[i].session != pts[run_start].session));
        if (!boundary) continue;
        for (std::size_t t = run_start + static_cast<std::size_t>(delta); t < i; ++t) {
            out.values.push_back(std::log(static_cast<double>(pts[t].mid)) -
                                 std::log(static_cast<double>(pts[t - delta].mid)));
        }
        run_start = i;
    }
    return out;
}

// ============================================================================
// Clock-time returns: previous-tick sampling on a delta-minute grid anchored
// at each session open; returns are ratios of consecutive grid samples. Grid
// marks before the session's first tick produce no sample, and the grid
// restarts at every session open (nothing spans the lunch break).
// ============================================================================

inline ReturnSeries clock_returns(const MidpriceSeries& series, int delta_minutes) {
    if (delta_minutes < 1) throw ContractViolation("clock_returns: delta must be >= 1");
    ReturnSeries out;
    out.instrument_id = series.instrument_id;
    out.timescale = {TimescaleKind::ClockTime, delta_minutes};

    const auto& pts = series.points;
    const CentiSec step = delta_minutes * centisec_per_minute;
    std::size_t run_start = 0;
    for (std::size_t i = 0; i <= pts.size(); ++i) {
        bool boundary = i == pts.size() || (i > run_start && (pts[i].trade_date != pts[run_start].trade_date ||
                                                              pts[i].session != pts[run_start].session));
        if (!boundary) continue;
        if (i > run_start) {
            const TimeWindow win = series.calendar.continuous_sessions[
                static_cast<std::size_t>(pts[run_start].session)];
            std::size_t next = run_start; // first point with timestamp > mark
            double prev_log = 0.0;
            bool have_prev = false;
            for (CentiSec mark = win.open; mark <= win.close; mark += step) {
                while (next < i && pts[next].timestamp <= mark) ++next;
                if (next == run_start) continue; // no tick at or before this mark yet
                double log_mid = std::log(static_cast<double>(pts[next - 1].mid));
                if (have_prev) out.values.push_back(log_mid - prev_log);
                prev_log = log_mid;
                have_prev = true;
                if (next == i) break; // last tick consumed; no stale repeats
            }
        }
        run_start = i;
    }
    return out;
}

// ============================================================================
// Standardization and pooling
// ============================================================================

struct StandardizedSeries {
    std::string instrument_id;
    TimescaleSpec timescale;
    std::vector<double> values;
    double mean = 0.0;
    double stdev = 0.0; // sample (n-1) standard deviation of the raw returns
};

// g(t) = (r(t) - mu) / sigma with the sample mean and sample (n-1) standard
// deviation of this series.
inline StandardizedSeries standardize(const ReturnSeries& series) {
    const auto& v = series.values;
    if (v.size() < 2)
        throw DegenerateSeriesError("standardize: need at least 2 returns for " + series.instrument_id);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    double stdev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    if (!(stdev > 0.0))
        throw DegenerateSeriesError("standardize: zero return dispersion for " + series.instrument_id);

    StandardizedSeries out;
    out.instrument_id = series.instrument_id;
    out.timescale = series.timescale;
    out.mean = mean;
    out.stdev = stdev;
    out.values.reserve(v.size());
    for (double x : v) out.values.push_back((x - mean) / stdev);
    return out;
}

struct InstrumentStats {
    std::string instrument_id;
    double mean = 0.0;
    double stdev = 0.0;
    std::size_t count = 0;
};

struct StandardizedEnsemble {
    TimescaleSpec timescale;
    std::vector<double> values;
    std::vector<InstrumentStats> per_instrument;
};

// Concatenates standardized series sharing one timescale, in input order.
inline StandardizedEnsemble pool_ensemble(std::span<const StandardizedSeries> series) {
    if (series.empty()) throw ContractViolation("pool_ensemble: no input series");
    StandardizedEnsemble out;
    out.timescale = series.front().timescale;
    for (const auto& s : series) {
        if (!(s.timescale == out.timescale))
            throw ContractViolation("pool_ensemble: mixed timescales (" + s.timescale.label() +
                                    " vs " + out.timescale.label() + ")");
        out.values.insert(out.values.end(), s.values.begin(), s.values.end());
        out.per_instrument.push_back({s.instrument_id, s.mean, s.stdev, s.values.size()});
    }
    return out;
}

} // namespace tickdist
