#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tickdist/calendar.hpp"
#include "tickdist/date.hpp"
#include "tickdist/error.hpp"
#include "tickdist/fixed.hpp"

namespace tickdist {

// ============================================================================
// Tick events
// ============================================================================

// One exchange event: best bid/ask state after the event. Quotes are validated
// at parse time, so downstream code may assume 0 < bid <= ask.
struct TickEvent {
    std::string instrument_id;
    Date trade_date = 0;
    CentiSec timestamp = 0; // centiseconds since midnight
    PriceE4 best_bid = 0;
    PriceE4 best_ask = 0;
};

// Exact arithmetic midpoint of the quotes.
inline PriceE4 midprice_e4(const TickEvent& e) { return (e.best_bid + e.best_ask) / 2; }

inline double midprice(const TickEvent& e) { return price_to_double(midprice_e4(e)); }

// ============================================================================
// Parsing the canonical tick-file format
// ============================================================================
// UTF-8 text, one record per line:
//   instrument_id,YYYYMMDD,timestamp_centiseconds,best_bid,best_ask
// Lines starting with '#' are comments. Prices carry at most 3 decimals.

struct TickParseStats {
    std::uint64_t total_records = 0; // non-comment, non-blank lines
    std::uint64_t accepted = 0;
    std::uint64_t rejected_malformed = 0;
    std::uint64_t rejected_crossed = 0;
    std::uint64_t rejected_nonpositive = 0;
    std::uint64_t out_of_session = 0;

    std::uint64_t rejected() const {
        return rejected_malformed + rejected_crossed + rejected_nonpositive;
    }
};

struct ParseIssue {
    std::uint64_t line_no = 0;
    std::string message;
};

struct TickParseResult {
    // Instruments in lexicographic id order; each group sorted by
    // (date, timestamp) with input order preserved among ties.
    std::vector<std::pair<std::string, std::vector<TickEvent>>> by_instrument;
    TickParseStats stats;
    std::vector<ParseIssue> issues;

    const std::vector<TickEvent>* find(std::string_view id) const {
        for (const auto& [k, v] : by_instrument)
            if (k == id) return &v;
        return nullptr;
    }
};

namespace detail {

inline bool split_fields(std::string_view line, std::string_view (&out)[5]) {
    std::size_t start = 0;
    int n = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            if (n == 5) return false;
            out[n++] = line.substr(start, i - start);
            start = i + 1;
        }
    }
    return n == 5;
}

template <typename Int>
inline bool parse_int(std::string_view s, Int& out) {
    if (s.empty()) return false;
    auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

} // namespace detail

// Parses the stream, validating every record. Malformed, crossed, or
// non-positive records are rejected and counted; well-formed records outside
// the continuous sessions (call auction, lunch, after-hours) are dropped and
// counted separately. Issues carry 1-based line numbers.
inline TickParseResult parse_ticks(std::istream& in, const SessionCalendar& calendar) {
    calendar.validate();
    TickParseResult result;
    std::map<std::string, std::vector<TickEvent>, std::less<>> groups;
    std::string line;
    std::uint64_t line_no = 0;

    auto reject = [&](std::uint64_t& counter, const std::string& why) {
        ++counter;
        result.issues.push_back({line_no, why});
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv(line);
        if (!sv.empty() && sv.back() == '\r') sv.remove_suffix(1);
        if (sv.empty()) continue;
        if (sv.front() == '#') continue;
        ++result.stats.total_records;

        std::string_view f[5];
        if (!detail::split_fields(sv, f)) {
            reject(result.stats.rejected_malformed, "expected 5 comma-separated fields");
            continue;
        }
        if (f[0].empty()) {
            reject(result.stats.rejected_malformed, "empty instrument id");
            continue;
        }
        Date date = 0;
        if (!detail::parse_int(f[1], date) || !validate_date(date)) {
            reject(result.stats.rejected_malformed, "bad trade date '" + std::string(f[1]) + "'");
            continue;
        }
        CentiSec ts = 0;
        if (!detail::parse_int(f[2], ts) || ts < 0 || ts >= centisec_per_day) {
            reject(result.stats.rejected_malformed, "timestamp outside [0, 8640000) centiseconds");
            continue;
        }
        auto bid = parse_price_e4(f[3]);
        auto ask = parse_price_e4(f[4]);
        if (!bid || !ask) {
            reject(result.stats.rejected_malformed, "unparseable price");
            continue;
        }
        if (*bid <= 0 || *ask <= 0) {
            reject(result.stats.rejected_nonpositive, "non-positive price");
            continue;
        }
        if (*bid > *ask) {
            reject(result.stats.rejected_crossed, "crossed quote (bid > ask)");
            continue;
        }
        if (calendar.session_of(ts) < 0) {
            ++result.stats.out_of_session;
            continue;
        }
        auto& vec = groups[std::string(f[0])];
        vec.push_back(TickEvent{std::string(f[0]), date, ts, *bid, *ask});
        ++result.stats.accepted;
    }

    for (auto& [id, events] : groups) {
        std::stable_sort(events.begin(), events.end(), [](const TickEvent& a, const TickEvent& b) {
            return a.trade_date != b.trade_date ? a.trade_date < b.trade_date : a.timestamp < b.timestamp;
        });
        result.by_instrument.emplace_back(id, std::move(events));
    }
    return result;
}

inline void serialize_tick(std::ostream& out, const TickEvent& e) {
    out << e.instrument_id << ',' << e.trade_date << ',' << e.timestamp << ','
        << format_price_e4(e.best_bid) << ',' << format_price_e4(e.best_ask) << '\n';
}

inline void serialize_ticks(std::ostream& out, std::span<const TickEvent> events) {
    for (const auto& e : events) serialize_tick(out, e);
}

// ============================================================================
// Midprice series
// ============================================================================

struct MidpricePoint {
    Date trade_date = 0;
    CentiSec timestamp = 0;
    PriceE4 mid = 0;
    int session = 0; // index into calendar.continuous_sessions
};

// Per-instrument ordered midprice path. Points never leave the continuous
// sessions; the calendar rides along for session geometry (clock grids,
// trading frequency).
struct MidpriceSeries {
    std::string instrument_id;
    SessionCalendar calendar;
    std::vector<MidpricePoint> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

// Events must already be validated and sorted (parse_ticks output).
inline MidpriceSeries build_midprice_series(std::string instrument_id,
                                            std::span<const TickEvent> events,
                                            const SessionCalendar& calendar) {
    calendar.validate();
    MidpriceSeries series;
    series.instrument_id = std::move(instrument_id);
    series.calendar = calendar;
    series.points.reserve(events.size());
    for (const auto& e : events) {
        int session = calendar.session_of(e.timestamp);
        if (session < 0)
            throw ContractViolation("build_midprice_series: event outside continuous sessions at " +
                                    format_hms(e.timestamp));
        series.points.push_back({e.trade_date, e.timestamp, midprice_e4(e), session});
    }
    return series;
}

// Average number of events per continuous-session minute, with the
// denominator spanning every calendar day present in the data.
inline double trading_frequency(const MidpriceSeries& series) {
    if (series.empty())
        throw DegenerateSeriesError("trading_frequency: empty series for " + series.instrument_id);
    std::uint64_t days = 0;
    Date prev = -1;
    for (const auto& p : series.points) {
        if (p.trade_date != prev) {
            ++days;
            prev = p.trade_date;
        }
    }
    double minutes = static_cast<double>(days) * series.calendar.continuous_minutes_per_day();
    return static_cast<double>(series.points.size()) / minutes;
}

} // namespace tickdist
