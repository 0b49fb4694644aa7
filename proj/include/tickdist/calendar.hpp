#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tickdist/error.hpp"

namespace tickdist {

// Intraday timestamps are integer centiseconds since midnight (0.01 s ticks).
using CentiSec = std::int32_t;

inline constexpr CentiSec centisec_per_day = 8'640'000;
inline constexpr CentiSec centisec_per_minute = 6'000;

constexpr CentiSec hms_to_cs(int h, int m, int s) {
    return ((h * 60 + m) * 60 + s) * 100;
}

inline std::optional<CentiSec> parse_hms(std::string_view text) {
    int h = 0, m = 0, s = 0;
    if (text.size() != 8 || text[2] != ':' || text[5] != ':') return std::nullopt;
    auto dig = [&](std::size_t i) { return text[i] >= '0' && text[i] <= '9' ? text[i] - '0' : -1; };
    for (std::size_t i : {0u, 1u, 3u, 4u, 6u, 7u})
        if (dig(i) < 0) return std::nullopt;
    h = dig(0) * 10 + dig(1);
    m = dig(3) * 10 + dig(4);
    s = dig(6) * 10 + dig(7);
    if (h > 23 || m > 59 || s > 59) return std::nullopt;
    return hms_to_cs(h, m, s);
}

inline std::string format_hms(CentiSec t) {
    int total_s = t / 100;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", total_s / 3600, (total_s / 60) % 60, total_s % 60);
    return buf;
}

// Closed interval of intraday time. An event stamped exactly at the close
// (e.g. 15:00:00.00) still belongs to the session.
struct TimeWindow {
    CentiSec open = 0;
    CentiSec close = 0;

    bool contains(CentiSec t) const { return t >= open && t <= close; }
    double minutes() const { return static_cast<double>(close - open) / centisec_per_minute; }
};

// Exchange trading-day structure: one opening call auction followed by one or
// more continuous double-auction sessions. Defaults are the SZSE 2003 day:
// call auction 09:15-09:30, continuous trading 09:30-11:30 and 13:00-15:00.
struct SessionCalendar {
    TimeWindow call_auction{hms_to_cs(9, 15, 0), hms_to_cs(9, 30, 0)};
    std::vector<TimeWindow> continuous_sessions{
        {hms_to_cs(9, 30, 0), hms_to_cs(11, 30, 0)},
        {hms_to_cs(13, 0, 0), hms_to_cs(15, 0, 0)},
    };

    static SessionCalendar szse_2003() { return SessionCalendar{}; }

    // Index of the continuous session containing t, or -1.
    int session_of(CentiSec t) const {
        for (std::size_t i = 0; i < continuous_sessions.size(); ++i)
            if (continuous_sessions[i].contains(t)) return static_cast<int>(i);
        return -1;
    }

    double continuous_minutes_per_day() const {
        double m = 0.0;
        for (const auto& w : continuous_sessions) m += w.minutes();
        return m;
    }

    void validate() const {
        if (continuous_sessions.empty())
            throw ContractViolation("calendar: at least one continuous session required");
        CentiSec prev_close = -1;
        for (const auto& w : continuous_sessions) {
            if (w.open >= w.close || w.open < 0 || w.close >= centisec_per_day)
                throw ContractViolation("calendar: malformed session window " + format_hms(w.open) +
                                        "-" + format_hms(w.close));
            if (w.open <= prev_close)
                throw ContractViolation("calendar: session windows must be ordered and non-overlapping");
            prev_close = w.close;
        }
        if (call_auction.open > call_auction.close)
            throw ContractViolation("calendar: malformed call-auction window");
    }
};

// Calendar description file: one window per line, '#' comments allowed.
//   call    09:15:00-09:30:00
//   session 09:30:00-11:30:00
//   session 13:00:00-15:00:00
inline SessionCalendar parse_calendar(std::istream& in) {
    SessionCalendar cal;
    cal.continuous_sessions.clear();
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw IoError("calendar line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv(line);
        while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ')) sv.remove_suffix(1);
        while (!sv.empty() && sv.front() == ' ') sv.remove_prefix(1);
        if (sv.empty() || sv.front() == '#') continue;
        std::size_t sp = sv.find(' ');
        if (sp == std::string_view::npos) fail("expected '<kind> HH:MM:SS-HH:MM:SS'");
        std::string_view kind = sv.substr(0, sp);
        std::string_view rest = sv.substr(sp + 1);
        while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
        std::size_t dash = rest.find('-');
        if (dash == std::string_view::npos) fail("expected window 'HH:MM:SS-HH:MM:SS'");
        auto open = parse_hms(rest.substr(0, dash));
        auto close = parse_hms(rest.substr(dash + 1));
        if (!open || !close) fail("bad time of day");
        if (kind == "call") {
            cal.call_auction = {*open, *close};
        } else if (kind == "session") {
            cal.continuous_sessions.push_back({*open, *close});
        } else {
            fail("unknown window kind '" + std::string(kind) + "'");
        }
    }
    cal.validate();
    return cal;
}

} // namespace tickdist
