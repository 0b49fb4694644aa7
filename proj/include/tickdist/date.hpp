#pragma once

#include <chrono>
#include <cstdint>
#include <optional>

namespace tickdist {

// Calendar dates travel as packed YYYYMMDD integers (the tick-file encoding);
// ordering then coincides with numeric ordering.
using Date = std::int32_t;

inline constexpr int date_year(Date d) { return d / 10'000; }
inline constexpr int date_month(Date d) { return (d / 100) % 100; }
inline constexpr int date_day(Date d) { return d % 100; }

inline std::optional<Date> validate_date(Date d) {
    namespace chr = std::chrono;
    chr::year_month_day ymd{chr::year(date_year(d)), chr::month(static_cast<unsigned>(date_month(d))),
                            chr::day(static_cast<unsigned>(date_day(d)))};
    if (!ymd.ok()) return std::nullopt;
    return d;
}

inline Date add_days(Date d, int n) {
    namespace chr = std::chrono;
    chr::year_month_day ymd{chr::year(date_year(d)), chr::month(static_cast<unsigned>(date_month(d))),
                            chr::day(static_cast<unsigned>(date_day(d)))};
    chr::year_month_day out{chr::sys_days(ymd) + chr::days(n)};
    return static_cast<Date>(int(out.year()) * 10'000 + unsigned(out.month()) * 100 + unsigned(out.day()));
}

} // namespace tickdist
