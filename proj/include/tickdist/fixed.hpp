#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace tickdist {

// Prices are exact decimals with at most 3 decimal places, stored as integer
// multiples of 1e-4 currency units. Quotes are multiples of 10 in this scale,
// so an exact midpoint (half-tick, 0.0005-resolution would never be needed;
// 0.00005-resolution is one more halving away) always stays representable.
using PriceE4 = std::int64_t;

inline constexpr PriceE4 price_scale = 10'000;

inline double price_to_double(PriceE4 p) { return static_cast<double>(p) / price_scale; }

// Parses a positive decimal price with at most 3 decimal places.
// Returns nullopt on any malformation (sign, exponent, 4+ decimals, empty).
inline std::optional<PriceE4> parse_price_e4(std::string_view text) {
    if (text.empty() || text.size() > 24) return std::nullopt;
    std::size_t dot = text.find('.');
    std::string_view int_part = text.substr(0, dot == std::string_view::npos ? text.size() : dot);
    std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (int_part.empty() || frac_part.size() > 3) return std::nullopt;
    if (dot != std::string_view::npos && frac_part.empty()) return std::nullopt;

    std::int64_t whole = 0;
    auto r = std::from_chars(int_part.data(), int_part.data() + int_part.size(), whole);
    if (r.ec != std::errc() || r.ptr != int_part.data() + int_part.size()) return std::nullopt;

    std::int64_t frac = 0;
    if (!frac_part.empty()) {
        auto rf = std::from_chars(frac_part.data(), frac_part.data() + frac_part.size(), frac);
        if (rf.ec != std::errc() || rf.ptr != frac_part.data() + frac_part.size()) return std::nullopt;
        for (std::size_t i = frac_part.size(); i < 3; ++i) frac *= 10;
    }
    return whole * price_scale + frac * 10;
}

// Canonical rendering: minimum two decimals, three only when the third digit
// is nonzero. Matches what parse_price_e4 accepts, so accepted records
// round-trip byte-for-byte.
inline std::string format_price_e4(PriceE4 p) {
    char buf[32];
    std::int64_t whole = p / price_scale;
    std::int64_t rem = p % price_scale; // multiples of 10 for parsed prices
    int n;
    if (rem % 100 == 0) {
        n = std::snprintf(buf, sizeof(buf), "%lld.%02lld",
                          static_cast<long long>(whole), static_cast<long long>(rem / 100));
    } else {
        n = std::snprintf(buf, sizeof(buf), "%lld.%03lld",
                          static_cast<long long>(whole), static_cast<long long>(rem / 10));
    }
    return std::string(buf, static_cast<std::size_t>(n));
}

} // namespace tickdist
