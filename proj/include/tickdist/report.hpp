#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tickdist/error.hpp"
#include "tickdist/fit.hpp"
#include "tickdist/returns.hpp"

namespace tickdist {

// ============================================================================
// Report rows: one per timescale, columns mirroring the standard table
//   dt, skewness, kurtosis, L, alpha,
//   pos_range, alpha_pos, alpha_pos_stderr,
//   neg_range, alpha_neg, alpha_neg_stderr
// ============================================================================

struct TailSummary {
    double exponent = std::numeric_limits<double>::quiet_NaN();
    double stderr_ = std::numeric_limits<double>::quiet_NaN();
    double r_squared = std::numeric_limits<double>::quiet_NaN();
    ScalingRange range;
    int n_points = 0;
    bool valid = false;
};

struct ReportRow {
    TimescaleSpec timescale;
    double skewness = std::numeric_limits<double>::quiet_NaN();
    double kurtosis = std::numeric_limits<double>::quiet_NaN();
    double student_l = std::numeric_limits<double>::quiet_NaN();
    double student_alpha = std::numeric_limits<double>::quiet_NaN();
    double student_alpha_stderr = std::numeric_limits<double>::quiet_NaN();
    bool student_converged = false;
    std::size_t pooled_count = 0;
    TailSummary pos;
    TailSummary neg;

    bool degraded() const { return !student_converged || !pos.valid || !neg.valid; }
};

namespace detail {

inline std::string format_sig(double v, int digits) {
    if (std::isnan(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

inline std::string format_range(const ScalingRange& r) {
    return format_sig(r.lo, 4) + ":" + format_sig(r.hi, 4);
}

} // namespace detail

inline constexpr const char* report_csv_header =
    "dt,skewness,kurtosis,L,alpha,pos_range,alpha_pos,alpha_pos_stderr,"
    "neg_range,alpha_neg,alpha_neg_stderr";

// Exponents carry 4 significant digits, their standard errors 2.
inline void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
    using detail::format_range;
    using detail::format_sig;
    out << report_csv_header << '\n';
    for (const auto& row : rows) {
        out << row.timescale.label() << ',' << format_sig(row.skewness, 4) << ','
            << format_sig(row.kurtosis, 4) << ',' << format_sig(row.student_l, 4) << ','
            << format_sig(row.student_alpha, 4) << ',' << format_range(row.pos.range) << ','
            << format_sig(row.pos.exponent, 4) << ',' << format_sig(row.pos.stderr_, 2) << ','
            << format_range(row.neg.range) << ',' << format_sig(row.neg.exponent, 4) << ','
            << format_sig(row.neg.stderr_, 2) << '\n';
    }
}

namespace detail {

inline nlohmann::json sig_json(double v, int digits) {
    if (std::isnan(v)) return nullptr;
    return nlohmann::json::parse(format_sig(v, digits));
}

inline nlohmann::json tail_json(const TailSummary& t) {
    return {
        {"range", {sig_json(t.range.lo, 4), sig_json(t.range.hi, 4)}},
        {"exponent", sig_json(t.exponent, 4)},
        {"stderr", sig_json(t.stderr_, 2)},
        {"r_squared", sig_json(t.r_squared, 4)},
        {"n_points", t.n_points},
        {"valid", t.valid},
    };
}

inline TailSummary tail_from_json(const nlohmann::json& j) {
    TailSummary t;
    auto num = [](const nlohmann::json& v) {
        return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    };
    t.range.lo = num(j.at("range").at(0));
    t.range.hi = num(j.at("range").at(1));
    t.exponent = num(j.at("exponent"));
    t.stderr_ = num(j.at("stderr"));
    t.r_squared = num(j.at("r_squared"));
    t.n_points = j.at("n_points").get<int>();
    t.valid = j.at("valid").get<bool>();
    return t;
}

} // namespace detail

inline nlohmann::json report_to_json(std::span<const ReportRow> rows) {
    using detail::sig_json;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
        arr.push_back({
            {"dt", row.timescale.label()},
            {"skewness", sig_json(row.skewness, 4)},
            {"kurtosis", sig_json(row.kurtosis, 4)},
            {"L", sig_json(row.student_l, 4)},
            {"alpha", sig_json(row.student_alpha, 4)},
            {"alpha_stderr", sig_json(row.student_alpha_stderr, 2)},
            {"student_converged", row.student_converged},
            {"pooled_count", row.pooled_count},
            {"pos", detail::tail_json(row.pos)},
            {"neg", detail::tail_json(row.neg)},
        });
    }
    return {{"rows", arr}};
}

inline void write_report_json(std::ostream& out, std::span<const ReportRow> rows) {
    out << report_to_json(rows).dump(2) << '\n';
}

inline std::vector<ReportRow> parse_report_json(std::istream& in) {
    nlohmann::json doc = nlohmann::json::parse(in);
    std::vector<ReportRow> rows;
    auto num = [](const nlohmann::json& v) {
        return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    };
    for (const auto& j : doc.at("rows")) {
        ReportRow row;
        std::string dt = j.at("dt").get<std::string>();
        auto colon = dt.find(':');
        if (colon == std::string::npos) throw IoError("report: bad dt label '" + dt + "'");
        std::string kind = dt.substr(0, colon);
        row.timescale.kind = kind == "event" ? TimescaleKind::EventTime : TimescaleKind::ClockTime;
        if (kind != "event" && kind != "clock") throw IoError("report: bad dt label '" + dt + "'");
        row.timescale.delta = std::stoi(dt.substr(colon + 1));
        row.skewness = num(j.at("skewness"));
        row.kurtosis = num(j.at("kurtosis"));
        row.student_l = num(j.at("L"));
        row.student_alpha = num(j.at("alpha"));
        row.student_alpha_stderr = num(j.at("alpha_stderr"));
        row.student_converged = j.at("student_converged").get<bool>();
        row.pooled_count = j.at("pooled_count").get<std::size_t>();
        row.pos = detail::tail_from_json(j.at("pos"));
        row.neg = detail::tail_from_json(j.at("neg"));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace tickdist
