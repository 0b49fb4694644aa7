#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tickdist/error.hpp"
#include "tickdist/fit.hpp"
#include "tickdist/histogram.hpp"
#include "tickdist/moments.hpp"
#include "tickdist/report.hpp"
#include "tickdist/returns.hpp"
#include "tickdist/synth.hpp"
#include "tickdist/tick_data.hpp"

namespace tickdist {

// ============================================================================
// Pipeline configuration
// ============================================================================

struct TimescaleRequest {
    TimescaleSpec spec;
    ScalingRange pos_range;
    ScalingRange neg_range;
};

// Standard per-timescale scaling ranges used when a request does not override
// them (event Δt in trades, clock Δt in minutes).
inline std::vector<TimescaleRequest> default_event_requests() {
    return {
        {{TimescaleKind::EventTime, 1}, {2.4, 60.3}, {2.1, 60.3}},
        {{TimescaleKind::EventTime, 2}, {2.6, 45.7}, {2.4, 45.7}},
        {{TimescaleKind::EventTime, 4}, {2.6, 33.9}, {2.4, 33.9}},
        {{TimescaleKind::EventTime, 8}, {2.6, 25.1}, {2.4, 28.2}},
        {{TimescaleKind::EventTime, 16}, {2.6, 15.8}, {2.4, 19.2}},
        {{TimescaleKind::EventTime, 32}, {2.6, 11.9}, {2.6, 13.1}},
    };
}

inline std::vector<TimescaleRequest> default_clock_requests() {
    return {
        {{TimescaleKind::ClockTime, 1}, {2.4, 28.1}, {2.1, 23.2}},
        {{TimescaleKind::ClockTime, 2}, {2.8, 23.2}, {2.1, 19.1}},
        {{TimescaleKind::ClockTime, 3}, {2.8, 17.8}, {2.4, 17.4}},
        {{TimescaleKind::ClockTime, 4}, {2.8, 14.4}, {2.4, 17.4}},
        {{TimescaleKind::ClockTime, 5}, {2.8, 13.2}, {2.4, 15.8}},
    };
}

inline std::vector<TimescaleRequest> default_timescale_requests() {
    auto reqs = default_event_requests();
    auto clock = default_clock_requests();
    reqs.insert(reqs.end(), clock.begin(), clock.end());
    return reqs;
}

// Looks up the standard range pair for a bare timescale; falls back to
// [2.4, sample max] on both sides for non-tabulated deltas.
inline TimescaleRequest default_request_for(TimescaleSpec spec) {
    for (const auto& r : default_timescale_requests())
        if (r.spec == spec) return r;
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {spec, {2.4, inf}, {2.4, inf}};
}

struct PipelineConfig {
    int version = 1;
    std::vector<std::string> tick_files;            // either file input ...
    std::optional<SyntheticStreamSpec> synthetic;   // ... or a generated stream
    SessionCalendar calendar = SessionCalendar::szse_2003();
    std::vector<TimescaleRequest> timescales = default_timescale_requests();
    PdfBinConfig binning;
    TailFitOptions tail_fit;
    bool fix_m_to_zero = true;
    bool dump_returns = false; // per-instrument return series as one value per line
    std::string output_dir = "out";
};

// ============================================================================
// JSON config document (versioned; see README for the full schema)
// ============================================================================

namespace detail {

inline TimeWindow window_from_string(const std::string& s) {
    auto dash = s.find('-');
    if (dash == std::string::npos) throw IoError("config: window must be 'HH:MM:SS-HH:MM:SS'");
    auto open = parse_hms(std::string_view(s).substr(0, dash));
    auto close = parse_hms(std::string_view(s).substr(dash + 1));
    if (!open || !close) throw IoError("config: bad time in window '" + s + "'");
    return {*open, *close};
}

inline std::string window_to_string(const TimeWindow& w) {
    return format_hms(w.open) + "-" + format_hms(w.close);
}

inline SessionCalendar calendar_from_json(const nlohmann::json& j) {
    SessionCalendar cal;
    if (j.contains("call")) cal.call_auction = window_from_string(j.at("call").get<std::string>());
    if (j.contains("sessions")) {
        cal.continuous_sessions.clear();
        for (const auto& s : j.at("sessions"))
            cal.continuous_sessions.push_back(window_from_string(s.get<std::string>()));
    }
    cal.validate();
    return cal;
}

inline nlohmann::json calendar_to_json(const SessionCalendar& cal) {
    nlohmann::json sessions = nlohmann::json::array();
    for (const auto& w : cal.continuous_sessions) sessions.push_back(window_to_string(w));
    return {{"call", window_to_string(cal.call_auction)}, {"sessions", sessions}};
}

inline GeneratorModel model_from_json(const nlohmann::json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "student")
        return StudentParams{j.at("alpha").get<double>(), j.value("m", 0.0), j.at("L").get<double>()};
    if (type == "gaussian")
        return GaussianParams{j.value("mean", 0.0), j.at("stdev").get<double>()};
    if (type == "stretched_exp")
        return StretchedExpParams{j.at("c").get<double>(), j.at("r0").get<double>()};
    if (type == "pareto")
        return ParetoParams{j.at("alpha").get<double>(), j.value("x_min", 1.0)};
    throw IoError("config: unknown generator model '" + type + "'");
}

inline nlohmann::json model_to_json(const GeneratorModel& model) {
    if (const auto* s = std::get_if<StudentParams>(&model))
        return {{"type", "student"}, {"alpha", s->alpha}, {"m", s->m}, {"L", s->L}};
    if (const auto* g = std::get_if<GaussianParams>(&model))
        return {{"type", "gaussian"}, {"mean", g->mean}, {"stdev", g->stdev}};
    if (const auto* e = std::get_if<StretchedExpParams>(&model))
        return {{"type", "stretched_exp"}, {"c", e->c}, {"r0", e->r0}};
    const auto& p = std::get<ParetoParams>(model);
    return {{"type", "pareto"}, {"alpha", p.alpha}, {"x_min", p.x_min}};
}

inline PriceE4 price_from_json(const nlohmann::json& j, const char* what) {
    if (j.is_string()) {
        auto p = parse_price_e4(j.get<std::string>());
        if (!p) throw IoError(std::string("config: bad decimal price for ") + what);
        return *p;
    }
    return static_cast<PriceE4>(std::llround(j.get<double>() * price_scale));
}

} // namespace detail

inline SyntheticStreamSpec synthetic_spec_from_json(const nlohmann::json& j) {
    SyntheticStreamSpec spec;
    spec.instrument_id = j.value("instrument_id", spec.instrument_id);
    spec.first_date = j.at("first_date").get<Date>();
    spec.n_days = j.at("days").get<int>();
    spec.trades_per_minute = j.at("trades_per_minute").get<double>();
    spec.return_model = detail::model_from_json(j.at("model"));
    if (j.contains("initial_price"))
        spec.initial_price = detail::price_from_json(j.at("initial_price"), "initial_price");
    if (j.contains("calendar")) spec.calendar = detail::calendar_from_json(j.at("calendar"));
    spec.seed = j.value("seed", std::uint64_t{0});
    return spec;
}

inline nlohmann::json synthetic_spec_to_json(const SyntheticStreamSpec& spec) {
    return {
        {"instrument_id", spec.instrument_id},
        {"first_date", spec.first_date},
        {"days", spec.n_days},
        {"trades_per_minute", spec.trades_per_minute},
        {"model", detail::model_to_json(spec.return_model)},
        {"initial_price", format_price_e4(spec.initial_price)},
        {"calendar", detail::calendar_to_json(spec.calendar)},
        {"seed", spec.seed},
    };
}

inline PipelineConfig pipeline_config_from_json(const nlohmann::json& doc) {
    PipelineConfig config;
    config.version = doc.value("version", 1);
    if (config.version != 1)
        throw IoError("config: unsupported version " + std::to_string(config.version));

    if (doc.contains("calendar")) config.calendar = detail::calendar_from_json(doc.at("calendar"));

    const auto& input = doc.at("input");
    if (input.contains("tick_files")) {
        for (const auto& f : input.at("tick_files")) config.tick_files.push_back(f.get<std::string>());
    } else if (input.contains("synthetic")) {
        auto spec = synthetic_spec_from_json(input.at("synthetic"));
        if (!input.at("synthetic").contains("calendar")) spec.calendar = config.calendar;
        config.synthetic = std::move(spec);
    } else {
        throw IoError("config: input needs 'tick_files' or 'synthetic'");
    }

    if (doc.contains("timescales")) {
        config.timescales.clear();
        for (const auto& t : doc.at("timescales")) {
            TimescaleSpec spec;
            std::string kind = t.at("kind").get<std::string>();
            if (kind != "event" && kind != "clock")
                throw IoError("config: timescale kind must be 'event' or 'clock'");
            spec.kind = kind == "event" ? TimescaleKind::EventTime : TimescaleKind::ClockTime;
            spec.delta = t.at("delta").get<int>();
            TimescaleRequest req = default_request_for(spec);
            auto read_range = [&](const char* key, ScalingRange& into) {
                if (!t.contains(key)) return;
                const auto& r = t.at(key);
                into.lo = r.at(0).get<double>();
                into.hi = r.at(1).is_null() ? std::numeric_limits<double>::infinity()
                                            : r.at(1).get<double>();
                if (!(into.lo > 0.0) || !(into.hi > into.lo))
                    throw IoError(std::string("config: bad ") + key + " for " + spec.label());
            };
            read_range("pos_range", req.pos_range);
            read_range("neg_range", req.neg_range);
            config.timescales.push_back(req);
        }
    }
    if (config.timescales.empty()) throw IoError("config: at least one timescale required");

    if (doc.contains("binning")) {
        const auto& b = doc.at("binning");
        config.binning.g_lo = b.value("g_lo", config.binning.g_lo);
        config.binning.log_bins_per_side = b.value("log_bins_per_side", config.binning.log_bins_per_side);
        config.binning.linear_bins = b.value("linear_bins", config.binning.linear_bins);
        config.binning.tail_quantile = b.value("tail_quantile", config.binning.tail_quantile);
    }
    if (doc.contains("tail_fit")) {
        const auto& t = doc.at("tail_fit");
        config.tail_fit.points_per_decade = t.value("points_per_decade", config.tail_fit.points_per_decade);
        config.tail_fit.min_exceedances = t.value("min_exceedances", config.tail_fit.min_exceedances);
    }
    config.fix_m_to_zero = doc.value("fix_m_to_zero", true);
    config.dump_returns = doc.value("dump_returns", false);
    config.output_dir = doc.value("output_dir", config.output_dir);
    return config;
}

inline PipelineConfig load_pipeline_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("config " + path + ": " + e.what());
    }
    return pipeline_config_from_json(doc);
}

// ============================================================================
// Pipeline driver
// ============================================================================

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_degraded = 2;

struct PipelineResult {
    std::vector<ReportRow> rows;
    TickParseStats parse_stats;
    std::vector<std::string> warnings;
    int exit_code = exit_ok;
};

namespace detail {

inline void write_curve_files(const std::filesystem::path& dir, const std::string& slug,
                              const EmpiricalPdf* pdf, const TailCcdf* pos, const TailCcdf* neg) {
    auto open = [&](const std::string& name) {
        std::ofstream out(dir / name);
        if (!out) throw IoError("cannot write " + (dir / name).string());
        return out;
    };
    if (pdf) {
        auto out = open("pdf_" + slug + ".csv");
        out << "center,density,count\n";
        for (std::size_t k = 0; k < pdf->bin_count(); ++k)
            out << format_sig(pdf->centers[k], 12) << ',' << format_sig(pdf->density[k], 12) << ','
                << pdf->counts[k] << '\n';
    }
    auto write_ccdf = [&](const TailCcdf& c, const std::string& name) {
        auto out = open(name);
        out << "magnitude,ccdf\n";
        for (std::size_t i = 0; i < c.magnitudes.size(); ++i)
            out << format_sig(c.magnitudes[i], 12) << ',' << format_sig(c.ccdf[i], 12) << '\n';
    };
    if (pos) write_ccdf(*pos, "ccdf_pos_" + slug + ".csv");
    if (neg) write_ccdf(*neg, "ccdf_neg_" + slug + ".csv");
}

} // namespace detail

// Runs returns -> standardize -> pool -> moments -> pdf/ccdf -> fits for one
// timescale over prepared midprice series. Instruments with fewer than two
// returns at this timescale are skipped with a warning; genuine module errors
// (zero dispersion, say) propagate with context attached.
inline ReportRow analyze_timescale(std::span<const MidpriceSeries> instruments,
                                   const TimescaleRequest& request, const PipelineConfig& config,
                                   std::vector<std::string>& warnings,
                                   const std::filesystem::path* curve_dir = nullptr) {
    ReportRow row;
    row.timescale = request.spec;
    row.pos.range = request.pos_range;
    row.neg.range = request.neg_range;

    std::vector<StandardizedSeries> standardized;
    for (const auto& series : instruments) {
        ReturnSeries returns = request.spec.kind == TimescaleKind::EventTime
                                   ? event_returns(series, request.spec.delta)
                                   : clock_returns(series, request.spec.delta);
        if (returns.values.size() < 2) {
            warnings.push_back(request.spec.label() + ": " + series.instrument_id +
                               " has too few returns, skipped");
            continue;
        }
        if (config.dump_returns && curve_dir) {
            std::ofstream out(*curve_dir /
                              ("returns_" + series.instrument_id + "_" + request.spec.slug() + ".txt"));
            for (double v : returns.values) out << detail::format_sig(v, 12) << '\n';
        }
        try {
            standardized.push_back(standardize(returns));
        } catch (const DegenerateSeriesError& e) {
            throw DegenerateSeriesError(request.spec.label() + ": " + e.what());
        }
    }
    if (standardized.empty()) {
        warnings.push_back(request.spec.label() + ": no instrument produced returns");
        return row;
    }

    StandardizedEnsemble ensemble = pool_ensemble(standardized);
    row.pooled_count = ensemble.values.size();

    if (ensemble.values.size() >= 4) {
        MomentStats ms = moments(ensemble.values);
        row.skewness = ms.skewness;
        row.kurtosis = ms.kurtosis;
    } else {
        warnings.push_back(request.spec.label() + ": too few pooled returns for moments");
    }

    const EmpiricalPdf* pdf_ptr = nullptr;
    const TailCcdf* pos_ptr = nullptr;
    const TailCcdf* neg_ptr = nullptr;
    EmpiricalPdf pdf;
    TailCcdf pos_ccdf, neg_ccdf;

    try {
        pdf = empirical_pdf(ensemble.values, config.binning);
        pdf_ptr = &pdf;
        StudentFit fit = fit_student(pdf, config.fix_m_to_zero);
        row.student_alpha = fit.params.alpha;
        row.student_l = fit.params.L;
        row.student_alpha_stderr = fit.alpha_stderr;
        row.student_converged = fit.converged;
        if (!fit.converged)
            warnings.push_back(request.spec.label() + ": Student fit did not converge");
    } catch (const Error& e) {
        warnings.push_back(request.spec.label() + ": Student fit failed: " + e.what());
    }

    auto fit_side = [&](TailSign sign, const ScalingRange& range, TailSummary& into,
                        TailCcdf& storage, const TailCcdf** keep) {
        try {
            storage = tail_ccdf(ensemble.values, sign);
            *keep = &storage;
            TailFit fit = fit_tail(storage, range, config.tail_fit);
            into.exponent = fit.exponent;
            into.stderr_ = fit.stderr_;
            into.r_squared = fit.r_squared;
            into.range = fit.range;
            into.n_points = fit.n_points;
            into.valid = true;
        } catch (const Error& e) {
            warnings.push_back(request.spec.label() + ": " +
                               (sign == TailSign::Positive ? "positive" : "negative") +
                               " tail fit failed: " + e.what());
        }
    };
    fit_side(TailSign::Positive, request.pos_range, row.pos, pos_ccdf, &pos_ptr);
    fit_side(TailSign::Negative, request.neg_range, row.neg, neg_ccdf, &neg_ptr);

    if (curve_dir) detail::write_curve_files(*curve_dir, request.spec.slug(), pdf_ptr, pos_ptr, neg_ptr);
    return row;
}

// Assembles per-instrument midprice series from the configured input.
inline std::pair<std::vector<MidpriceSeries>, TickParseStats> load_input(const PipelineConfig& config) {
    std::map<std::string, std::vector<TickEvent>, std::less<>> merged;
    TickParseStats stats;

    if (config.synthetic) {
        SyntheticStreamSpec spec = *config.synthetic;
        auto events = generate_tick_stream(spec);
        stats.total_records = stats.accepted = events.size();
        merged[spec.instrument_id] = std::move(events);
    } else {
        for (const auto& path : config.tick_files) {
            std::ifstream in(path, std::ios::binary);
            if (!in) throw IoError("cannot open tick file: " + path);
            TickParseResult result = parse_ticks(in, config.calendar);
            stats.total_records += result.stats.total_records;
            stats.accepted += result.stats.accepted;
            stats.rejected_malformed += result.stats.rejected_malformed;
            stats.rejected_crossed += result.stats.rejected_crossed;
            stats.rejected_nonpositive += result.stats.rejected_nonpositive;
            stats.out_of_session += result.stats.out_of_session;
            for (auto& [id, events] : result.by_instrument) {
                auto& dst = merged[id];
                dst.insert(dst.end(), events.begin(), events.end());
            }
        }
    }

    std::vector<MidpriceSeries> instruments;
    for (auto& [id, events] : merged) {
        std::stable_sort(events.begin(), events.end(), [](const TickEvent& a, const TickEvent& b) {
            return a.trade_date != b.trade_date ? a.trade_date < b.trade_date : a.timestamp < b.timestamp;
        });
        instruments.push_back(build_midprice_series(id, events, config.calendar));
    }
    return {std::move(instruments), stats};
}

// Full run: ingest, analyze every configured timescale, and write report.csv,
// report.json, and per-timescale curve files into output_dir. Exit code 2
// means the pipeline ran but some fit is missing or unconverged.
inline PipelineResult run_pipeline(const PipelineConfig& config) {
    config.calendar.validate();
    PipelineResult result;

    std::filesystem::path out_dir(config.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

    auto [instruments, stats] = load_input(config);
    result.parse_stats = stats;

    if (instruments.empty()) {
        result.warnings.push_back("input produced no events; report is empty");
    } else {
        for (const auto& request : config.timescales)
            result.rows.push_back(
                analyze_timescale(instruments, request, config, result.warnings, &out_dir));
    }

    {
        std::ofstream csv(out_dir / "report.csv", std::ios::binary);
        if (!csv) throw IoError("cannot write " + (out_dir / "report.csv").string());
        write_report_csv(csv, result.rows);
        std::ofstream json(out_dir / "report.json", std::ios::binary);
        if (!json) throw IoError("cannot write " + (out_dir / "report.json").string());
        write_report_json(json, result.rows);
    }

    bool degraded = result.rows.empty();
    for (const auto& row : result.rows) degraded = degraded || row.degraded();
    result.exit_code = degraded ? exit_degraded : exit_ok;
    return result;
}

} // namespace tickdist
