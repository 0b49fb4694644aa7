// tickdist command-line driver: analyze / synth / fit subcommands.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tickdist/tickdist.hpp"

namespace {

using namespace tickdist;

// "--timescale event:1,2,4" -> requests with the standard ranges per delta.
std::vector<TimescaleRequest> parse_timescale_flag(const std::string& arg) {
    auto colon = arg.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--timescale", "expected '<event|clock>:<d1,d2,...>'");
    std::string kind = arg.substr(0, colon);
    if (kind != "event" && kind != "clock")
        throw CLI::ValidationError("--timescale", "kind must be 'event' or 'clock'");
    std::vector<TimescaleRequest> out;
    std::stringstream deltas(arg.substr(colon + 1));
    std::string item;
    while (std::getline(deltas, item, ',')) {
        int delta = std::stoi(item);
        if (delta < 1) throw CLI::ValidationError("--timescale", "delta must be >= 1");
        out.push_back(default_request_for(
            {kind == "event" ? TimescaleKind::EventTime : TimescaleKind::ClockTime, delta}));
    }
    if (out.empty()) throw CLI::ValidationError("--timescale", "no deltas given");
    return out;
}

int run_analyze(const std::string& config_path, const std::string& calendar_path,
                const std::vector<std::string>& timescale_flags, const std::string& out_dir_flag,
                bool dump_returns) {
    PipelineConfig config = load_pipeline_config(config_path);

    if (!calendar_path.empty()) {
        std::ifstream in(calendar_path);
        if (!in) throw IoError("cannot open calendar file: " + calendar_path);
        config.calendar = parse_calendar(in);
        if (config.synthetic) config.synthetic->calendar = config.calendar;
    }
    if (!timescale_flags.empty()) {
        config.timescales.clear();
        for (const auto& flag : timescale_flags) {
            auto reqs = parse_timescale_flag(flag);
            config.timescales.insert(config.timescales.end(), reqs.begin(), reqs.end());
        }
    }
    if (const char* env = std::getenv("TICKDIST_OUT_DIR"); env && *env) config.output_dir = env;
    if (!out_dir_flag.empty()) config.output_dir = out_dir_flag;
    if (dump_returns) config.dump_returns = true;

    PipelineResult result = run_pipeline(config);

    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "records: " << result.parse_stats.total_records
              << " accepted: " << result.parse_stats.accepted
              << " rejected: " << result.parse_stats.rejected()
              << " out_of_session: " << result.parse_stats.out_of_session << "\n";
    write_report_csv(std::cout, result.rows);
    std::cout << "report written to " << config.output_dir << "/report.{csv,json}\n";
    return result.exit_code;
}

int run_synth(const std::string& spec_path, const std::string& out_path) {
    std::ifstream in(spec_path);
    if (!in) throw IoError("cannot open spec file: " + spec_path);
    SyntheticStreamSpec spec = synthetic_spec_from_json(nlohmann::json::parse(in));
    auto events = generate_tick_stream(spec);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write tick file: " + out_path);
    serialize_ticks(out, events);
    std::cout << "wrote " << events.size() << " events to " << out_path << "\n";
    return exit_ok;
}

int run_fit(const std::string& returns_path, const std::string& range_arg, bool standardize_input) {
    auto comma = range_arg.find(',');
    if (comma == std::string::npos) throw IoError("--range expects 'g_min,g_max'");
    ScalingRange range;
    range.lo = std::stod(range_arg.substr(0, comma));
    std::string hi = range_arg.substr(comma + 1);
    range.hi = (hi == "max" || hi == "inf") ? std::numeric_limits<double>::infinity() : std::stod(hi);

    std::ifstream in(returns_path);
    if (!in) throw IoError("cannot open returns file: " + returns_path);
    ReturnSeries series;
    series.instrument_id = returns_path;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        series.values.push_back(std::stod(line));
    }

    std::vector<double> values;
    if (standardize_input) {
        values = standardize(series).values;
    } else {
        values = series.values;
    }

    nlohmann::json doc;
    MomentStats ms = moments(values);
    doc["n"] = values.size();
    doc["skewness"] = ms.skewness;
    doc["kurtosis"] = ms.kurtosis;

    EmpiricalPdf pdf = empirical_pdf(values);
    StudentFit student = fit_student(pdf);
    doc["student"] = {{"alpha", student.params.alpha},
                      {"L", student.params.L},
                      {"alpha_stderr", student.alpha_stderr},
                      {"converged", student.converged}};

    bool degraded = !student.converged;
    for (TailSign sign : {TailSign::Positive, TailSign::Negative}) {
        const char* key = sign == TailSign::Positive ? "pos" : "neg";
        try {
            TailFit fit = fit_tail(tail_ccdf(values, sign), range);
            doc[key] = {{"exponent", fit.exponent}, {"stderr", fit.stderr_},
                        {"r_squared", fit.r_squared}, {"range", {fit.range.lo, fit.range.hi}},
                        {"n_points", fit.n_points}};
        } catch (const Error& e) {
            doc[key] = {{"error", e.what()}};
            degraded = true;
        }
    }
    std::cout << doc.dump(2) << "\n";
    return degraded ? exit_degraded : exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Return-distribution analysis for high-frequency tick data"};
    app.require_subcommand(1);

    auto* analyze = app.add_subcommand("analyze", "Run the full pipeline from a config file");
    std::string config_path, calendar_path, out_dir;
    std::vector<std::string> timescale_flags;
    bool dump_returns = false;
    analyze->add_option("--config", config_path, "pipeline config (JSON)")->required();
    analyze->add_option("--calendar", calendar_path, "session calendar description file");
    analyze->add_option("--timescale", timescale_flags,
                        "timescale set, e.g. event:1,2,4,8,16,32 or clock:1,2,3,4,5");
    analyze->add_option("--out-dir", out_dir, "output directory (overrides config and TICKDIST_OUT_DIR)");
    analyze->add_flag("--dump-returns", dump_returns, "write per-instrument return series");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic tick file");
    std::string spec_path, synth_out;
    synth->add_option("--spec", spec_path, "stream spec (JSON)")->required();
    synth->add_option("--out", synth_out, "output tick file")->required();

    auto* fit = app.add_subcommand("fit", "Fit tails and Student density to a returns file");
    std::string returns_path, range_arg;
    bool no_standardize = false;
    fit->add_option("--returns", returns_path, "one return per line")->required();
    fit->add_option("--range", range_arg, "scaling range 'g_min,g_max' (g_max may be 'max')")->required();
    fit->add_flag("--no-standardize", no_standardize, "fit the raw values as-is");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze))
            return run_analyze(config_path, calendar_path, timescale_flags, out_dir, dump_returns);
        if (app.got_subcommand(synth)) return run_synth(spec_path, synth_out);
        return run_fit(returns_path, range_arg, !no_standardize);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return tickdist::exit_error;
    }
}
