#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "tickdist/calendar.hpp"
#include "tickdist/date.hpp"
#include "tickdist/densities.hpp"
#include "tickdist/error.hpp"
#include "tickdist/fixed.hpp"
#include "tickdist/rng.hpp"
#include "tickdist/tick_data.hpp"

namespace tickdist {

// ============================================================================
// Synthetic samples with analytic ground truth. These are the oracles the
// pipeline is verified against, so every sampler is exact (inverse CDF or
// exact rejection), never approximate.
// ============================================================================

struct GaussianParams {
    double mean = 0.0;
    double stdev = 1.0;
};

struct ParetoParams {
    double alpha = 3.0; // tail exponent, > 0
    double x_min = 1.0; // support lower bound, > 0
};

using GeneratorModel = std::variant<StudentParams, GaussianParams, StretchedExpParams, ParetoParams>;

struct GeneratorSpec {
    GeneratorModel model;
    std::uint64_t seed = 0;
    std::size_t n = 1;
};

inline void validate_model(const GeneratorModel& model) {
    if (const auto* s = std::get_if<StudentParams>(&model)) {
        if (!s->valid()) throw ContractViolation("generator: invalid Student parameters");
    } else if (const auto* g = std::get_if<GaussianParams>(&model)) {
        if (!(g->stdev >= 0.0)) throw ContractViolation("generator: negative Gaussian stdev");
    } else if (const auto* e = std::get_if<StretchedExpParams>(&model)) {
        if (!e->valid()) throw ContractViolation("generator: invalid stretched-exponential parameters");
    } else if (const auto* p = std::get_if<ParetoParams>(&model)) {
        if (!(p->alpha > 0.0) || !(p->x_min > 0.0))
            throw ContractViolation("generator: invalid Pareto parameters");
    }
}

inline double sample_one(CounterRng& rng, const GeneratorModel& model) {
    if (const auto* s = std::get_if<StudentParams>(&model)) {
        // g = m + x / sqrt(L), x standard Student with alpha dof:
        // x = Z / sqrt(V / alpha), V chi-square(alpha) via the gamma sampler,
        // so non-integer alpha is exact.
        double z = rng.normal();
        double v = rng.chi_square(s->alpha);
        return s->m + z / std::sqrt(v / s->alpha) / std::sqrt(s->L);
    }
    if (const auto* g = std::get_if<GaussianParams>(&model)) {
        return g->mean + g->stdev * rng.normal();
    }
    if (const auto* e = std::get_if<StretchedExpParams>(&model)) {
        // Inverse CDF of F(r) = 1 - exp(-(r/r0)^c).
        return e->r0 * std::pow(-std::log(1.0 - rng.uniform()), 1.0 / e->c);
    }
    const auto& p = std::get<ParetoParams>(model);
    return p.x_min * std::pow(rng.uniform(), -1.0 / p.alpha);
}

inline std::vector<double> sample(const GeneratorSpec& spec) {
    if (spec.n < 1) throw ContractViolation("sample: n must be >= 1");
    validate_model(spec.model);
    CounterRng rng(spec.seed);
    std::vector<double> out;
    out.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) out.push_back(sample_one(rng, spec.model));
    return out;
}

// ============================================================================
// Synthetic tick streams: Poisson arrivals inside the continuous sessions,
// i.i.d. log-midprice increments from the return model, quotes one tick on
// each side of the midprice.
// ============================================================================

struct SyntheticStreamSpec {
    std::string instrument_id = "SYN001";
    Date first_date = 20030102;
    int n_days = 1; // consecutive calendar dates, all treated as trading days
    double trades_per_minute = 60.0;
    GeneratorModel return_model;
    PriceE4 initial_price = 10 * price_scale;
    SessionCalendar calendar = SessionCalendar::szse_2003();
    std::uint64_t seed = 0;
};

inline constexpr PriceE4 synth_half_spread_e4 = 100; // one tick (0.01)

inline std::vector<TickEvent> generate_tick_stream(const SyntheticStreamSpec& spec) {
    if (spec.n_days < 1) throw ContractViolation("generate_tick_stream: n_days must be >= 1");
    if (!(spec.trades_per_minute > 0.0))
        throw ContractViolation("generate_tick_stream: trades_per_minute must be positive");
    if (spec.initial_price <= synth_half_spread_e4)
        throw ContractViolation("generate_tick_stream: initial price too small for the spread");
    if (!validate_date(spec.first_date))
        throw ContractViolation("generate_tick_stream: bad first_date");
    spec.calendar.validate();
    validate_model(spec.return_model);

    CounterRng rng(spec.seed);
    const double mean_gap_cs = centisec_per_minute / spec.trades_per_minute;
    double log_mid = std::log(price_to_double(spec.initial_price));

    std::vector<TickEvent> events;
    for (int d = 0; d < spec.n_days; ++d) {
        Date date = add_days(spec.first_date, d);
        for (const auto& win : spec.calendar.continuous_sessions) {
            double t = static_cast<double>(win.open);
            for (;;) {
                t += rng.exponential(mean_gap_cs);
                auto ts = static_cast<CentiSec>(t);
                if (ts > win.close) break;
                log_mid += sample_one(rng, spec.return_model);
                // Midprice on the 0.001 grid keeps quotes within 3 decimals
                // and the parsed midpoint exact.
                auto mid_e3 = static_cast<PriceE4>(std::llround(std::exp(log_mid) * 1000.0));
                PriceE4 mid = mid_e3 * 10;
                if (mid <= synth_half_spread_e4)
                    throw ContractViolation("generate_tick_stream: price path hit the spread floor");
                events.push_back(TickEvent{spec.instrument_id, date, ts,
                                           mid - synth_half_spread_e4, mid + synth_half_spread_e4});
            }
        }
    }
    return events;
}

} // namespace tickdist
