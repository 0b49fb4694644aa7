#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "tickdist/error.hpp"

namespace tickdist {

// ============================================================================
// CounterRng: counter-based pseudorandom generator (splitmix64 output
// function). The k-th raw word is mix64(seed + k * golden_gamma), so a
// generator is fully described by (seed, counter) and identical seeds yield
// bit-identical streams on every platform with IEEE doubles. Not a shared
// object: clone or reseed per thread.
// ============================================================================

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + (++counter_) * golden_gamma;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on the open interval (0, 1): 53-bit mantissa offset by half a ulp.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the paired variate is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        cached_ = radius * std::sin(angle);
        have_cached_ = true;
        return radius * std::cos(angle);
    }

    double exponential(double mean) { return -mean * std::log(uniform()); }

    // Marsaglia-Tsang squeeze method; exact for any real shape > 0.
    double gamma(double shape, double scale = 1.0) {
        if (!(shape > 0.0) || !(scale > 0.0))
            throw ContractViolation("gamma: shape and scale must be positive");
        if (shape < 1.0) {
            double boost = std::pow(uniform(), 1.0 / shape);
            return gamma(shape + 1.0, scale) * boost;
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            double u = uniform();
            double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
        }
    }

    double chi_square(double dof) { return gamma(0.5 * dof, 2.0); }

private:
    static constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace tickdist
