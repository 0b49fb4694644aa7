#pragma once

#include <stdexcept>
#include <string>

namespace tickdist {

// Base for all library errors so callers can catch one type at the boundary.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition/contract violations (bad delta, mixed timescales, k out of range, ...).
struct ContractViolation : Error {
    using Error::Error;
};

// A series whose dispersion is zero cannot be standardized.
struct DegenerateSeriesError : Error {
    using Error::Error;
};

// Too few samples/bins/points for the requested statistic or fit.
struct InsufficientDataError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace tickdist
