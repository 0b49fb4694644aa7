#pragma once

// Umbrella header for the tickdist library: tick ingestion, event- and
// clock-time returns, distribution statistics, Student/power-law fitting,
// synthetic oracles, and the report pipeline.

#include "tickdist/calendar.hpp"
#include "tickdist/date.hpp"
#include "tickdist/densities.hpp"
#include "tickdist/error.hpp"
#include "tickdist/fit.hpp"
#include "tickdist/fixed.hpp"
#include "tickdist/histogram.hpp"
#include "tickdist/least_squares.hpp"
#include "tickdist/moments.hpp"
#include "tickdist/pipeline.hpp"
#include "tickdist/report.hpp"
#include "tickdist/returns.hpp"
#include "tickdist/rng.hpp"
#include "tickdist/synth.hpp"
#include "tickdist/tick_data.hpp"
