#pragma once
/**
 * @file trace_io.hpp
 * @brief Delimited-text export of simulation traces.
 *
 * Trace file: comma separated, one header row, one row per controller tick.
 * Columns are `t` followed, for each axis a = 0, 1, ..., by
 *   x_a, xdot_a, xd_a, xddot_a, xstar_a, fh_a, fh_filtered_a, fv_a, fa_a
 *
 * Event file: `k, tick, tau_i`, then per axis `force_a, xd_a, xddot_a`, then `accepted` (0/1).
 *
 * Reals use 17 significant digits; waypoint indices are 0-based.
 */

#include "pitd/simulation.hpp"

#include <iosfwd>

namespace pitd {

void write_trace_csv(std::ostream& out, const SimTrace& trace);
void write_events_csv(std::ostream& out, const SimTrace& trace);

}  // namespace pitd
