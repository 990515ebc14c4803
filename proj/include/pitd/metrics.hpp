#pragma once
/**
 * @file metrics.hpp
 * @brief Per-trial interaction metrics computed from a SimTrace.
 *
 * Integrals use the trapezoidal rule on the controller grid. The raw human
 * force is measured, never the filtered one. Movement smoothness (spectral
 * arc length, amplitude threshold 0.05, cutoff 10 Hz) is not computed here.
 */

#include "pitd/constraints.hpp"
#include "pitd/simulation.hpp"

#include <iosfwd>
#include <span>

namespace pitd {

struct TrialMetrics {
  double applied_effort = 0.0;       ///< integral of |f_h| [N s] or [N m s]
  double interaction_percent = 0.0;  ///< samples with |f_h| above threshold [%]
  double collision_percent = 0.0;    ///< samples with the cursor touching an obstacle [%]
  double tracking_error = 0.0;       ///< integral of |x - x*_d| away from obstacles [m s] or [rad s]
};

struct MetricsConfig {
  double interaction_threshold = 0.5;
  double clearance = 0.2;
  /// Cursor size for collision checks. No reference value exists; 0.02 is arbitrary.
  double cursor_radius = 0.02;
  std::vector<Obstacle> obstacles;
};

/// Throws InvalidDimension for an empty trace.
double applied_effort(const SimTrace& trace);
double interaction_percent(const SimTrace& trace, double threshold = 0.5);
/// Only times when x*_d is more than `clearance` outside every obstacle count.
double tracking_error(const SimTrace& trace, std::span<const Obstacle> obstacles,
                      double clearance = 0.2);
double collision_percent(const SimTrace& trace, std::span<const Obstacle> obstacles,
                         double cursor_radius);

TrialMetrics compute_metrics(const SimTrace& trace, const MetricsConfig& cfg);

/// `key = value` lines, 17 significant digits.
void write_metrics(std::ostream& out, const TrialMetrics& metrics);

}  // namespace pitd
