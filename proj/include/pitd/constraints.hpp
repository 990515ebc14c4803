#pragma once

#include "pitd/deformation.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pitd {

/// Ball (disc in 2-D) in task space.
struct Obstacle {
  std::vector<double> center;
  double radius = 0.0;

  double distance_to_center(std::span<const double> point) const;
};

struct AxisLimits {
  double min = 0.0;
  double max = 0.0;
};

/// Limits the desired trajectory must respect. A deformation is rejected as a
/// whole, across all axes, if any waypoint tuple leaves the limits shrunk by
/// `margin` or comes within radius + margin of an obstacle center.
struct ConstraintSet {
  std::vector<std::optional<AxisLimits>> limits;  ///< per axis; empty = unlimited
  std::vector<Obstacle> obstacles;
  double margin = 0.0;

  void validate(std::size_t axes) const;
  /// `windows` holds one equal-length window per axis.
  bool admits(std::span<const TrajectoryWindow> windows) const;
};

}  // namespace pitd
