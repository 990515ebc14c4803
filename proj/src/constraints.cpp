#include "pitd/constraints.hpp"

#include "pitd/error.hpp"

#include <cmath>

namespace pitd {

double Obstacle::distance_to_center(std::span<const double> point) const {
  if (point.size() != center.size()) throw InvalidDimension("obstacle: dimension mismatch");
  double sq = 0.0;
  for (std::size_t a = 0; a < point.size(); ++a) {
    const double d = point[a] - center[a];
    sq += d * d;
  }
  return std::sqrt(sq);
}

void ConstraintSet::validate(std::size_t axes) const {
  if (!limits.empty() && limits.size() != axes) {
    throw InvalidDimension("constraints: one limit entry per axis expected");
  }
  for (const auto& l : limits) {
    if (l && !(l->min < l->max)) throw InvalidParameter("constraints: min must be below max");
  }
  for (const auto& o : obstacles) {
    if (o.center.size() != axes) throw InvalidDimension("constraints: obstacle dimension mismatch");
    if (!(o.radius > 0.0)) throw InvalidParameter("constraints: obstacle radius must be positive");
  }
  if (!(margin >= 0.0)) throw InvalidParameter("constraints: margin must be non-negative");
}

bool ConstraintSet::admits(std::span<const TrajectoryWindow> windows) const {
  if (windows.empty()) return true;
  const std::size_t axes = windows.size();
  const std::size_t n = windows.front().waypoints.size();
  for (const auto& w : windows)
    if (w.waypoints.size() != n) throw InvalidDimension("constraints: window lengths differ");

  std::vector<double> point(axes);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t a = 0; a < axes; ++a) {
      point[a] = windows[a].waypoints[j];
      if (a < limits.size() && limits[a]) {
        if (point[a] < limits[a]->min + margin || point[a] > limits[a]->max - margin) return false;
      }
    }
    for (const auto& o : obstacles)
      if (o.distance_to_center(point) < o.radius + margin) return false;
  }
  return true;
}

}  // namespace pitd
