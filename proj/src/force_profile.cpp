#include "pitd/force_profile.hpp"

#include "pitd/error.hpp"

#include <algorithm>

namespace pitd {

void ZeroForce::sample(double, std::span<const double>, std::span<double> force) const {
  std::fill(force.begin(), force.end(), 0.0);
}

PulseForce::PulseForce(std::vector<double> magnitude, double start, double end)
    : magnitude_(std::move(magnitude)), start_(start), end_(end) {
  if (magnitude_.empty()) throw InvalidDimension("pulse force: no axes");
  if (!(start_ <= end_)) throw InvalidParameter("pulse force: start must not exceed end");
}

void PulseForce::sample(double t, std::span<const double>, std::span<double> force) const {
  const bool on = start_ <= t && t < end_;
  for (std::size_t a = 0; a < force.size(); ++a) force[a] = on ? magnitude_.at(a) : 0.0;
}

PiecewiseConstantForce::PiecewiseConstantForce(std::vector<double> times,
                                               std::vector<std::vector<double>> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.empty() || times_.size() != values_.size()) {
    throw InvalidDimension("force table: one value row per breakpoint expected");
  }
  if (!std::is_sorted(times_.begin(), times_.end())) {
    throw InvalidParameter("force table: breakpoints must be ascending");
  }
  for (const auto& row : values_)
    if (row.size() != values_.front().size() || row.empty())
      throw InvalidDimension("force table: rows must have one value per axis");
}

void PiecewiseConstantForce::sample(double t, std::span<const double>, std::span<double> force) const {
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) {
    std::fill(force.begin(), force.end(), 0.0);
    return;
  }
  const auto& row = values_[static_cast<std::size_t>(it - times_.begin()) - 1];
  std::copy(row.begin(), row.end(), force.begin());
}

AvoidanceForce::AvoidanceForce(std::vector<Obstacle> obstacles, double gain, double standoff)
    : obstacles_(std::move(obstacles)), gain_(gain), standoff_(standoff) {
  if (obstacles_.empty()) throw InvalidDimension("avoidance force: needs at least one obstacle");
  if (!(gain_ >= 0.0) || !(standoff_ > 0.0)) {
    throw InvalidParameter("avoidance force: gain >= 0 and standoff > 0 required");
  }
  for (const auto& o : obstacles_)
    if (o.center.size() != obstacles_.front().center.size())
      throw InvalidDimension("avoidance force: obstacle dimensions differ");
}

void AvoidanceForce::sample(double, std::span<const double> position, std::span<double> force) const {
  std::fill(force.begin(), force.end(), 0.0);
  for (const auto& o : obstacles_) {
    const double d = o.distance_to_center(position);
    if (d >= standoff_ || d == 0.0) continue;
    const double push = gain_ * (standoff_ - d) / d;
    for (std::size_t a = 0; a < force.size(); ++a) force[a] += push * (position[a] - o.center[a]);
  }
}

}  // namespace pitd
