#pragma once

#include "pitd/constraints.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pitd {

/// Scripted stand-in for the human: force per axis at time t, possibly
/// depending on the current device position.
class ForceProfile {
 public:
  virtual ~ForceProfile() = default;
  virtual std::size_t axes() const = 0;
  virtual void sample(double t, std::span<const double> position, std::span<double> force) const = 0;
};

class ZeroForce final : public ForceProfile {
 public:
  explicit ZeroForce(std::size_t axes) : axes_(axes) {}
  std::size_t axes() const override { return axes_; }
  void sample(double, std::span<const double>, std::span<double> force) const override;

 private:
  std::size_t axes_;
};

/// magnitude on [start, end), zero elsewhere.
class PulseForce final : public ForceProfile {
 public:
  PulseForce(std::vector<double> magnitude, double start, double end);
  std::size_t axes() const override { return magnitude_.size(); }
  void sample(double t, std::span<const double>, std::span<double> force) const override;

 private:
  std::vector<double> magnitude_;
  double start_;
  double end_;
};

/// values[i] holds from times[i] until times[i+1]; zero before times[0], last row after.
class PiecewiseConstantForce final : public ForceProfile {
 public:
  PiecewiseConstantForce(std::vector<double> times, std::vector<std::vector<double>> values);
  std::size_t axes() const override { return values_.front().size(); }
  void sample(double t, std::span<const double>, std::span<double> force) const override;

 private:
  std::vector<double> times_;
  std::vector<std::vector<double>> values_;
};

/// Synthetic human that pushes the device away from obstacles:
///   f = gain * (standoff - d) * (x - c) / d   whenever d = |x - c| < standoff,
/// summed over obstacles. Not a model of a real person.
class AvoidanceForce final : public ForceProfile {
 public:
  AvoidanceForce(std::vector<Obstacle> obstacles, double gain, double standoff);
  std::size_t axes() const override { return obstacles_.front().center.size(); }
  void sample(double t, std::span<const double> position, std::span<double> force) const override;

 private:
  std::vector<Obstacle> obstacles_;
  double gain_;
  double standoff_;
};

}  // namespace pitd
