#include "pitd/trajectory.hpp"

#include "pitd/error.hpp"

#include <cmath>

namespace pitd {

SineTrajectory::SineTrajectory(std::vector<double> amplitude, std::vector<double> frequency,
                               std::vector<double> phase, std::vector<double> offset)
    : amplitude_(std::move(amplitude)),
      frequency_(std::move(frequency)),
      phase_(std::move(phase)),
      offset_(std::move(offset)) {
  const std::size_t n = amplitude_.size();
  if (n == 0 || frequency_.size() != n || phase_.size() != n || offset_.size() != n) {
    throw InvalidDimension("sine trajectory: per-axis coefficient lists must match");
  }
}

double SineTrajectory::position(std::size_t axis, double t) const {
  return offset_.at(axis) + amplitude_[axis] * std::sin(frequency_[axis] * t + phase_[axis]);
}

CircleTrajectory::CircleTrajectory(double radius, std::array<double, 2> center, double frequency)
    : radius_(radius), center_(center), frequency_(frequency) {
  if (!(radius_ > 0.0)) throw InvalidParameter("circle trajectory: radius must be positive");
}

double CircleTrajectory::position(std::size_t axis, double t) const {
  const double phase = frequency_ * t;
  return center_.at(axis) + radius_ * (axis == 0 ? std::cos(phase) : std::sin(phase));
}

ConstantTrajectory::ConstantTrajectory(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidDimension("constant trajectory: no axes");
}

PolynomialTrajectory::PolynomialTrajectory(std::vector<std::vector<double>> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) throw InvalidDimension("polynomial trajectory: no axes");
  for (const auto& c : coefficients_)
    if (c.empty()) throw InvalidDimension("polynomial trajectory: axis without coefficients");
}

double PolynomialTrajectory::position(std::size_t axis, double t) const {
  const auto& c = coefficients_.at(axis);
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

}  // namespace pitd
