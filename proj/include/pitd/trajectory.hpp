#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace pitd {

/// The operator-supplied trajectory x*_d(t) that the system returns to without human input.
class OriginalTrajectory {
 public:
  virtual ~OriginalTrajectory() = default;
  virtual std::size_t axes() const = 0;
  virtual double position(std::size_t axis, double t) const = 0;
};

/// x_a(t) = offset_a + amplitude_a sin(frequency_a t + phase_a)
class SineTrajectory final : public OriginalTrajectory {
 public:
  SineTrajectory(std::vector<double> amplitude, std::vector<double> frequency,
                 std::vector<double> phase, std::vector<double> offset);
  std::size_t axes() const override { return amplitude_.size(); }
  double position(std::size_t axis, double t) const override;

 private:
  std::vector<double> amplitude_, frequency_, phase_, offset_;
};

/// Two axes: center + radius [cos(w t), sin(w t)].
class CircleTrajectory final : public OriginalTrajectory {
 public:
  CircleTrajectory(double radius, std::array<double, 2> center, double frequency);
  std::size_t axes() const override { return 2; }
  double position(std::size_t axis, double t) const override;

 private:
  double radius_;
  std::array<double, 2> center_;
  double frequency_;
};

class ConstantTrajectory final : public OriginalTrajectory {
 public:
  explicit ConstantTrajectory(std::vector<double> values);
  std::size_t axes() const override { return values_.size(); }
  double position(std::size_t axis, double) const override { return values_.at(axis); }

 private:
  std::vector<double> values_;
};

/// Per-axis polynomial, coefficients in ascending powers of t.
class PolynomialTrajectory final : public OriginalTrajectory {
 public:
  explicit PolynomialTrajectory(std::vector<std::vector<double>> coefficients);
  std::size_t axes() const override { return coefficients_.size(); }
  double position(std::size_t axis, double t) const override;

 private:
  std::vector<std::vector<double>> coefficients_;
};

}  // namespace pitd
