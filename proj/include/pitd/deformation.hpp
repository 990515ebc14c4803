#pragma once
/**
 * @file deformation.hpp
 * @brief Optimal deformation of a finite window of a desired trajectory.
 *
 * A window holds N waypoints spaced delta apart. A sensed force f_h deforms the
 * window by the minimum-jerk variation that keeps the first two and last two
 * waypoints fixed:
 *
 *   deformed = window + mu * delta * H * f_h
 *
 * H depends only on N and is built once. Waypoints are 0-indexed: waypoint j
 * sits at start_time + j * delta.
 */

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace pitd {

/// Smallest window that still has one free waypoint after the four endpoint constraints.
inline constexpr std::size_t kMinWaypoints = 5;

struct DeformationParams {
  double tau = 1.0;    ///< window duration [s]
  double delta = 0.01; ///< waypoint spacing [s]
  double mu = 1.0;     ///< admittance [m/(N s)] or [rad/(N m s)]

  /// N = tau / delta + 1. Throws InvalidParameter if tau is not a whole multiple of delta.
  std::size_t waypoint_count() const;
  /// Throws InvalidParameter / InvalidDimension when an invariant fails.
  void validate() const;
};

/// (N+3) x N finite-difference matrix; column j carries the stencil [1, -3, 3, -1]
/// starting at row j, so (A v)[i] for interior rows is a third difference of v.
class JerkMatrix {
 public:
  explicit JerkMatrix(std::size_t n);

  std::size_t rows() const { return n_ + 3; }
  std::size_t cols() const { return n_; }
  double operator()(std::size_t row, std::size_t col) const;
  std::vector<double> apply(std::span<const double> v) const;
  Eigen::MatrixXd to_dense() const;

 private:
  std::size_t n_;
};

/// Symmetric banded matrix stored by diagonals: diagonal(d)[i] = M(i, i + d).
class BandedSymmetricMatrix {
 public:
  BandedSymmetricMatrix(std::size_t n, std::size_t half_bandwidth);

  std::size_t size() const { return n_; }
  std::size_t half_bandwidth() const { return bands_.size() - 1; }
  double operator()(std::size_t row, std::size_t col) const;
  std::span<const double> diagonal(std::size_t d) const { return bands_.at(d); }
  std::span<double> diagonal(std::size_t d) { return bands_.at(d); }
  std::vector<double> apply(std::span<const double> v) const;
  Eigen::MatrixXd to_dense() const;

 private:
  std::size_t n_;
  std::vector<std::vector<double>> bands_;
};

/// 4 x N selector picking waypoints 0, 1, N-2, N-1.
class ConstraintMatrix {
 public:
  explicit ConstraintMatrix(std::size_t n);

  std::size_t cols() const { return n_; }
  const std::array<std::size_t, 4>& selected() const { return selected_; }
  double operator()(std::size_t row, std::size_t col) const;
  std::array<double, 4> apply(std::span<const double> v) const;
  Eigen::MatrixXd to_dense() const;

 private:
  std::size_t n_;
  std::array<std::size_t, 4> selected_;
};

JerkMatrix build_jerk_matrix(std::size_t n);
/// R = A^T A, half-bandwidth 3.
BandedSymmetricMatrix build_metric(const JerkMatrix& jerk);
ConstraintMatrix build_constraints(std::size_t n);

/// Everything about the deformation that depends on N alone.
struct DeformationShape {
  std::size_t n_waypoints;
  JerkMatrix jerk_matrix;
  BandedSymmetricMatrix metric;
  ConstraintMatrix constraint_matrix;
  std::vector<double> raw_shape;  ///< G
  std::vector<double> shape;      ///< H = sqrt(N) / |G| * G, |H| = sqrt(N)
};

/// Solves for G with a banded LDL^T factorization of R and a 4 x 4 Schur complement
/// for the endpoint constraints, then normalizes to H. Throws NumericalDegeneracy
/// if a pivot vanishes or a constrained entry of H is not negligible.
std::shared_ptr<const DeformationShape> build_shape(std::size_t n);

/// Immutable; copies share the shape.
class DeformationOperator {
 public:
  DeformationOperator(std::shared_ptr<const DeformationShape> shape, double mu, double delta);

  std::size_t n_waypoints() const { return shape_->n_waypoints; }
  std::span<const double> shape() const { return shape_->shape; }
  double admittance() const { return mu_; }
  double spacing() const { return delta_; }
  const DeformationShape& intermediates() const { return *shape_; }
  const std::shared_ptr<const DeformationShape>& shared_shape() const { return shape_; }

  /// waypoints += mu * delta * force * H
  void apply_in_place(std::span<double> waypoints, double force) const;

 private:
  std::shared_ptr<const DeformationShape> shape_;
  double mu_;
  double delta_;
};

DeformationOperator build_operator(const DeformationParams& params);

struct TrajectoryWindow {
  double start_time = 0.0;
  double spacing = 0.0;
  std::vector<double> waypoints;

  double time_at(std::size_t j) const { return start_time + static_cast<double>(j) * spacing; }
};

/// Throws InvalidDimension when the window length differs from the operator's N.
TrajectoryWindow deform(const DeformationOperator& op, const TrajectoryWindow& window, double force);

/// One value per line, 17 significant digits.
void write_shape(std::ostream& out, std::span<const double> shape);
/// Skips blank lines and lines starting with `#`.
std::vector<double> read_shape(std::istream& in);

}  // namespace pitd
