#pragma once
/**
 * @file oracle.hpp
 * @brief Brute-force re-derivations of the window deformation, for testing.
 *
 * Nothing here shares code with deformation.cpp: matrices are assembled densely
 * from their definitions, the constrained minimum comes from a dense saddle-point
 * solve or an iterative minimizer, and gradients from central differences.
 * Dense only; intended for N <= 200.
 */

#include <Eigen/Core>

#include <cstddef>
#include <functional>

namespace pitd::oracle {

Eigen::MatrixXd dense_jerk_matrix(std::size_t n);
Eigen::MatrixXd dense_metric(std::size_t n);
Eigen::MatrixXd dense_constraints(std::size_t n);

/// Deformation energy relative to the undeformed window:
///   E(V) = -V^T (1 f_h) + 1/(2 alpha) V^T R V,   V = deformed - window
struct EnergyFunctional {
  Eigen::MatrixXd metric;
  Eigen::MatrixXd constraints;
  double alpha;

  std::size_t size() const { return static_cast<std::size_t>(metric.rows()); }

  /// alpha = mu delta sqrt(N) / |G|, with G taken from an oracle saddle-point solve.
  static EnergyFunctional from_params(std::size_t n, double mu, double delta);
  static EnergyFunctional with_alpha(std::size_t n, double alpha);
};

double energy(const EnergyFunctional& e, const Eigen::VectorXd& window,
              const Eigen::VectorXd& deformed, double force);

/// Analytic gradient of energy() with respect to the deformed window.
Eigen::VectorXd energy_gradient(const EnergyFunctional& e, const Eigen::VectorXd& window,
                                const Eigen::VectorXd& deformed, double force);

struct KKTSolution {
  Eigen::VectorXd deformed;
  Eigen::Vector4d multipliers;
};

/// Solves [[R/alpha, B^T], [B, 0]] [V; lambda] = [1 f_h; 0] with a dense LU.
KKTSolution solve_kkt(const EnergyFunctional& e, const Eigen::VectorXd& window, double force);

enum class DescentMethod {
  kSteepest,           ///< fixed step 0.9 alpha / lambda_max(R); monotone but slow
  kConjugateGradient,  ///< conjugate directions, restarted every n free steps
};

struct MinimizeOptions {
  DescentMethod method = DescentMethod::kConjugateGradient;
  std::size_t max_iterations = 200000;
  /// Stop when |P grad|_inf <= tolerance * (|1 f_h|_inf + |R V / alpha|_inf).
  double tolerance = 1e-13;
  /// Iterates that fail this relative residual when the budget runs out raise NonConvergence.
  double acceptable_residual = 1e-9;
  /// Optional hook called with the energy after every step.
  std::function<void(double)> on_step;
};

/// Gradient descent restricted to the nullspace of B via the projector I - B^T (B B^T)^-1 B.
Eigen::VectorXd minimize_numerically(const EnergyFunctional& e, const Eigen::VectorXd& window,
                                     double force, const MinimizeOptions& options = {});

/// Central differences of an arbitrary scalar function.
Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& point, double step);

/// Central differences of energy() at `deformed`.
Eigen::VectorXd finite_difference_gradient(const EnergyFunctional& e, const Eigen::VectorXd& window,
                                           const Eigen::VectorXd& deformed, double force,
                                           double step);

/// Ascending eigenvalues of a symmetric matrix.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

/// Exact constrained minimizer direction for any N. With the zero-extended
/// third-difference operator, R restricted to the free waypoints is a sixth
/// difference; R v = 1 on waypoints 2..N-3 is then solved by the degree-6
/// polynomial with roots -1, 0, 1, N-2, N-1, N:
///   G_j = (j+1) j (j-1) (N-2-j) (N-1-j) (N-j) / 720
/// The result is normalized to |H| = sqrt(N).
Eigen::VectorXd polynomial_shape(std::size_t n);

}  // namespace pitd::oracle
