#include "pitd/oracle.hpp"

#include "pitd/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>

namespace pitd::oracle {
namespace {

void require_size(std::size_t n) {
  if (n < 5) throw InvalidDimension("oracle: N must be at least 5");
}

void require_lengths(const EnergyFunctional& e, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const auto n = static_cast<Eigen::Index>(e.size());
  if (a.size() != n || b.size() != n) throw InvalidDimension("oracle: vector length mismatch");
}

Eigen::MatrixXd nullspace_projector(const Eigen::MatrixXd& b) {
  const Eigen::Index n = b.cols();
  const Eigen::MatrixXd bbt = b * b.transpose();
  return Eigen::MatrixXd::Identity(n, n) - b.transpose() * bbt.ldlt().solve(b);
}

double relative_residual(const Eigen::VectorXd& projected, double force,
                         const Eigen::VectorXd& curvature_term) {
  const double scale = std::abs(force) + curvature_term.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return projected.cwiseAbs().maxCoeff() / scale;
}

}  // namespace

Eigen::MatrixXd dense_jerk_matrix(std::size_t n) {
  require_size(n);
  const auto cols = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(cols + 3, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    a(j, j) = 1.0;
    a(j + 1, j) = -3.0;
    a(j + 2, j) = 3.0;
    a(j + 3, j) = -1.0;
  }
  return a;
}

Eigen::MatrixXd dense_metric(std::size_t n) {
  const Eigen::MatrixXd a = dense_jerk_matrix(n);
  return a.transpose() * a;
}

Eigen::MatrixXd dense_constraints(std::size_t n) {
  require_size(n);
  const auto cols = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(4, cols);
  b(0, 0) = 1.0;
  b(1, 1) = 1.0;
  b(2, cols - 2) = 1.0;
  b(3, cols - 1) = 1.0;
  return b;
}

EnergyFunctional EnergyFunctional::with_alpha(std::size_t n, double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("oracle: alpha must be positive");
  return EnergyFunctional{dense_metric(n), dense_constraints(n), alpha};
}

EnergyFunctional EnergyFunctional::from_params(std::size_t n, double mu, double delta) {
  // With alpha = 1 and f_h = 1 the minimizer is G itself.
  const EnergyFunctional unit = with_alpha(n, 1.0);
  const Eigen::VectorXd g = solve_kkt(unit, Eigen::VectorXd::Zero(unit.size()), 1.0).deformed;
  const double alpha = mu * delta * std::sqrt(static_cast<double>(n)) / g.norm();
  return EnergyFunctional{unit.metric, unit.constraints, alpha};
}

double energy(const EnergyFunctional& e, const Eigen::VectorXd& window,
              const Eigen::VectorXd& deformed, double force) {
  require_lengths(e, window, deformed);
  const Eigen::VectorXd v = deformed - window;
  return -force * v.sum() + v.dot(e.metric * v) / (2.0 * e.alpha);
}

Eigen::VectorXd energy_gradient(const EnergyFunctional& e, const Eigen::VectorXd& window,
                                const Eigen::VectorXd& deformed, double force) {
  require_lengths(e, window, deformed);
  const Eigen::VectorXd v = deformed - window;
  return (e.metric * v) / e.alpha - Eigen::VectorXd::Constant(v.size(), force);
}

KKTSolution solve_kkt(const EnergyFunctional& e, const Eigen::VectorXd& window, double force) {
  const auto n = static_cast<Eigen::Index>(e.size());
  if (window.size() != n) throw InvalidDimension("oracle: window length mismatch");

  // Multiplied through by alpha so both blocks are O(1): [[R, B^T], [B, 0]] [V; alpha lambda].
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 4, n + 4);
  kkt.topLeftCorner(n, n) = e.metric;
  kkt.topRightCorner(n, 4) = e.constraints.transpose();
  kkt.bottomLeftCorner(4, n) = e.constraints;

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 4);
  rhs.head(n).setConstant(e.alpha * force);

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (!lu.isInvertible()) throw NumericalDegeneracy("oracle: saddle-point system is singular");
  const Eigen::VectorXd sol = lu.solve(rhs);

  return KKTSolution{window + sol.head(n), sol.tail<4>() / e.alpha};
}

Eigen::VectorXd minimize_numerically(const EnergyFunctional& e, const Eigen::VectorXd& window,
                                     double force, const MinimizeOptions& options) {
  const auto n = static_cast<Eigen::Index>(e.size());
  if (window.size() != n) throw InvalidDimension("oracle: window length mismatch");

  const Eigen::MatrixXd proj = nullspace_projector(e.constraints);
  const Eigen::MatrixXd hessian = e.metric / e.alpha;
  const double lambda_max = symmetric_eigenvalues(e.metric).maxCoeff();
  const double fixed_step = 0.9 * e.alpha / lambda_max;
  const Eigen::Index restart = n - e.constraints.rows();

  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  auto projected_gradient = [&](Eigen::VectorXd& curvature) {
    curvature = hessian * v;
    return Eigen::VectorXd(proj * (curvature - Eigen::VectorXd::Constant(n, force)));
  };

  Eigen::VectorXd curvature;
  Eigen::VectorXd r = projected_gradient(curvature);
  Eigen::VectorXd dir = -r;
  double rel = relative_residual(r, force, curvature);
  double best = rel;
  std::size_t since_best = 0;
  const std::size_t patience = 5 * static_cast<std::size_t>(restart) + 50;

  for (std::size_t it = 0; it < options.max_iterations && rel > options.tolerance; ++it) {
    if (options.method == DescentMethod::kSteepest) {
      v -= fixed_step * r;
    } else {
      const double curv = dir.dot(hessian * dir);
      if (!(curv > 0.0)) break;
      v += (-r.dot(dir) / curv) * dir;
    }
    Eigen::VectorXd r_next = projected_gradient(curvature);
    if (options.method == DescentMethod::kConjugateGradient) {
      const bool restart_now = (static_cast<Eigen::Index>(it + 1) % restart) == 0;
      const double beta = restart_now ? 0.0 : r_next.squaredNorm() / r.squaredNorm();
      dir = -r_next + beta * dir;
    }
    r = std::move(r_next);
    if (options.on_step) options.on_step(energy(e, Eigen::VectorXd::Zero(n), v, force));

    rel = relative_residual(r, force, curvature);
    if (rel < best) {
      best = rel;
      since_best = 0;
    } else if (++since_best > patience) {
      break;
    }
  }

  if (!(rel <= options.acceptable_residual)) {
    throw NonConvergence("oracle: minimizer did not converge, relative residual " +
                             std::to_string(rel),
                         rel);
  }
  return window + v;
}

Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& point, double step) {
  if (!(step > 0.0)) throw InvalidParameter("oracle: finite-difference step must be positive");
  Eigen::VectorXd grad(point.size());
  Eigen::VectorXd probe = point;
  for (Eigen::Index j = 0; j < point.size(); ++j) {
    probe[j] = point[j] + step;
    const double up = f(probe);
    probe[j] = point[j] - step;
    const double down = f(probe);
    probe[j] = point[j];
    grad[j] = (up - down) / (2.0 * step);
  }
  return grad;
}

Eigen::VectorXd finite_difference_gradient(const EnergyFunctional& e, const Eigen::VectorXd& window,
                                           const Eigen::VectorXd& deformed, double force,
                                           double step) {
  require_lengths(e, window, deformed);
  return finite_difference_gradient(
      [&](const Eigen::VectorXd& x) { return energy(e, window, x, force); }, deformed, step);
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalDegeneracy("oracle: eigensolve failed");
  return solver.eigenvalues();
}

Eigen::VectorXd polynomial_shape(std::size_t n) {
  require_size(n);
  const double nn = static_cast<double>(n);
  Eigen::VectorXd g(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double j = static_cast<double>(i);
    g[static_cast<Eigen::Index>(i)] =
        (j + 1.0) * j * (j - 1.0) * (nn - 2.0 - j) * (nn - 1.0 - j) * (nn - j) / 720.0;
  }
  return std::sqrt(nn) * g / g.norm();
}

}  // namespace pitd::oracle
