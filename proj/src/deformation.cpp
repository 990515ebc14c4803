#include "pitd/deformation.hpp"

#include "pitd/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pitd {
namespace {

// R is severely ill-conditioned (about 64 (N/pi)^6, ~1e21 at N = 5001); a double
// precision factorization loses definiteness around N = 3400. The one-time
// factorization therefore runs in 128-bit floating point.
#if defined(__SIZEOF_FLOAT128__)
using WideReal = __float128;
#else
using WideReal = long double;
#endif

WideReal wide_abs(WideReal v) { return v < 0 ? -v : v; }

constexpr double kConstrainedEntryTolerance = 1e-10;

// LDL^T of a symmetric banded matrix. lower_[d][k] = L(k + d, k) for d = 1..p.
class BandedLdlt {
 public:
  explicit BandedLdlt(const BandedSymmetricMatrix& m)
      : n_(m.size()), p_(m.half_bandwidth()), diag_(n_), lower_(p_ + 1) {
    for (std::size_t d = 1; d <= p_; ++d) lower_[d].assign(n_, WideReal(0));

    for (std::size_t j = 0; j < n_; ++j) {
      WideReal dj = m.diagonal(0)[j];
      const std::size_t k0 = j >= p_ ? j - p_ : 0;
      for (std::size_t k = k0; k < j; ++k) {
        const WideReal l = lower_[j - k][k];
        dj -= l * l * diag_[k];
      }
      if (!(dj > 0)) {
        throw NumericalDegeneracy("metric factorization failed: pivot " + std::to_string(j) +
                                  " is not positive");
      }
      diag_[j] = dj;

      const std::size_t i_end = std::min(n_ - 1, j + p_);
      for (std::size_t i = j + 1; i <= i_end; ++i) {
        WideReal s = m.diagonal(i - j)[j];
        const std::size_t kk0 = i >= p_ ? i - p_ : 0;
        for (std::size_t k = kk0; k < j; ++k) s -= lower_[i - k][k] * lower_[j - k][k] * diag_[k];
        lower_[i - j][j] = s / dj;
      }
    }
  }

  void solve_in_place(std::vector<WideReal>& b) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t k0 = i >= p_ ? i - p_ : 0;
      for (std::size_t k = k0; k < i; ++k) b[i] -= lower_[i - k][k] * b[k];
    }
    for (std::size_t i = 0; i < n_; ++i) b[i] /= diag_[i];
    for (std::size_t i = n_; i-- > 0;) {
      const std::size_t k_end = std::min(n_ - 1, i + p_);
      for (std::size_t k = i + 1; k <= k_end; ++k) b[i] -= lower_[k - i][i] * b[k];
    }
  }

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<WideReal> diag_;
  std::vector<std::vector<WideReal>> lower_;
};

// Gaussian elimination with partial pivoting on the 4 x 4 Schur complement B R^-1 B^T.
std::array<WideReal, 4> solve_4x4(std::array<std::array<WideReal, 4>, 4> a,
                                  std::array<WideReal, 4> b) {
  for (std::size_t c = 0; c < 4; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < 4; ++r)
      if (wide_abs(a[r][c]) > wide_abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0) throw NumericalDegeneracy("constraint Schur complement is singular");
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t r = c + 1; r < 4; ++r) {
      const WideReal f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::array<WideReal, 4> x{};
  for (std::size_t r = 4; r-- > 0;) {
    WideReal s = b[r];
    for (std::size_t k = r + 1; k < 4; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

void require_window(std::size_t n) {
  if (n < kMinWaypoints) {
    throw InvalidDimension("deformation window needs at least " + std::to_string(kMinWaypoints) +
                           " waypoints, got " + std::to_string(n));
  }
}

}  // namespace

std::size_t DeformationParams::waypoint_count() const {
  if (!(tau > 0.0) || !(delta > 0.0)) throw InvalidParameter("tau and delta must be positive");
  const double intervals = tau / delta;
  const double rounded = std::round(intervals);
  if (std::abs(intervals - rounded) > 1e-9 * std::max(1.0, rounded)) {
    throw InvalidParameter("tau must be an integer multiple of delta");
  }
  return static_cast<std::size_t>(rounded) + 1;
}

void DeformationParams::validate() const {
  if (!(mu > 0.0)) throw InvalidParameter("mu must be positive");
  require_window(waypoint_count());
}

// --- JerkMatrix ---

JerkMatrix::JerkMatrix(std::size_t n) : n_(n) { require_window(n); }

double JerkMatrix::operator()(std::size_t row, std::size_t col) const {
  static constexpr std::array<double, 4> kStencil{1.0, -3.0, 3.0, -1.0};
  if (row < col || row - col > 3) return 0.0;
  return kStencil[row - col];
}

std::vector<double> JerkMatrix::apply(std::span<const double> v) const {
  if (v.size() != n_) throw InvalidDimension("jerk matrix: vector length mismatch");
  std::vector<double> out(rows(), 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    out[j] += v[j];
    out[j + 1] -= 3.0 * v[j];
    out[j + 2] += 3.0 * v[j];
    out[j + 3] -= v[j];
  }
  return out;
}

Eigen::MatrixXd JerkMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows(), cols());
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t d = 0; d < 4; ++d) m(j + d, j) = (*this)(j + d, j);
  return m;
}

// --- BandedSymmetricMatrix ---

BandedSymmetricMatrix::BandedSymmetricMatrix(std::size_t n, std::size_t half_bandwidth)
    : n_(n), bands_(half_bandwidth + 1) {
  for (std::size_t d = 0; d <= half_bandwidth; ++d) bands_[d].assign(d < n ? n - d : 0, 0.0);
}

double BandedSymmetricMatrix::operator()(std::size_t row, std::size_t col) const {
  const std::size_t lo = std::min(row, col);
  const std::size_t d = std::max(row, col) - lo;
  if (d > half_bandwidth()) return 0.0;
  return bands_[d][lo];
}

std::vector<double> BandedSymmetricMatrix::apply(std::span<const double> v) const {
  if (v.size() != n_) throw InvalidDimension("banded matrix: vector length mismatch");
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) out[i] = bands_[0][i] * v[i];
  for (std::size_t d = 1; d <= half_bandwidth(); ++d) {
    for (std::size_t i = 0; i + d < n_; ++i) {
      out[i] += bands_[d][i] * v[i + d];
      out[i + d] += bands_[d][i] * v[i];
    }
  }
  return out;
}

Eigen::MatrixXd BandedSymmetricMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (std::size_t d = 0; d <= half_bandwidth(); ++d) {
    for (std::size_t i = 0; i + d < n_; ++i) {
      m(i, i + d) = bands_[d][i];
      m(i + d, i) = bands_[d][i];
    }
  }
  return m;
}

// --- ConstraintMatrix ---

ConstraintMatrix::ConstraintMatrix(std::size_t n) : n_(n), selected_{0, 1, n - 2, n - 1} {
  require_window(n);
}

double ConstraintMatrix::operator()(std::size_t row, std::size_t col) const {
  return selected_.at(row) == col ? 1.0 : 0.0;
}

std::array<double, 4> ConstraintMatrix::apply(std::span<const double> v) const {
  if (v.size() != n_) throw InvalidDimension("constraint matrix: vector length mismatch");
  return {v[selected_[0]], v[selected_[1]], v[selected_[2]], v[selected_[3]]};
}

Eigen::MatrixXd ConstraintMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, n_);
  for (std::size_t r = 0; r < 4; ++r) m(r, selected_[r]) = 1.0;
  return m;
}

// --- builders ---

JerkMatrix build_jerk_matrix(std::size_t n) { return JerkMatrix(n); }

BandedSymmetricMatrix build_metric(const JerkMatrix& jerk) {
  const std::size_t n = jerk.cols();
  BandedSymmetricMatrix r(n, 3);
  // Column j of A is nonzero on rows j..j+3 only.
  for (std::size_t d = 0; d <= 3; ++d) {
    auto band = r.diagonal(d);
    for (std::size_t i = 0; i + d < n; ++i) {
      const std::size_t j = i + d;
      double s = 0.0;
      for (std::size_t row = j; row <= i + 3; ++row) s += jerk(row, i) * jerk(row, j);
      band[i] = s;
    }
  }
  return r;
}

ConstraintMatrix build_constraints(std::size_t n) { return ConstraintMatrix(n); }

std::shared_ptr<const DeformationShape> build_shape(std::size_t n) {
  require_window(n);
  JerkMatrix jerk = build_jerk_matrix(n);
  BandedSymmetricMatrix metric = build_metric(jerk);
  ConstraintMatrix constraints = build_constraints(n);
  const BandedLdlt ldlt(metric);

  // G = w - Y (B Y)^-1 (B w),  w = R^-1 1,  Y = R^-1 B^T
  std::vector<WideReal> w(n, WideReal(1));
  ldlt.solve_in_place(w);

  const auto& sel = constraints.selected();
  std::array<std::vector<WideReal>, 4> y;
  for (std::size_t c = 0; c < 4; ++c) {
    y[c].assign(n, WideReal(0));
    y[c][sel[c]] = 1;
    ldlt.solve_in_place(y[c]);
  }
  std::array<std::array<WideReal, 4>, 4> schur{};
  std::array<WideReal, 4> bw{};
  for (std::size_t r = 0; r < 4; ++r) {
    bw[r] = w[sel[r]];
    for (std::size_t c = 0; c < 4; ++c) schur[r][c] = y[c][sel[r]];
  }
  const auto z = solve_4x4(schur, bw);

  std::vector<WideReal> g(w);
  WideReal sum_sq = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t c = 0; c < 4; ++c) g[j] -= z[c] * y[c][j];
    sum_sq += g[j] * g[j];
  }
  const double norm = std::sqrt(static_cast<double>(sum_sq));
  if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalDegeneracy("raw shape has zero norm");
  const WideReal scale = static_cast<WideReal>(std::sqrt(static_cast<double>(n)) / norm);

  std::vector<double> raw(n);
  std::vector<double> shape(n);
  for (std::size_t j = 0; j < n; ++j) {
    raw[j] = static_cast<double>(g[j]);
    shape[j] = static_cast<double>(g[j] * scale);
  }
  for (std::size_t idx : sel) {
    if (std::abs(shape[idx]) >= kConstrainedEntryTolerance) {
      throw NumericalDegeneracy("constrained entry " + std::to_string(idx) +
                                " of the shape is not negligible");
    }
    shape[idx] = 0.0;
  }

  return std::make_shared<const DeformationShape>(DeformationShape{
      n, std::move(jerk), std::move(metric), std::move(constraints), std::move(raw), std::move(shape)});
}

// --- operator ---

DeformationOperator::DeformationOperator(std::shared_ptr<const DeformationShape> shape, double mu,
                                         double delta)
    : shape_(std::move(shape)), mu_(mu), delta_(delta) {
  if (!shape_) throw InvalidParameter("deformation operator needs a shape");
  if (!(mu_ > 0.0)) throw InvalidParameter("mu must be positive");
  if (!(delta_ > 0.0)) throw InvalidParameter("delta must be positive");
}

void DeformationOperator::apply_in_place(std::span<double> waypoints, double force) const {
  if (waypoints.size() != n_waypoints()) {
    throw InvalidDimension("window has " + std::to_string(waypoints.size()) +
                           " waypoints, operator expects " + std::to_string(n_waypoints()));
  }
  const double gain = mu_ * delta_ * force;
  const auto& h = shape_->shape;
  for (std::size_t j = 0; j < waypoints.size(); ++j) waypoints[j] += gain * h[j];
}

DeformationOperator build_operator(const DeformationParams& params) {
  params.validate();
  return DeformationOperator(build_shape(params.waypoint_count()), params.mu, params.delta);
}

TrajectoryWindow deform(const DeformationOperator& op, const TrajectoryWindow& window, double force) {
  TrajectoryWindow out = window;
  op.apply_in_place(out.waypoints, force);
  return out;
}

}  // namespace pitd
