#include "pitd/deformation.hpp"
#include "pitd/error.hpp"
#include "pitd/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace pitd;

namespace {

double norm2(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

TEST_CASE("jerk matrix carries the third-difference stencil down each column") {
  const JerkMatrix a = build_jerk_matrix(6);
  CHECK(a.rows() == 9);
  CHECK(a.cols() == 6);
  for (std::size_t j = 0; j < 6; ++j) {
    CHECK(a(j, j) == 1.0);
    CHECK(a(j + 1, j) == -3.0);
    CHECK(a(j + 2, j) == 3.0);
    CHECK(a(j + 3, j) == -1.0);
    if (j > 0) CHECK(a(j - 1, j) == 0.0);
    if (j + 4 < a.rows()) CHECK(a(j + 4, j) == 0.0);
  }
  const std::vector<double> cubic{0, 1, 8, 27, 64, 125};
  const auto d = a.apply(cubic);
  // Interior rows give the backward third difference of j^3, which is 6.
  for (std::size_t i = 3; i < 6; ++i) CHECK(d[i] == 6.0);
}

TEST_CASE("metric is banded Toeplitz with coefficients 20, -15, 6, -1") {
  for (std::size_t n : {5u, 9u, 40u}) {
    const auto r = build_metric(build_jerk_matrix(n));
    CHECK(r.half_bandwidth() == 3);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(r(i, i) == 20.0);
      if (i + 1 < n) CHECK(r(i, i + 1) == -15.0);
      if (i + 2 < n) CHECK(r(i, i + 2) == 6.0);
      if (i + 3 < n) CHECK(r(i, i + 3) == -1.0);
      if (i + 4 < n) CHECK(r(i, i + 4) == 0.0);
    }
    const Eigen::MatrixXd dense = r.to_dense();
    CHECK((dense - dense.transpose()).norm() == 0.0);
    CHECK((dense - oracle::dense_metric(n)).norm() == 0.0);
  }
}

TEST_CASE("metric apply agrees with the dense product") {
  const std::size_t n = 17;
  const auto r = build_metric(build_jerk_matrix(n));
  std::vector<double> v(n);
  std::iota(v.begin(), v.end(), -3.0);
  const auto y = r.apply(v);
  const Eigen::VectorXd ref = r.to_dense() * Eigen::Map<Eigen::VectorXd>(v.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(ref(i)).epsilon(1e-15));
}

TEST_CASE("constraint matrix selects the two first and two last waypoints") {
  const auto b = build_constraints(7);
  CHECK(b.selected() == std::array<std::size_t, 4>{0, 1, 5, 6});
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7};
  CHECK(b.apply(v) == std::array<double, 4>{1, 2, 6, 7});
  CHECK((b.to_dense() - oracle::dense_constraints(7)).norm() == 0.0);
}

TEST_CASE("windows shorter than five waypoints are rejected") {
  CHECK_THROWS_AS(build_jerk_matrix(4), InvalidDimension);
  CHECK_THROWS_AS(build_shape(3), InvalidDimension);
  CHECK_THROWS_AS(build_constraints(0), InvalidDimension);
  CHECK_NOTHROW(build_shape(kMinWaypoints));
}

TEST_CASE("shape for five waypoints is a single bump of height sqrt(5)") {
  const auto s = build_shape(5);
  CHECK(s->shape[0] == 0.0);
  CHECK(s->shape[1] == 0.0);
  CHECK(s->shape[2] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(s->shape[3] == 0.0);
  CHECK(s->shape[4] == 0.0);
}

TEST_CASE("shape invariants hold across window sizes") {
  for (std::size_t n : {5u, 6u, 11u, 31u, 101u, 1001u, 5001u}) {
    CAPTURE(n);
    const auto s = build_shape(n);
    REQUIRE(s->shape.size() == n);
    CHECK(s->shape[0] == 0.0);
    CHECK(s->shape[1] == 0.0);
    CHECK(s->shape[n - 2] == 0.0);
    CHECK(s->shape[n - 1] == 0.0);
    CHECK(norm2(s->shape) == doctest::Approx(std::sqrt(double(n))).epsilon(1e-12));
    // H is G rescaled.
    const double scale = std::sqrt(double(n)) / norm2(s->raw_shape);
    for (std::size_t j = 0; j < n; j += std::max<std::size_t>(1, n / 37))
      CHECK(s->shape[j] == doctest::Approx(scale * s->raw_shape[j]).epsilon(1e-12));
    // Symmetric about the window middle, positive inside.
    for (std::size_t j = 2; j + 2 < n; ++j) {
      REQUIRE(s->shape[j] > 0.0);
      REQUIRE(s->shape[j] == doctest::Approx(s->shape[n - 1 - j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("shape matches the closed-form sextic up to 5001 waypoints") {
  for (std::size_t n : {7u, 50u, 333u, 1001u, 3395u, 5001u}) {
    CAPTURE(n);
    const auto s = build_shape(n);
    const Eigen::VectorXd ref = oracle::polynomial_shape(n);
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(s->shape[j] - ref(j)));
    CHECK(err < 1e-12 * ref.maxCoeff());
  }
}

TEST_CASE("reference window: peak of H for 101 waypoints") {
  // Frozen from a 50-digit evaluation of the sextic form.
  const auto s = build_shape(101);
  const double peak = *std::max_element(s->shape.begin(), s->shape.end());
  CHECK(peak == doctest::Approx(1.7214429441061689).epsilon(1e-14));
  CHECK(s->shape[50] == peak);
}

TEST_CASE("window size follows tau / delta + 1") {
  CHECK(DeformationParams{1.0, 1e-2, 1.0}.waypoint_count() == 101);
  CHECK(DeformationParams{1.0, 1e-1, 1.0}.waypoint_count() == 11);
  CHECK(DeformationParams{1.0, 1e-3, 1.0}.waypoint_count() == 1001);
  CHECK(DeformationParams{1.25, 1e-3, 0.35}.waypoint_count() == 1251);
  CHECK_THROWS_AS(DeformationParams({1.0, 0.3, 1.0}).waypoint_count(), InvalidParameter);
  CHECK_THROWS_AS(DeformationParams({0.0, 0.1, 1.0}).validate(), InvalidParameter);
  CHECK_THROWS_AS(DeformationParams({1.0, 0.1, 0.0}).validate(), InvalidParameter);
  CHECK_THROWS_AS(DeformationParams({1.0, -0.1, 1.0}).validate(), InvalidParameter);
  CHECK_THROWS_AS(DeformationParams({0.2, 0.1, 1.0}).validate(), InvalidDimension);
}

TEST_CASE("deform with zero force leaves the window unchanged") {
  const auto op = build_operator({1.0, 1e-2, 1.0});
  TrajectoryWindow w{0.5, 1e-2, std::vector<double>(101)};
  for (std::size_t j = 0; j < 101; ++j) w.waypoints[j] = std::sin(0.1 * double(j));
  const auto out = deform(op, w, 0.0);
  CHECK(out.waypoints == w.waypoints);
  CHECK(out.start_time == w.start_time);
}

TEST_CASE("unit force on the reference window moves the middle by delta * max(H)") {
  const auto op = build_operator({1.0, 1e-2, 1.0});
  const TrajectoryWindow w{0.0, 1e-2, std::vector<double>(101, 0.0)};
  const auto out = deform(op, w, 1.0);
  const double peak = *std::max_element(out.waypoints.begin(), out.waypoints.end());
  CHECK(peak == doctest::Approx(0.017214429441061689).epsilon(1e-14));
  CHECK(out.waypoints[0] == 0.0);
  CHECK(out.waypoints[1] == 0.0);
  CHECK(out.waypoints[99] == 0.0);
  CHECK(out.waypoints[100] == 0.0);
}

TEST_CASE("displacement is linear in force") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const auto op = build_operator({0.37, 1e-2, 2.5});
  TrajectoryWindow w{0.0, 1e-2, std::vector<double>(38)};
  for (auto& v : w.waypoints) v = u(rng);
  for (int trial = 0; trial < 20; ++trial) {
    const double f1 = u(rng), f2 = u(rng);
    const auto a = deform(op, w, f1);
    const auto b = deform(op, w, f2);
    const auto ab = deform(op, w, f1 + f2);
    const auto chained = deform(op, a, f2);
    for (std::size_t j = 0; j < w.waypoints.size(); ++j) {
      const double d1 = a.waypoints[j] - w.waypoints[j];
      const double d2 = b.waypoints[j] - w.waypoints[j];
      CHECK(ab.waypoints[j] - w.waypoints[j] == doctest::Approx(d1 + d2).epsilon(1e-10).scale(1.0));
      CHECK(chained.waypoints[j] == doctest::Approx(ab.waypoints[j]).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("deform rejects a window of the wrong length") {
  const auto op = build_operator({1.0, 0.1, 1.0});
  const TrajectoryWindow w{0.0, 0.1, std::vector<double>(10, 0.0)};
  CHECK_THROWS_AS(deform(op, w, 1.0), InvalidDimension);
}

TEST_CASE("operator copies share one shape") {
  const auto op = build_operator({1.0, 0.1, 1.0});
  const DeformationOperator other(op.shared_shape(), 3.0, 0.1);
  CHECK(&op.intermediates() == &other.intermediates());
  CHECK(other.admittance() == 3.0);
  CHECK_THROWS_AS(DeformationOperator(op.shared_shape(), 0.0, 0.1), InvalidParameter);
  CHECK_THROWS_AS(DeformationOperator(nullptr, 1.0, 0.1), InvalidParameter);
}

TEST_CASE("window time stamps are start + j delta") {
  const TrajectoryWindow w{2.0, 0.25, std::vector<double>(5)};
  CHECK(w.time_at(0) == 2.0);
  CHECK(w.time_at(4) == 3.0);
}

TEST_CASE("shape files round-trip exactly") {
  const auto s = build_shape(61);
  std::stringstream ss;
  write_shape(ss, s->shape);
  const auto back = read_shape(ss);
  CHECK(back == s->shape);

  std::stringstream bad("0\n0\nnot-a-number\n");
  CHECK_THROWS(read_shape(bad));
}

TEST_CASE("shape reader skips the header printed by the command-line tool") {
  std::stringstream ss("# N = 5\n0\n0\n2.2360679774997898\n0\n0\n");
  const auto h = read_shape(ss);
  REQUIRE(h.size() == 5);
  CHECK(h[2] == 2.2360679774997898);
}
