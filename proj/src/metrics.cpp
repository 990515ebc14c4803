#include "pitd/metrics.hpp"

#include "pitd/error.hpp"
#include "pitd/format.hpp"

#include <cmath>
#include <ostream>
#include <vector>

namespace pitd {
namespace {

void require_nonempty(const SimTrace& trace) {
  if (trace.size() == 0 || trace.axis_count() == 0) throw InvalidDimension("metrics: empty trace");
}

double norm_at(const SimTrace& trace, std::size_t i, std::vector<double> AxisTrace::*column) {
  double sq = 0.0;
  for (const auto& ax : trace.axes) sq += (ax.*column)[i] * (ax.*column)[i];
  return std::sqrt(sq);
}

template <class F>
double trapezoid(const SimTrace& trace, F&& integrand) {
  double total = 0.0;
  double prev = integrand(0);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double cur = integrand(i);
    total += 0.5 * (prev + cur) * (trace.time[i] - trace.time[i - 1]);
    prev = cur;
  }
  return total;
}

std::vector<double> point_at(const SimTrace& trace, std::size_t i,
                             std::vector<double> AxisTrace::*column) {
  std::vector<double> p(trace.axis_count());
  for (std::size_t a = 0; a < p.size(); ++a) p[a] = (trace.axes[a].*column)[i];
  return p;
}

}  // namespace

double applied_effort(const SimTrace& trace) {
  require_nonempty(trace);
  return trapezoid(trace, [&](std::size_t i) { return norm_at(trace, i, &AxisTrace::human_force); });
}

double interaction_percent(const SimTrace& trace, double threshold) {
  require_nonempty(trace);
  if (!(threshold >= 0.0)) throw InvalidParameter("metrics: threshold must be non-negative");
  std::size_t above = 0;
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (norm_at(trace, i, &AxisTrace::human_force) > threshold) ++above;
  return 100.0 * static_cast<double>(above) / static_cast<double>(trace.size());
}

double tracking_error(const SimTrace& trace, std::span<const Obstacle> obstacles, double clearance) {
  require_nonempty(trace);
  return trapezoid(trace, [&](std::size_t i) {
    const auto original = point_at(trace, i, &AxisTrace::original_position);
    for (const auto& o : obstacles)
      if (o.distance_to_center(original) - o.radius <= clearance) return 0.0;
    double sq = 0.0;
    for (const auto& ax : trace.axes) {
      const double e = ax.position[i] - ax.original_position[i];
      sq += e * e;
    }
    return std::sqrt(sq);
  });
}

double collision_percent(const SimTrace& trace, std::span<const Obstacle> obstacles,
                         double cursor_radius) {
  require_nonempty(trace);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto x = point_at(trace, i, &AxisTrace::position);
    for (const auto& o : obstacles) {
      if (o.distance_to_center(x) < o.radius + cursor_radius) {
        ++hits;
        break;
      }
    }
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(trace.size());
}

TrialMetrics compute_metrics(const SimTrace& trace, const MetricsConfig& cfg) {
  return TrialMetrics{applied_effort(trace), interaction_percent(trace, cfg.interaction_threshold),
                      collision_percent(trace, cfg.obstacles, cfg.cursor_radius),
                      tracking_error(trace, cfg.obstacles, cfg.clearance)};
}

void write_metrics(std::ostream& out, const TrialMetrics& m) {
  out << "applied_effort = " << format_real(m.applied_effort) << '\n'
      << "interaction_percent = " << format_real(m.interaction_percent) << '\n'
      << "collision_percent = " << format_real(m.collision_percent) << '\n'
      << "tracking_error = " << format_real(m.tracking_error) << '\n';
}

}  // namespace pitd
