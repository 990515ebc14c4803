#include "pitd/scenario.hpp"

#include "pitd/error.hpp"
#include "pitd/format.hpp"
#include "pitd/trace_io.hpp"

#include <fstream>
#include <ostream>

namespace pitd {
namespace {

template <class Writer>
std::filesystem::path write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
  return path;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
  ScenarioResult result;
  result.name = cfg.name;
  result.trace = run_loop(cfg.to_setup());
  result.metrics = compute_metrics(result.trace, cfg.metrics);

  std::filesystem::create_directories(out_dir);
  const auto base = out_dir / cfg.output_prefix;
  result.files.push_back(write_file(base.string() + "_trace.csv",
                                    [&](std::ostream& o) { write_trace_csv(o, result.trace); }));
  result.files.push_back(write_file(base.string() + "_events.csv",
                                    [&](std::ostream& o) { write_events_csv(o, result.trace); }));
  result.files.push_back(write_file(base.string() + "_metrics.txt", [&](std::ostream& o) {
    o << "scenario = " << cfg.name << '\n';
    write_metrics(o, result.metrics);
  }));
  return result;
}

ComparisonResult run_comparison(const ScenarioConfig& a, const ScenarioConfig& b,
                                const std::filesystem::path& out_dir) {
  if (a.loop.stop_time != b.loop.stop_time) {
    throw ConfigError("compare: trial durations differ (" + format_real(a.loop.stop_time) +
                      " vs " + format_real(b.loop.stop_time) + ")");
  }
  if (a.output_prefix == b.output_prefix) {
    throw ConfigError("compare: both configs write to prefix '" + a.output_prefix + "'");
  }
  ComparisonResult result{run_scenario(a, out_dir), run_scenario(b, out_dir)};
  write_file(out_dir / (a.output_prefix + "_vs_" + b.output_prefix + "_comparison.txt"),
             [&](std::ostream& o) { write_comparison(o, result); });
  return result;
}

void write_comparison(std::ostream& out, const ComparisonResult& r) {
  const auto& m1 = r.first.metrics;
  const auto& m2 = r.second.metrics;
  out << "metric," << r.first.name << ',' << r.second.name << '\n'
      << "applied_effort," << format_real(m1.applied_effort) << ','
      << format_real(m2.applied_effort) << '\n'
      << "interaction_percent," << format_real(m1.interaction_percent) << ','
      << format_real(m2.interaction_percent) << '\n'
      << "collision_percent," << format_real(m1.collision_percent) << ','
      << format_real(m2.collision_percent) << '\n'
      << "tracking_error," << format_real(m1.tracking_error) << ','
      << format_real(m2.tracking_error) << '\n';
}

}  // namespace pitd
