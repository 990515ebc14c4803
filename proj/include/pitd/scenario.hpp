#pragma once
/**
 * @file scenario.hpp
 * @brief Scenario configs and their execution.
 *
 * Config grammar (one item per line, `#` starts a comment):
 *
 *   [section]
 *   key = value
 *
 * Values are numbers, comma-separated lists, or `;`-separated groups of lists
 * (one group per axis). A per-axis list of length 1 applies to every axis.
 * Unknown sections and keys are errors. See README.md for every key and default.
 */

#include "pitd/metrics.hpp"
#include "pitd/simulation.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pitd {

/// Raw `[section] key = value` entries with their line numbers.
class ConfigDocument {
 public:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
    std::size_t line = 0;
  };

  /// Throws ConfigError with the offending line number on a syntax error.
  static ConfigDocument parse(std::string_view text);

  const std::vector<Entry>& entries() const { return entries_; }
  const Entry* find(std::string_view section, std::string_view key) const;
  std::vector<const Entry*> find_all(std::string_view section, std::string_view key) const;
  bool has_section(std::string_view section) const;
  /// Replaces the value of an existing entry or appends a new one.
  void set(std::string_view section, std::string_view key, std::string value);
  void erase_section(std::string_view section);

 private:
  std::vector<Entry> entries_;
};

enum class TrajectoryKind { kSine, kCircle, kConstant, kPolynomial };

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::kSine;
  std::vector<double> amplitude, frequency, phase, offset;  // sine
  double radius = 0.0;                                      // circle
  std::array<double, 2> center{0.0, 0.0};                   // circle
  double angular_rate = 1.0;                                // circle
  std::vector<double> values;                               // constant
  std::vector<std::vector<double>> coefficients;            // polynomial

  std::shared_ptr<const OriginalTrajectory> build() const;
};

enum class ForceKind { kNone, kPulse, kTable, kAvoidance };

struct ForceSpec {
  ForceKind kind = ForceKind::kNone;
  std::vector<double> magnitude;            // pulse
  double start = 0.0, end = 0.0;            // pulse
  std::vector<double> times;                // table
  std::vector<std::vector<double>> values;  // table, one row per breakpoint
  double gain = 0.0, standoff = 0.0;        // avoidance

  std::shared_ptr<const ForceProfile> build(std::size_t axes,
                                            const std::vector<Obstacle>& environment) const;
};

struct ScenarioConfig {
  std::string name;
  std::size_t axes = 1;
  LoopConfig loop;
  std::vector<PlantParams> plant;
  std::vector<ImpedanceGains> gains;
  std::optional<std::vector<PlantState>> initial_state;
  double tau = 1.0;
  std::vector<double> mu;  ///< per axis, 0 disables deformation
  TrajectorySpec trajectory;
  ForceSpec force;
  ForceFilterConfig filter;
  std::optional<ConstraintSet> constraints;
  std::vector<Obstacle> environment;  ///< obstacles the synthetic human and metrics see
  MetricsConfig metrics;
  std::string output_prefix;

  SimulationSetup to_setup() const;
};

/// Parses and validates one scenario. Throws ConfigError (with line number
/// where applicable) naming the offending key. Rejects `[sweep]` configs.
ScenarioConfig parse_config(std::string_view text, std::string_view default_name = "scenario");

/// Like parse_config, but expands a `[sweep]` section into one config per value.
std::vector<ScenarioConfig> parse_scenarios(std::string_view text,
                                            std::string_view default_name = "scenario");

/// Reads a file; the default scenario name is the file stem.
std::vector<ScenarioConfig> load_scenarios(const std::filesystem::path& path);
ScenarioConfig load_config(const std::filesystem::path& path);

struct ScenarioResult {
  std::string name;
  SimTrace trace;
  TrialMetrics metrics;
  std::vector<std::filesystem::path> files;
};

/// Runs the loop and writes `<prefix>_trace.csv`, `<prefix>_events.csv` and
/// `<prefix>_metrics.txt` into `out_dir` (created if missing).
ScenarioResult run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

struct ComparisonResult {
  ScenarioResult first;
  ScenarioResult second;
};

/// Runs both configs and writes `<a>_vs_<b>_comparison.txt`. Throws ConfigError
/// when the trial durations differ.
ComparisonResult run_comparison(const ScenarioConfig& a, const ScenarioConfig& b,
                                const std::filesystem::path& out_dir);

void write_comparison(std::ostream& out, const ComparisonResult& result);

}  // namespace pitd
