#include "pitd/error.hpp"
#include "pitd/scenario.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pitd;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = PITD_SCENARIO_DIR;

const char* const kMinimal = R"(
[loop]
controller_period = 1e-3
deformation_period = 1e-2
stop_time = 0.5

[plant]
mass = 1
damping = 0.5

[gains]
stiffness = 100
damping = 10

[deformation]
tau = 0.1
mu = 1

[trajectory]
type = sine
amplitude = -0.75

[force]
type = pulse
magnitude = 1
start = 0.1
end = 0.2
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("pitd_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("shipped baseline carries the reference loop and deformation values") {
  const auto cfg = load_config(kScenarios / "fig4_baseline.cfg");
  CHECK(cfg.name == "fig4_baseline");
  CHECK(cfg.loop.controller_period == 1e-3);
  CHECK(cfg.loop.deformation_period == 1e-2);
  CHECK(cfg.tau == 1.0);
  CHECK(cfg.mu == std::vector<double>{1.0});
  CHECK(cfg.trajectory.kind == TrajectoryKind::kSine);
  CHECK(cfg.trajectory.amplitude == std::vector<double>{-0.75});
  CHECK(cfg.force.kind == ForceKind::kPulse);
  CHECK(cfg.force.start == 1.0);
  CHECK(cfg.force.end == 2.0);
}

TEST_CASE("every shipped scenario parses") {
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(kScenarios)) {
    if (entry.path().extension() != ".cfg") continue;
    CAPTURE(entry.path().string());
    CHECK_NOTHROW(load_scenarios(entry.path()));
    ++files;
  }
  CHECK(files >= 7);
}

TEST_CASE("missing required key is named") {
  const auto msg = config_error(replace(kMinimal, "mass = 1\n", ""));
  CHECK(msg.find("mass") != std::string::npos);
  CHECK(config_error(replace(kMinimal, "tau = 0.1\n", "")).find("tau") != std::string::npos);
}

TEST_CASE("non-integer rate ratio is a configuration error") {
  const auto msg = config_error(replace(kMinimal, "deformation_period = 1e-2", "deformation_period = 0.0015"));
  CHECK(msg.find("integer") != std::string::npos);
}

TEST_CASE("unknown keys and sections are errors with a line number") {
  try {
    parse_config(replace(kMinimal, "mass = 1\n", "mass = 1\nmas = 2\n"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 9);
    CHECK(std::string(e.what()).find("plant.mas") != std::string::npos);
  }
  CHECK(config_error(std::string(kMinimal) + "[bogus]\nx = 1\n").find("bogus") != std::string::npos);
}

TEST_CASE("syntax errors report their line") {
  try {
    parse_config("[loop]\ncontroller_period 1e-3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
  CHECK(config_error("x = 1\n").find("section") != std::string::npos);
  CHECK(config_error("[loop\n").find("line 1") != std::string::npos);
  CHECK(config_error(replace(kMinimal, "mass = 1", "mass = 1kg")).find("number") != std::string::npos);
  CHECK(config_error(replace(kMinimal, "mass = 1\n", "mass = 1\nmass = 2\n")).find("duplicate") !=
        std::string::npos);
}

TEST_CASE("validation errors name the violated rule") {
  CHECK(config_error(replace(kMinimal, "mass = 1", "mass = 0")).find("plant.mass") != std::string::npos);
  CHECK(config_error(replace(kMinimal, "mu = 1", "mu = -1")).find("mu") != std::string::npos);
  CHECK(config_error(replace(kMinimal, "tau = 0.1", "tau = 0.03")).find("tau") != std::string::npos);
  CHECK(config_error(replace(kMinimal, "type = sine", "type = spiral")).find("spiral") != std::string::npos);
  CHECK(config_error(replace(kMinimal, "end = 0.2", "end = 0.05")).find("force.end") != std::string::npos);
}

TEST_CASE("comments and blank lines are ignored; defaults fill the rest") {
  const auto cfg = parse_config(std::string("# header\n") + replace(kMinimal, "mass = 1", "mass = 1  # kg"));
  CHECK(cfg.name == "scenario");
  CHECK(cfg.output_prefix == "scenario");
  CHECK(cfg.axes == 1);
  CHECK(cfg.plant[0].mass == 1.0);
  CHECK(cfg.trajectory.frequency == std::vector<double>{1.0});
  CHECK_FALSE(cfg.filter.lowpass_cutoff);
  CHECK_FALSE(cfg.constraints);
  CHECK(cfg.metrics.interaction_threshold == 0.5);
  CHECK(cfg.metrics.clearance == 0.2);
  CHECK(cfg.metrics.cursor_radius == 0.02);
}

TEST_CASE("per-axis values broadcast or must match the axis count") {
  std::string two = replace(kMinimal, "[loop]", "[scenario]\naxes = 2\n\n[loop]");
  const auto cfg = parse_config(replace(two, "mu = 1", "mu = 1, 0"));
  CHECK(cfg.axes == 2);
  CHECK(cfg.plant.size() == 2);
  CHECK(cfg.mu == std::vector<double>{1.0, 0.0});
  CHECK(cfg.force.magnitude == std::vector<double>{1.0, 1.0});
  CHECK(config_error(replace(two, "mu = 1", "mu = 1, 2, 3")).find("deformation.mu") != std::string::npos);
}

TEST_CASE("table force and polynomial trajectory use one group per axis") {
  std::string text = replace(kMinimal, "[loop]", "[scenario]\naxes = 2\n\n[loop]");
  text = replace(text, "type = sine\namplitude = -0.75", "type = polynomial\ncoefficients = 0, 1; 2, 0, -1");
  text = replace(text, "type = pulse\nmagnitude = 1\nstart = 0.1\nend = 0.2",
                 "type = table\ntimes = 0, 0.2\nvalues = 1, 0; -1, 0.5");
  const auto cfg = parse_config(text);
  CHECK(cfg.trajectory.coefficients == std::vector<std::vector<double>>{{0, 1}, {2, 0, -1}});
  CHECK(cfg.force.values == std::vector<std::vector<double>>{{1, -1}, {0, 0.5}});
  CHECK_NOTHROW(cfg.to_setup().validate());
}

TEST_CASE("circle and avoidance sections build a two-axis setup") {
  const auto cfg = load_config(kScenarios / "circle_icpitd.cfg");
  CHECK(cfg.axes == 2);
  CHECK(cfg.environment.size() == 2);
  CHECK(cfg.metrics.obstacles.size() == 2);
  CHECK(cfg.tau == 1.25);
  CHECK(cfg.mu == std::vector<double>{0.35, 0.35});
  CHECK(cfg.gains[1].stiffness == 35.0);
  CHECK(*cfg.filter.deadband == 0.5);
  CHECK_THROWS_AS(parse_config(replace(slurp(kScenarios / "circle_ic.cfg"), "axes = 2", "axes = 3")),
                  ConfigError);
}

TEST_CASE("constraints section") {
  const auto cfg = parse_config(std::string(kMinimal) +
                                "[constraints]\nmin = -1\nmax = 1\nobstacle = 0.5, 0.1\nmargin = 0.01\n");
  REQUIRE(cfg.constraints);
  CHECK(cfg.constraints->limits[0]->max == 1.0);
  CHECK(cfg.constraints->obstacles.size() == 1);
  CHECK(config_error(std::string(kMinimal) + "[constraints]\nmin = -1\n").find("max") != std::string::npos);
}

TEST_CASE("sweep expands into one config per value") {
  const auto list = load_scenarios(kScenarios / "fig6_tau_sweep.cfg");
  REQUIRE(list.size() == 3);
  CHECK(list[0].tau == 0.5);
  CHECK(list[1].tau == 1.0);
  CHECK(list[2].tau == 2.0);
  CHECK(list[0].name == "fig6_tau_sweep_tau0.5");
  CHECK(list[2].output_prefix == "fig6_tau_sweep_tau2");
  CHECK_THROWS_AS(load_config(kScenarios / "fig6_tau_sweep.cfg"), ConfigError);
  CHECK(config_error(std::string(kMinimal) + "[sweep]\nparameter = loop.stop_time\nvalues = 1, 2\n")
            .find("sweep") != std::string::npos);
}

TEST_CASE("sweep values are validated like the base config") {
  const std::string text =
      std::string(kMinimal) + "[sweep]\nparameter = loop.deformation_period\nvalues = 0.01, 0.0015\n";
  CHECK_THROWS_AS(parse_scenarios(text), ConfigError);
  CHECK_THROWS_AS(parse_scenarios(std::string(kMinimal) + "[sweep]\nparameter = tau\nvalues = 1\n"),
                  ConfigError);
}

TEST_CASE("running a scenario writes trace, events and metrics; reruns are byte-identical") {
  const auto dir = scratch_dir("run");
  const auto cfg = parse_config(kMinimal, "mini");
  const auto first = run_scenario(cfg, dir / "a");
  const auto second = run_scenario(cfg, dir / "b");
  REQUIRE(first.files.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CAPTURE(first.files[i].string());
    CHECK(fs::exists(first.files[i]));
    CHECK(first.files[i].filename() == second.files[i].filename());
    CHECK(slurp(first.files[i]) == slurp(second.files[i]));
  }
  CHECK(first.files[0].filename() == "mini_trace.csv");
  CHECK(first.files[1].filename() == "mini_events.csv");
  CHECK(first.files[2].filename() == "mini_metrics.txt");
  CHECK(slurp(first.files[2]).rfind("scenario = mini\napplied_effort = ", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("comparison of two impedance-only runs gives identical metrics") {
  const auto dir = scratch_dir("compare");
  auto a = load_config(kScenarios / "circle_ic.cfg");
  a.loop.stop_time = 1.0;
  auto b = a;
  b.name = b.output_prefix = "circle_ic_copy";
  const auto r = run_comparison(a, b, dir);
  CHECK(r.first.metrics.applied_effort == r.second.metrics.applied_effort);
  CHECK(r.first.metrics.interaction_percent == r.second.metrics.interaction_percent);
  CHECK(r.first.metrics.collision_percent == r.second.metrics.collision_percent);
  CHECK(r.first.metrics.tracking_error == r.second.metrics.tracking_error);
  CHECK(fs::exists(dir / "circle_ic_vs_circle_ic_copy_comparison.txt"));

  b.loop.stop_time = 2.0;
  CHECK_THROWS_AS(run_comparison(a, b, dir), ConfigError);
  fs::remove_all(dir);
}
