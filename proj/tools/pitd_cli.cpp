// pitd: run scenario configs, compare two conditions, dump the deformation shape.
#include "pitd/deformation.hpp"
#include "pitd/error.hpp"
#include "pitd/format.hpp"
#include "pitd/oracle.hpp"
#include "pitd/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <mutex>
#include <random>
#include <thread>

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitHalted = 3;

std::mutex g_print;

int report(const std::exception& ex) {
  std::lock_guard lock(g_print);
  std::cerr << "pitd: " << ex.what() << '\n';
  return dynamic_cast<const pitd::SimulationHalted*>(&ex) ? kExitHalted : kExitFailure;
}

void print_result(const pitd::ScenarioResult& r) {
  std::lock_guard lock(g_print);
  std::cout << r.name << ": " << r.trace.size() << " samples, " << r.trace.events.size()
            << " events";
  for (const auto& f : r.files) std::cout << "\n  " << f.string();
  std::cout << '\n';
}

int cmd_run(const std::vector<std::string>& paths, const std::string& out, unsigned jobs) {
  std::vector<pitd::ScenarioConfig> configs;
  try {
    for (const auto& p : paths) {
      auto batch = pitd::load_scenarios(p);
      configs.insert(configs.end(), batch.begin(), batch.end());
    }
  } catch (const std::exception& ex) {
    return report(ex);
  }

  std::atomic<std::size_t> next{0};
  std::atomic<int> status{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < configs.size();) {
      try {
        print_result(pitd::run_scenario(configs[i], out));
      } catch (const std::exception& ex) {
        const int code = report(ex);
        int expected = 0;
        status.compare_exchange_strong(expected, code);
      }
    }
  };
  jobs = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(configs.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return status;
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& out) {
  try {
    const auto result = pitd::run_comparison(pitd::load_config(a), pitd::load_config(b), out);
    print_result(result.first);
    print_result(result.second);
    pitd::write_comparison(std::cout, result);
    return 0;
  } catch (const std::exception& ex) {
    return report(ex);
  }
}

int cmd_dump_shape(std::size_t n, double mu, double delta) {
  try {
    const auto shape = pitd::build_shape(n);
    const pitd::DeformationOperator op(shape, mu, delta);
    std::cout << "# N = " << n << ", mu = " << pitd::format_real(mu)
              << ", delta = " << pitd::format_real(delta)
              << ", unit-force displacement = mu * delta * H\n";
    pitd::write_shape(std::cout, op.shape());
    return 0;
  } catch (const std::exception& ex) {
    return report(ex);
  }
}

// Closed form vs dense saddle-point solve on random windows.
int cmd_check(std::uint64_t seed, std::size_t cases, double tolerance) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> n_dist(pitd::kMinWaypoints, 50);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> force_dist(-10.0, 10.0);
  std::uniform_real_distribution<double> log_delta(std::log(1e-3), std::log(1e-1));
  std::uniform_real_distribution<double> log_mu(std::log(0.05), std::log(20.0));

  double worst = 0.0;
  std::size_t failures = 0;
  try {
    for (std::size_t c = 0; c < cases; ++c) {
      const std::size_t n = n_dist(rng);
      const double delta = std::exp(log_delta(rng));
      const double mu = std::exp(log_mu(rng));
      const double force = force_dist(rng);
      pitd::TrajectoryWindow w{0.0, delta, std::vector<double>(n)};
      for (auto& v : w.waypoints) v = unit(rng);

      const pitd::DeformationOperator op(pitd::build_shape(n), mu, delta);
      const auto fast = pitd::deform(op, w, force);
      const auto e = pitd::oracle::EnergyFunctional::from_params(n, mu, delta);
      const auto ref = pitd::oracle::solve_kkt(
          e, Eigen::Map<const Eigen::VectorXd>(w.waypoints.data(), static_cast<Eigen::Index>(n)),
          force);
      double err = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        err = std::max(err, std::abs(fast.waypoints[j] - ref.deformed(static_cast<Eigen::Index>(j))));
      worst = std::max(worst, err);
      if (err > tolerance) {
        ++failures;
        std::cout << "case " << c << ": N=" << n << " mu=" << pitd::format_real(mu)
                  << " delta=" << pitd::format_real(delta) << " f=" << pitd::format_real(force)
                  << " max error " << pitd::format_real(err) << '\n';
      }
    }
  } catch (const std::exception& ex) {
    return report(ex);
  }
  std::cout << cases << " cases, seed " << seed << ", max error " << pitd::format_real(worst)
            << ", " << failures << " above " << pitd::format_real(tolerance) << '\n';
  return failures == 0 ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory deformation on impedance control: scenario runner"};
  app.require_subcommand(1);

  std::string out = "out";

  auto* run = app.add_subcommand("run", "Run scenario configs (sweeps expand to several runs)");
  std::vector<std::string> run_paths;
  unsigned jobs = 1;
  run->add_option("configs", run_paths, "Config files")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory")->capture_default_str();
  run->add_option("-j,--jobs", jobs, "Scenarios to run concurrently")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* compare = app.add_subcommand("compare", "Run two configs and tabulate their metrics");
  std::string cfg_a, cfg_b;
  compare->add_option("first", cfg_a, "Baseline config")->required()->check(CLI::ExistingFile);
  compare->add_option("second", cfg_b, "Other config")->required()->check(CLI::ExistingFile);
  compare->add_option("--out", out, "Output directory")->capture_default_str();

  auto* dump = app.add_subcommand("dump-shape", "Print the shape vector H, one value per line");
  std::size_t n = 101;
  double mu = 1.0, delta = 1e-2;
  dump->add_option("--n", n, "Waypoint count")->capture_default_str();
  dump->add_option("--mu", mu, "Admittance")->capture_default_str();
  dump->add_option("--delta", delta, "Waypoint spacing [s]")->capture_default_str();

  auto* check = app.add_subcommand("check", "Compare the closed form against a dense KKT solve");
  std::uint64_t seed = 1;
  std::size_t cases = 200;
  double tolerance = 1e-8;
  check->add_option("--seed", seed, "RNG seed")->capture_default_str();
  check->add_option("--cases", cases, "Number of random cases")->capture_default_str();
  check->add_option("--tol", tolerance, "Per-waypoint tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*run) return cmd_run(run_paths, out, jobs);
  if (*compare) return cmd_compare(cfg_a, cfg_b, out);
  if (*dump) return cmd_dump_shape(n, mu, delta);
  return cmd_check(seed, cases, tolerance);
}
