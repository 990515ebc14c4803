#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pitd {

/// Matrix or vector sizes that do not fit together, or a window too short to deform.
class InvalidDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter violates its documented domain (non-positive period, etc).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A factorization or solve that should always succeed did not.
class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative oracle ran out of budget.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Scenario configuration problem. `line()` is 0 when the error is not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The simulation produced a non-finite value and stopped.
class SimulationHalted : public std::runtime_error {
 public:
  SimulationHalted(const std::string& what, std::size_t tick)
      : std::runtime_error(what + " (trace index " + std::to_string(tick) + ")"), tick_(tick) {}
  std::size_t tick() const noexcept { return tick_; }

 private:
  std::size_t tick_;
};

}  // namespace pitd
