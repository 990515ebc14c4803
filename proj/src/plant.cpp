#include "pitd/plant.hpp"

#include "pitd/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pitd {

PlantState step_plant(const PlantParams& params, const PlantState& state, double actuator_force,
                      double human_force, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("plant step must be positive");
  if (!(params.mass > 0.0) || !(params.damping >= 0.0)) {
    throw InvalidParameter("plant needs mass > 0 and damping >= 0");
  }
  const double u = actuator_force + human_force;
  if (!std::isfinite(u)) throw std::domain_error("non-finite force on plant");

  const double m = params.mass;
  const double a = params.damping / m;
  const double z = a * dt;
  // phi1 = (1 - e^{-a dt}) / a,  phi2 = (dt - phi1) / a; both tend to dt, dt^2/2 as a -> 0.
  double phi1 = dt;
  double phi2 = 0.5 * dt * dt;
  if (z > 0.0) {
    phi1 = -std::expm1(-z) / a;
    if (z < 0.5) {
      double term = 0.5, sum = 0.5;
      for (int k = 3; k < 20; ++k) {
        term *= -z / k;
        sum += term;
      }
      phi2 = sum * dt * dt;
    } else {
      phi2 = (dt - phi1) / a;
    }
  }
  PlantState next;
  next.velocity = state.velocity * std::exp(-z) + (u / m) * phi1;
  next.position = state.position + state.velocity * phi1 + (u / m) * phi2;
  return next;
}

double impedance_force(const ImpedanceGains& gains, double desired_position,
                       double desired_velocity, double position, double velocity) {
  return gains.stiffness * (desired_position - position) +
         gains.damping * (desired_velocity - velocity);
}

void ForceFilterConfig::validate() const {
  if (lowpass_cutoff && !(*lowpass_cutoff > 0.0)) {
    throw InvalidParameter("low-pass cutoff must be positive");
  }
  if (deadband && !(*deadband >= 0.0)) throw InvalidParameter("deadband must be non-negative");
}

double lowpass_update(const ForceFilterConfig& cfg, double raw, double prev_state, double dt) {
  if (!cfg.lowpass_cutoff) return raw;
  const double gain = std::min(1.0, dt * 2.0 * std::numbers::pi * *cfg.lowpass_cutoff);
  return prev_state + gain * (raw - prev_state);
}

double apply_deadband(const ForceFilterConfig& cfg, double value) {
  if (cfg.deadband && std::abs(value) <= *cfg.deadband) return 0.0;
  return value;
}

double filter_force(const ForceFilterConfig& cfg, double raw, double prev_state, double dt) {
  return apply_deadband(cfg, lowpass_update(cfg, raw, prev_state, dt));
}

}  // namespace pitd
