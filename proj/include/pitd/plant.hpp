#pragma once

#include <optional>

namespace pitd {

/// One task-space axis of the device: m xdd + b xd = f_a + f_h.
struct PlantParams {
  double mass = 1.0;     ///< [kg] or [kg m^2]
  double damping = 0.0;  ///< viscous friction [N s/m] or [N m s/rad]
};

struct PlantState {
  double position = 0.0;
  double velocity = 0.0;
};

/// Exact response over dt to forces held constant on [t, t + dt).
/// Throws std::domain_error on a non-finite force.
PlantState step_plant(const PlantParams& params, const PlantState& state, double actuator_force,
                      double human_force, double dt);

/// Diagonal desired impedance for one axis.
struct ImpedanceGains {
  double stiffness = 0.0;
  double damping = 0.0;
};

/// f_v = k_d (x_d - x) + b_d (xd_d - xd)
double impedance_force(const ImpedanceGains& gains, double desired_position,
                       double desired_velocity, double position, double velocity);

/// First-order low-pass followed by a hard deadband. Either stage may be off.
struct ForceFilterConfig {
  std::optional<double> lowpass_cutoff;  ///< [Hz]
  std::optional<double> deadband;        ///< [N] or [N m]

  void validate() const;
};

/// Low-pass state update; returns `raw` unchanged when the low-pass is off.
double lowpass_update(const ForceFilterConfig& cfg, double raw, double prev_state, double dt);

/// Zero when |value| <= threshold, else value.
double apply_deadband(const ForceFilterConfig& cfg, double value);

/// apply_deadband(lowpass_update(...)). The caller keeps the low-pass state
/// (lowpass_update's result); the gate must not feed back into it.
double filter_force(const ForceFilterConfig& cfg, double raw, double prev_state, double dt);

}  // namespace pitd
