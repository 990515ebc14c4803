#pragma once
/**
 * @file simulation.hpp
 * @brief Two-rate loop: impedance control every T, window deformation every delta = r T.
 *
 * At controller tick h = r k (k = 0, 1, ...) the loop samples the (filtered)
 * human force at tau_i = k delta, deforms the window, emits
 * x_d = window[0] and xd_d = (window[1] - window[0]) / delta, then shifts the
 * window by one waypoint and appends the next sample of the original
 * trajectory. Every tick the plant is sampled, f_v is computed and held as f_a
 * for one period, and the plant is advanced with f_a plus the raw human force.
 * Axes run independently except for constraint rejection, which is joint.
 */

#include "pitd/constraints.hpp"
#include "pitd/deformation.hpp"
#include "pitd/force_profile.hpp"
#include "pitd/plant.hpp"
#include "pitd/trajectory.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace pitd {

struct LoopConfig {
  double controller_period = 1e-3;   ///< T [s]
  double deformation_period = 1e-2;  ///< delta [s]
  double stop_time = 1.0;            ///< [s]

  /// r = delta / T. Throws InvalidParameter unless r is a positive integer.
  std::size_t ratio() const;
  /// Index of the last controller tick; the trace holds tick_count() + 1 records.
  std::size_t tick_count() const;
  void validate() const;
};

struct AxisSetup {
  PlantParams plant;
  ImpedanceGains gains;
  /// mu; 0 turns deformation off for this axis (plain impedance control).
  double admittance = 1.0;
  /// Defaults to x*_d(0) and the slope of the first two waypoints.
  std::optional<PlantState> initial_state;
};

struct SimulationSetup {
  LoopConfig loop;
  double tau = 1.0;  ///< deformation window duration [s], shared by all axes
  std::vector<AxisSetup> axes;
  std::shared_ptr<const OriginalTrajectory> trajectory;
  std::shared_ptr<const ForceProfile> force;
  ForceFilterConfig filter;
  std::optional<ConstraintSet> constraints;
  /// Prebuilt shape for N = tau / delta + 1; built on demand when null.
  std::shared_ptr<const DeformationShape> shape;

  void validate() const;
};

struct AxisTrace {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> desired_position;
  std::vector<double> desired_velocity;
  std::vector<double> original_position;  ///< x*_d(t) at the tick time
  std::vector<double> human_force;        ///< raw f_h
  std::vector<double> filtered_force;     ///< after low-pass and deadband
  std::vector<double> virtual_force;      ///< f_v
  std::vector<double> actuator_force;     ///< f_a, held until the next tick
};

struct DeformationEvent {
  std::size_t index = 0;      ///< k
  std::size_t tick = 0;       ///< h = r k
  double start_time = 0.0;    ///< tau_i
  std::vector<double> force;  ///< filtered force used, per axis
  std::vector<double> desired_position;
  std::vector<double> desired_velocity;
  bool accepted = true;
};

struct SimTrace {
  double controller_period = 0.0;
  double deformation_period = 0.0;
  std::vector<double> time;
  std::vector<AxisTrace> axes;
  std::vector<DeformationEvent> events;

  std::size_t size() const { return time.size(); }
  std::size_t axis_count() const { return axes.size(); }
};

/// What the loop saw at one deformation event. `proposed` is the deformed
/// window before constraint checking; the loop emits from `proposed` when the
/// event is accepted and from `before` otherwise.
struct EventView {
  const DeformationEvent& event;
  std::span<const TrajectoryWindow> before;
  std::span<const TrajectoryWindow> proposed;
};

using EventObserver = std::function<void(const EventView&)>;

/// Throws InvalidParameter for a bad configuration and SimulationHalted on a
/// non-finite value.
SimTrace run_loop(const SimulationSetup& setup, const EventObserver& observer = {});

}  // namespace pitd
