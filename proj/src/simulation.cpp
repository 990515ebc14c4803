#include "pitd/simulation.hpp"

#include "pitd/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pitd {
namespace {

constexpr double kIntegralTolerance = 1e-9;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void append_record(AxisTrace& a, double x, double v, double xd, double xd_dot, double x_star,
                   double raw, double filtered, double fv) {
  a.position.push_back(x);
  a.velocity.push_back(v);
  a.desired_position.push_back(xd);
  a.desired_velocity.push_back(xd_dot);
  a.original_position.push_back(x_star);
  a.human_force.push_back(raw);
  a.filtered_force.push_back(filtered);
  a.virtual_force.push_back(fv);
  a.actuator_force.push_back(fv);
}

}  // namespace

std::size_t LoopConfig::ratio() const {
  if (!(controller_period > 0.0) || !(deformation_period > 0.0)) {
    throw InvalidParameter("controller and deformation periods must be positive");
  }
  const double r = deformation_period / controller_period;
  const double rounded = std::round(r);
  if (rounded < 1.0 || std::abs(r - rounded) > kIntegralTolerance * rounded) {
    throw InvalidParameter("deformation period must be a positive integer multiple of the "
                           "controller period (r = " + std::to_string(r) + ")");
  }
  return static_cast<std::size_t>(rounded);
}

std::size_t LoopConfig::tick_count() const {
  if (!(controller_period > 0.0)) throw InvalidParameter("controller period must be positive");
  if (!(stop_time >= 0.0)) throw InvalidParameter("stop time must be non-negative");
  return static_cast<std::size_t>(std::ceil(stop_time / controller_period - kIntegralTolerance));
}

void LoopConfig::validate() const {
  ratio();
  tick_count();
}

void SimulationSetup::validate() const {
  loop.validate();
  if (axes.empty()) throw InvalidDimension("simulation needs at least one axis");
  if (!trajectory || trajectory->axes() != axes.size()) {
    throw InvalidDimension("trajectory axes must match the simulation axes");
  }
  if (!force || force->axes() != axes.size()) {
    throw InvalidDimension("force profile axes must match the simulation axes");
  }
  DeformationParams{tau, loop.deformation_period, 1.0}.validate();
  for (const auto& a : axes) {
    if (!(a.plant.mass > 0.0) || !(a.plant.damping >= 0.0)) {
      throw InvalidParameter("plant needs mass > 0 and damping >= 0");
    }
    if (!(a.gains.stiffness >= 0.0) || !(a.gains.damping >= 0.0)) {
      throw InvalidParameter("impedance gains must be non-negative");
    }
    if (!(a.admittance >= 0.0)) throw InvalidParameter("admittance must be non-negative");
  }
  filter.validate();
  if (constraints) constraints->validate(axes.size());
  if (shape && shape->n_waypoints != DeformationParams{tau, loop.deformation_period, 1.0}.waypoint_count()) {
    throw InvalidDimension("prebuilt shape does not match tau / delta");
  }
}

SimTrace run_loop(const SimulationSetup& setup, const EventObserver& observer) {
  setup.validate();

  const double period = setup.loop.controller_period;
  const double delta = setup.loop.deformation_period;
  const std::size_t r = setup.loop.ratio();
  const std::size_t ticks = setup.loop.tick_count();
  const std::size_t m = setup.axes.size();
  const std::size_t n = DeformationParams{setup.tau, delta, 1.0}.waypoint_count();
  const auto& x_star = *setup.trajectory;

  const bool any_deformation = std::any_of(setup.axes.begin(), setup.axes.end(),
                                           [](const AxisSetup& a) { return a.admittance > 0.0; });
  std::shared_ptr<const DeformationShape> shape = setup.shape;
  if (!shape && any_deformation) shape = build_shape(n);

  std::vector<std::optional<DeformationOperator>> ops(m);
  for (std::size_t a = 0; a < m; ++a)
    if (setup.axes[a].admittance > 0.0) ops[a].emplace(shape, setup.axes[a].admittance, delta);

  // Waypoint j of every window sits at an integer multiple of delta.
  auto waypoint = [&](std::size_t axis, std::size_t j) {
    return x_star.position(axis, static_cast<double>(j) * delta);
  };

  std::vector<TrajectoryWindow> windows(m);
  std::vector<TrajectoryWindow> proposed(m);
  std::vector<PlantState> state(m);
  for (std::size_t a = 0; a < m; ++a) {
    windows[a].start_time = 0.0;
    windows[a].spacing = delta;
    windows[a].waypoints.resize(n);
    for (std::size_t j = 0; j < n; ++j) windows[a].waypoints[j] = waypoint(a, j);
    state[a] = setup.axes[a].initial_state.value_or(
        PlantState{windows[a].waypoints[0],
                   (windows[a].waypoints[1] - windows[a].waypoints[0]) / delta});
  }

  SimTrace trace;
  trace.controller_period = period;
  trace.deformation_period = delta;
  trace.axes.resize(m);
  trace.time.reserve(ticks + 1);
  for (auto& at : trace.axes) {
    for (auto* v : {&at.position, &at.velocity, &at.desired_position, &at.desired_velocity,
                    &at.original_position, &at.human_force, &at.filtered_force,
                    &at.virtual_force, &at.actuator_force})
      v->reserve(ticks + 1);
  }
  trace.events.reserve(ticks / r + 1);

  std::vector<double> position(m), raw(m), lowpass(m, 0.0), gated(m);
  std::vector<double> desired(m, 0.0), desired_rate(m, 0.0), fv(m);
  std::size_t next_event = 0;  // k + 1

  for (std::size_t h = 0; h <= ticks; ++h) {
    const double t = static_cast<double>(h) * period;
    for (std::size_t a = 0; a < m; ++a) position[a] = state[a].position;

    setup.force->sample(t, position, raw);
    if (!all_finite(raw)) throw SimulationHalted("non-finite human force", h);
    for (std::size_t a = 0; a < m; ++a) {
      lowpass[a] = lowpass_update(setup.filter, raw[a], lowpass[a], period);
      gated[a] = apply_deadband(setup.filter, lowpass[a]);
    }

    if (h == r * next_event) {
      const std::size_t k = next_event++;
      const double tau_i = static_cast<double>(k) * delta;

      for (std::size_t a = 0; a < m; ++a) {
        proposed[a] = windows[a];
        if (ops[a]) ops[a]->apply_in_place(proposed[a].waypoints, gated[a]);
      }
      const bool accepted = !setup.constraints || setup.constraints->admits(proposed);
      auto& chosen = accepted ? proposed : windows;

      DeformationEvent ev;
      ev.index = k;
      ev.tick = h;
      ev.start_time = tau_i;
      ev.force = gated;
      ev.accepted = accepted;
      for (std::size_t a = 0; a < m; ++a) {
        const auto& w = chosen[a].waypoints;
        desired[a] = w[0];
        desired_rate[a] = (w[1] - w[0]) / delta;
        if (!std::isfinite(desired[a]) || !std::isfinite(desired_rate[a])) {
          throw SimulationHalted("non-finite desired trajectory", h);
        }
      }
      ev.desired_position = desired;
      ev.desired_velocity = desired_rate;
      if (observer) observer(EventView{ev, windows, proposed});
      trace.events.push_back(std::move(ev));

      // Shift by one waypoint; the new tail always comes from the original trajectory.
      for (std::size_t a = 0; a < m; ++a) {
        if (accepted) std::swap(windows[a], proposed[a]);
        auto& w = windows[a].waypoints;
        std::move(w.begin() + 1, w.end(), w.begin());
        w.back() = waypoint(a, k + n);
        windows[a].start_time = static_cast<double>(k + 1) * delta;
      }
    }

    for (std::size_t a = 0; a < m; ++a) {
      fv[a] = impedance_force(setup.axes[a].gains, desired[a], desired_rate[a], state[a].position,
                              state[a].velocity);
      if (!std::isfinite(fv[a])) throw SimulationHalted("non-finite virtual force", h);
    }

    trace.time.push_back(t);
    for (std::size_t a = 0; a < m; ++a) {
      append_record(trace.axes[a], state[a].position, state[a].velocity, desired[a], desired_rate[a],
                    x_star.position(a, t), raw[a], gated[a], fv[a]);
    }

    if (h == ticks) break;
    for (std::size_t a = 0; a < m; ++a) {
      try {
        state[a] = step_plant(setup.axes[a].plant, state[a], fv[a], raw[a], period);
      } catch (const std::domain_error& e) {
        throw SimulationHalted(e.what(), h);
      }
      if (!std::isfinite(state[a].position) || !std::isfinite(state[a].velocity)) {
        throw SimulationHalted("non-finite plant state", h + 1);
      }
    }
  }
  return trace;
}

}  // namespace pitd
