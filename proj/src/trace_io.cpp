#include "pitd/trace_io.hpp"

#include "pitd/format.hpp"

#include <array>
#include <ostream>
#include <string>

namespace pitd {

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  static constexpr std::array<const char*, 9> kColumns{
      "x", "xdot", "xd", "xddot", "xstar", "fh", "fh_filtered", "fv", "fa"};
  out << 't';
  for (std::size_t a = 0; a < trace.axis_count(); ++a)
    for (const char* c : kColumns) out << ',' << c << '_' << a;
  out << '\n';

  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << format_real(trace.time[i]);
    for (const auto& ax : trace.axes) {
      for (const auto* col : {&ax.position, &ax.velocity, &ax.desired_position,
                              &ax.desired_velocity, &ax.original_position, &ax.human_force,
                              &ax.filtered_force, &ax.virtual_force, &ax.actuator_force}) {
        out << ',' << format_real((*col)[i]);
      }
    }
    out << '\n';
  }
}

void write_events_csv(std::ostream& out, const SimTrace& trace) {
  out << "k,tick,tau_i";
  for (std::size_t a = 0; a < trace.axis_count(); ++a)
    out << ",force_" << a << ",xd_" << a << ",xddot_" << a;
  out << ",accepted\n";

  for (const auto& ev : trace.events) {
    out << ev.index << ',' << ev.tick << ',' << format_real(ev.start_time);
    for (std::size_t a = 0; a < ev.force.size(); ++a) {
      out << ',' << format_real(ev.force[a]) << ',' << format_real(ev.desired_position[a]) << ','
          << format_real(ev.desired_velocity[a]);
    }
    out << ',' << (ev.accepted ? 1 : 0) << '\n';
  }
}

}  // namespace pitd
