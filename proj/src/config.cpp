#include "pitd/error.hpp"
#include "pitd/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pitd {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    parts.push_back(trim(s.substr(pos, next == std::string_view::npos ? s.npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::string qualified(const ConfigDocument::Entry& e) { return e.section + "." + e.key; }

double parse_number(std::string_view text, const ConfigDocument::Entry& e) {
  text = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() ||
      !std::isfinite(v)) {
    throw ConfigError(qualified(e) + ": expected a number, got '" + std::string(text) + "'", e.line);
  }
  return v;
}

std::vector<double> parse_list(std::string_view text, const ConfigDocument::Entry& e) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_number(part, e));
  return out;
}

// Scenario-building view over a document: tracks which keys were consumed.
class Reader {
 public:
  explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

  const ConfigDocument::Entry* get(std::string_view section, std::string_view key) {
    allow(section, key);
    return doc_.find(section, key);
  }

  const ConfigDocument::Entry& require(std::string_view section, std::string_view key) {
    const auto* e = get(section, key);
    if (!e) {
      throw ConfigError(std::string(section) + "." + std::string(key) + ": missing required key");
    }
    return *e;
  }

  double number(std::string_view section, std::string_view key) {
    const auto& e = require(section, key);
    return parse_number(e.value, e);
  }

  double number_or(std::string_view section, std::string_view key, double fallback) {
    const auto* e = get(section, key);
    return e ? parse_number(e->value, *e) : fallback;
  }

  std::optional<double> optional_number(std::string_view section, std::string_view key) {
    const auto* e = get(section, key);
    if (!e) return std::nullopt;
    return parse_number(e->value, *e);
  }

  /// Per-axis list; a single value is broadcast.
  std::vector<double> per_axis(const ConfigDocument::Entry& e, std::size_t axes) {
    auto v = parse_list(e.value, e);
    if (v.size() == 1) v.assign(axes, v.front());
    if (v.size() != axes) {
      throw ConfigError(qualified(e) + ": expected 1 or " + std::to_string(axes) + " values",
                        e.line);
    }
    return v;
  }

  std::vector<double> per_axis(std::string_view section, std::string_view key, std::size_t axes) {
    return per_axis(require(section, key), axes);
  }

  std::vector<double> per_axis_or(std::string_view section, std::string_view key,
                                  std::size_t axes, double fallback) {
    const auto* e = get(section, key);
    return e ? per_axis(*e, axes) : std::vector<double>(axes, fallback);
  }

  std::vector<Obstacle> obstacles(std::string_view section, std::size_t axes) {
    allow(section, "obstacle");
    std::vector<Obstacle> out;
    for (const auto* e : doc_.find_all(section, "obstacle")) {
      const auto v = parse_list(e->value, *e);
      if (v.size() != axes + 1) {
        throw ConfigError(qualified(*e) + ": expected " + std::to_string(axes) +
                              " center coordinates followed by a radius",
                          e->line);
      }
      Obstacle o{std::vector<double>(v.begin(), v.end() - 1), v.back()};
      if (!(o.radius > 0.0)) throw ConfigError(qualified(*e) + ": radius must be positive", e->line);
      out.push_back(std::move(o));
    }
    return out;
  }

  void allow(std::string_view section, std::string_view key) {
    allowed_.emplace(std::string(section), std::string(key));
  }

  /// Every entry must have been looked at by the builder.
  void reject_unknown() const {
    std::set<std::string> sections;
    for (const auto& [s, k] : allowed_) sections.insert(s);
    for (const auto& e : doc_.entries()) {
      if (!sections.count(e.section)) throw ConfigError("unknown section [" + e.section + "]", e.line);
      if (!allowed_.count({e.section, e.key})) throw ConfigError("unknown key " + qualified(e), e.line);
    }
  }

 private:
  const ConfigDocument& doc_;
  std::set<std::pair<std::string, std::string>> allowed_;
};

template <class Fn>
void check(std::string_view what, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string(what) + ": " + ex.what());
  }
}

ScenarioConfig build_config(const ConfigDocument& doc, std::string_view default_name) {
  Reader rd(doc);
  ScenarioConfig cfg;

  const auto* name = rd.get("scenario", "name");
  cfg.name = name ? name->value : std::string(default_name);

  // Trajectory type first: it determines the default axis count.
  const auto& traj_type = rd.require("trajectory", "type");
  static const std::map<std::string, TrajectoryKind, std::less<>> kTrajectories{
      {"sine", TrajectoryKind::kSine},
      {"circle", TrajectoryKind::kCircle},
      {"constant", TrajectoryKind::kConstant},
      {"polynomial", TrajectoryKind::kPolynomial}};
  const auto tk = kTrajectories.find(traj_type.value);
  if (tk == kTrajectories.end()) {
    throw ConfigError("trajectory.type: unknown type '" + traj_type.value + "'", traj_type.line);
  }
  cfg.trajectory.kind = tk->second;

  const std::size_t default_axes = cfg.trajectory.kind == TrajectoryKind::kCircle ? 2 : 1;
  const double axes_value = rd.number_or("scenario", "axes", static_cast<double>(default_axes));
  if (!(axes_value >= 1.0) || axes_value != std::floor(axes_value) || axes_value > 6.0) {
    throw ConfigError("scenario.axes: must be an integer in [1, 6]");
  }
  cfg.axes = static_cast<std::size_t>(axes_value);
  const std::size_t m = cfg.axes;

  cfg.loop.controller_period = rd.number("loop", "controller_period");
  cfg.loop.deformation_period = rd.number("loop", "deformation_period");
  cfg.loop.stop_time = rd.number("loop", "stop_time");
  check("loop", [&] { cfg.loop.validate(); });

  const auto mass = rd.per_axis("plant", "mass", m);
  const auto damping = rd.per_axis("plant", "damping", m);
  for (std::size_t a = 0; a < m; ++a) {
    if (!(mass[a] > 0.0)) throw ConfigError("plant.mass: must be positive");
    if (!(damping[a] >= 0.0)) throw ConfigError("plant.damping: must be non-negative");
    cfg.plant.push_back({mass[a], damping[a]});
  }
  const auto* init_x = rd.get("plant", "initial_position");
  const auto* init_v = rd.get("plant", "initial_velocity");
  if ((init_x == nullptr) != (init_v == nullptr)) {
    throw ConfigError("plant.initial_position and plant.initial_velocity go together");
  }
  if (init_x) {
    const auto x0 = rd.per_axis(*init_x, m);
    const auto v0 = rd.per_axis(*init_v, m);
    cfg.initial_state.emplace();
    for (std::size_t a = 0; a < m; ++a) cfg.initial_state->push_back({x0[a], v0[a]});
  }

  const auto stiffness = rd.per_axis("gains", "stiffness", m);
  const auto gain_damping = rd.per_axis("gains", "damping", m);
  for (std::size_t a = 0; a < m; ++a) {
    if (!(stiffness[a] >= 0.0)) throw ConfigError("gains.stiffness: must be non-negative");
    if (!(gain_damping[a] >= 0.0)) throw ConfigError("gains.damping: must be non-negative");
    cfg.gains.push_back({stiffness[a], gain_damping[a]});
  }

  cfg.tau = rd.number("deformation", "tau");
  cfg.mu = rd.per_axis("deformation", "mu", m);
  for (double mu : cfg.mu)
    if (!(mu >= 0.0)) throw ConfigError("deformation.mu: must be non-negative (0 disables)");
  check("deformation.tau", [&] {
    DeformationParams{cfg.tau, cfg.loop.deformation_period, 1.0}.validate();
  });

  auto& tr = cfg.trajectory;
  switch (tr.kind) {
    case TrajectoryKind::kSine:
      tr.amplitude = rd.per_axis("trajectory", "amplitude", m);
      tr.frequency = rd.per_axis_or("trajectory", "frequency", m, 1.0);
      tr.phase = rd.per_axis_or("trajectory", "phase", m, 0.0);
      tr.offset = rd.per_axis_or("trajectory", "offset", m, 0.0);
      break;
    case TrajectoryKind::kCircle: {
      if (m != 2) throw ConfigError("trajectory.type: circle needs scenario.axes = 2");
      tr.radius = rd.number("trajectory", "radius");
      if (!(tr.radius > 0.0)) throw ConfigError("trajectory.radius: must be positive");
      const auto c = rd.per_axis_or("trajectory", "center", 2, 0.0);
      tr.center = {c[0], c[1]};
      tr.angular_rate = rd.number_or("trajectory", "angular_rate", 1.0);
      break;
    }
    case TrajectoryKind::kConstant:
      tr.values = rd.per_axis("trajectory", "value", m);
      break;
    case TrajectoryKind::kPolynomial: {
      const auto& e = rd.require("trajectory", "coefficients");
      for (auto group : split(e.value, ';')) tr.coefficients.push_back(parse_list(group, e));
      if (tr.coefficients.size() == 1) tr.coefficients.assign(m, tr.coefficients.front());
      if (tr.coefficients.size() != m) {
        throw ConfigError("trajectory.coefficients: expected 1 or " + std::to_string(m) +
                              " ';'-separated groups",
                          e.line);
      }
      break;
    }
  }

  cfg.environment = rd.obstacles("environment", m);

  const auto& force_type = rd.require("force", "type");
  auto& fs = cfg.force;
  if (force_type.value == "none") {
    fs.kind = ForceKind::kNone;
  } else if (force_type.value == "pulse") {
    fs.kind = ForceKind::kPulse;
    fs.magnitude = rd.per_axis("force", "magnitude", m);
    fs.start = rd.number("force", "start");
    fs.end = rd.number("force", "end");
    if (!(fs.start <= fs.end)) throw ConfigError("force.end: must not precede force.start");
  } else if (force_type.value == "table") {
    fs.kind = ForceKind::kTable;
    const auto& times = rd.require("force", "times");
    fs.times = parse_list(times.value, times);
    if (!std::is_sorted(fs.times.begin(), fs.times.end())) {
      throw ConfigError("force.times: must be ascending", times.line);
    }
    const auto& values = rd.require("force", "values");
    std::vector<std::vector<double>> per_axis;
    for (auto group : split(values.value, ';')) per_axis.push_back(parse_list(group, values));
    if (per_axis.size() == 1) per_axis.assign(m, per_axis.front());
    if (per_axis.size() != m) {
      throw ConfigError("force.values: expected one ';'-separated group per axis", values.line);
    }
    for (const auto& row : per_axis) {
      if (row.size() != fs.times.size()) {
        throw ConfigError("force.values: each group needs one value per breakpoint", values.line);
      }
    }
    fs.values.assign(fs.times.size(), std::vector<double>(m));
    for (std::size_t i = 0; i < fs.times.size(); ++i)
      for (std::size_t a = 0; a < m; ++a) fs.values[i][a] = per_axis[a][i];
  } else if (force_type.value == "avoidance") {
    fs.kind = ForceKind::kAvoidance;
    fs.gain = rd.number("force", "gain");
    fs.standoff = rd.number("force", "standoff");
    if (!(fs.gain >= 0.0)) throw ConfigError("force.gain: must be non-negative");
    if (!(fs.standoff > 0.0)) throw ConfigError("force.standoff: must be positive");
    if (cfg.environment.empty()) {
      throw ConfigError("force.type: avoidance needs at least one environment.obstacle");
    }
  } else {
    throw ConfigError("force.type: unknown type '" + force_type.value + "'", force_type.line);
  }

  cfg.filter.lowpass_cutoff = rd.optional_number("filter", "cutoff");
  cfg.filter.deadband = rd.optional_number("filter", "deadband");
  check("filter", [&] { cfg.filter.validate(); });

  const auto* cmin = rd.get("constraints", "min");
  const auto* cmax = rd.get("constraints", "max");
  const auto cobs = rd.obstacles("constraints", m);
  const auto* cmargin = rd.get("constraints", "margin");
  if ((cmin == nullptr) != (cmax == nullptr)) {
    throw ConfigError("constraints.min and constraints.max go together");
  }
  if (cmin || !cobs.empty() || cmargin) {
    ConstraintSet cs;
    if (cmin) {
      const auto lo = rd.per_axis(*cmin, m);
      const auto hi = rd.per_axis(*cmax, m);
      for (std::size_t a = 0; a < m; ++a) cs.limits.push_back(AxisLimits{lo[a], hi[a]});
    }
    cs.obstacles = cobs;
    cs.margin = cmargin ? parse_number(cmargin->value, *cmargin) : 0.0;
    check("constraints", [&] { cs.validate(m); });
    cfg.constraints = std::move(cs);
  }

  cfg.metrics.interaction_threshold = rd.number_or("metrics", "interaction_threshold", 0.5);
  cfg.metrics.clearance = rd.number_or("metrics", "clearance", 0.2);
  cfg.metrics.cursor_radius = rd.number_or("metrics", "cursor_radius", 0.02);
  if (!(cfg.metrics.interaction_threshold >= 0.0)) {
    throw ConfigError("metrics.interaction_threshold: must be non-negative");
  }
  if (!(cfg.metrics.cursor_radius >= 0.0)) throw ConfigError("metrics.cursor_radius: must be non-negative");
  cfg.metrics.obstacles = cfg.environment;

  const auto* prefix = rd.get("output", "prefix");
  cfg.output_prefix = prefix ? prefix->value : cfg.name;

  rd.allow("sweep", "parameter");
  rd.allow("sweep", "values");
  rd.reject_unknown();
  return cfg;
}

}  // namespace

// --- ConfigDocument ---

ConfigDocument ConfigDocument::parse(std::string_view text) {
  ConfigDocument doc;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ConfigError("malformed section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    if (section.empty()) throw ConfigError("key outside of any [section]", line_no);
    Entry e{section, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))),
            line_no};
    if (e.key.empty()) throw ConfigError("empty key", line_no);
    if (e.value.empty()) throw ConfigError("empty value for " + e.key, line_no);
    if (e.key != "obstacle" && doc.find(e.section, e.key)) {
      throw ConfigError("duplicate key " + e.section + "." + e.key, line_no);
    }
    doc.entries_.push_back(std::move(e));
  }
  return doc;
}

const ConfigDocument::Entry* ConfigDocument::find(std::string_view section,
                                                  std::string_view key) const {
  for (const auto& e : entries_)
    if (e.section == section && e.key == key) return &e;
  return nullptr;
}

std::vector<const ConfigDocument::Entry*> ConfigDocument::find_all(std::string_view section,
                                                                   std::string_view key) const {
  std::vector<const Entry*> out;
  for (const auto& e : entries_)
    if (e.section == section && e.key == key) out.push_back(&e);
  return out;
}

bool ConfigDocument::has_section(std::string_view section) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.section == section; });
}

void ConfigDocument::set(std::string_view section, std::string_view key, std::string value) {
  for (auto& e : entries_) {
    if (e.section == section && e.key == key) {
      e.value = std::move(value);
      return;
    }
  }
  entries_.push_back(Entry{std::string(section), std::string(key), std::move(value), 0});
}

void ConfigDocument::erase_section(std::string_view section) {
  std::erase_if(entries_, [&](const Entry& e) { return e.section == section; });
}

// --- specs ---

std::shared_ptr<const OriginalTrajectory> TrajectorySpec::build() const {
  switch (kind) {
    case TrajectoryKind::kSine:
      return std::make_shared<SineTrajectory>(amplitude, frequency, phase, offset);
    case TrajectoryKind::kCircle:
      return std::make_shared<CircleTrajectory>(radius, center, angular_rate);
    case TrajectoryKind::kConstant:
      return std::make_shared<ConstantTrajectory>(values);
    case TrajectoryKind::kPolynomial:
      return std::make_shared<PolynomialTrajectory>(coefficients);
  }
  throw InvalidParameter("unknown trajectory kind");
}

std::shared_ptr<const ForceProfile> ForceSpec::build(std::size_t axes,
                                                     const std::vector<Obstacle>& environment) const {
  switch (kind) {
    case ForceKind::kNone:
      return std::make_shared<ZeroForce>(axes);
    case ForceKind::kPulse:
      return std::make_shared<PulseForce>(magnitude, start, end);
    case ForceKind::kTable:
      return std::make_shared<PiecewiseConstantForce>(times, values);
    case ForceKind::kAvoidance:
      return std::make_shared<AvoidanceForce>(environment, gain, standoff);
  }
  throw InvalidParameter("unknown force kind");
}

SimulationSetup ScenarioConfig::to_setup() const {
  SimulationSetup s;
  s.loop = loop;
  s.tau = tau;
  for (std::size_t a = 0; a < axes; ++a) {
    AxisSetup ax;
    ax.plant = plant[a];
    ax.gains = gains[a];
    ax.admittance = mu[a];
    if (initial_state) ax.initial_state = (*initial_state)[a];
    s.axes.push_back(ax);
  }
  s.trajectory = trajectory.build();
  s.force = force.build(axes, environment);
  s.filter = filter;
  s.constraints = constraints;
  return s;
}

// --- entry points ---

ScenarioConfig parse_config(std::string_view text, std::string_view default_name) {
  const auto doc = ConfigDocument::parse(text);
  if (doc.has_section("sweep")) {
    throw ConfigError("config has a [sweep] section; it describes several scenarios");
  }
  return build_config(doc, default_name);
}

std::vector<ScenarioConfig> parse_scenarios(std::string_view text, std::string_view default_name) {
  auto doc = ConfigDocument::parse(text);
  if (!doc.has_section("sweep")) return {build_config(doc, default_name)};

  const auto* param = doc.find("sweep", "parameter");
  const auto* values = doc.find("sweep", "values");
  if (!param || !values) throw ConfigError("sweep needs both 'parameter' and 'values'");
  const auto dot = param->value.find('.');
  if (dot == std::string::npos) {
    throw ConfigError("sweep.parameter: expected section.key", param->line);
  }
  const std::string section = param->value.substr(0, dot);
  const std::string key = param->value.substr(dot + 1);
  if (section == "sweep" || section == "output" || section == "scenario") {
    throw ConfigError("sweep.parameter: cannot sweep [" + section + "]", param->line);
  }
  const auto raw_values = split(values->value, ',');
  ConfigDocument base = doc;
  base.erase_section("sweep");

  // Validate the base document once so errors point at real lines.
  const auto base_cfg = build_config(base, default_name);

  std::vector<ScenarioConfig> out;
  for (auto v : raw_values) {
    ConfigDocument variant = base;
    variant.set(section, key, std::string(v));
    auto cfg = build_config(variant, default_name);
    const std::string suffix = "_" + key + std::string(v);
    cfg.name = base_cfg.name + suffix;
    cfg.output_prefix = base_cfg.output_prefix + suffix;
    out.push_back(std::move(cfg));
  }
  return out;
}

namespace {
std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

std::vector<ScenarioConfig> load_scenarios(const std::filesystem::path& path) {
  return parse_scenarios(read_file(path), path.stem().string());
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.stem().string());
}

}  // namespace pitd
