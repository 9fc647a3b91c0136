#include "flightoed/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "flightoed/errors.hpp"
#include "flightoed/maneuvers.hpp"
#include "flightoed/units.hpp"

namespace flightoed {

namespace {

using nlohmann::json;

// Field access with JSON-pointer diagnostics.
class Node {
 public:
  Node(const json& value, std::string path, const std::string& source) : j_(value), path_(std::move(path)), source_(source) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError(source_ + ": " + (path_.empty() ? "/" : path_) + ": " + what);
  }

  const json& value() const { return j_; }
  const std::string& path() const { return path_; }

  Node object() const {
    if (!j_.is_object()) fail("expected an object");
    return *this;
  }

  void allow(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, _] : object().j_.items())
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) child_path(key).fail("unknown key");
  }

  bool has(const std::string& key) const { return object().j_.contains(key); }

  Node operator[](const std::string& key) const {
    if (!has(key)) child_path(key).fail("required key missing");
    return {j_.at(key), path_ + "/" + key, source_};
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  double number(const std::string& key, double fallback) const { return has(key) ? (*this)[key].number() : fallback; }

  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const Node n = (*this)[key];
    if (!n.j_.is_number_integer()) n.fail("expected an integer");
    return n.j_.get<int>();
  }

  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) const {
    return has(key) ? (*this)[key].string() : fallback;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Node n = (*this)[key];
    if (!n.j_.is_boolean()) n.fail("expected true or false");
    return n.j_.get<bool>();
  }

  std::vector<Node> array() const {
    if (!j_.is_array()) fail("expected an array");
    std::vector<Node> out;
    for (size_t i = 0; i < j_.size(); ++i) out.push_back({j_[i], path_ + "/" + std::to_string(i), source_});
    return out;
  }

  std::vector<std::pair<std::string, Node>> members() const {
    std::vector<std::pair<std::string, Node>> out;
    for (const auto& [key, v] : object().j_.items()) out.emplace_back(key, Node{v, path_ + "/" + key, source_});
    return out;
  }

 private:
  Node child_path(std::string_view key) const { return {j_, path_ + "/" + std::string(key), source_}; }

  const json& j_;
  std::string path_;
  const std::string& source_;
};

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ValidationError(source + ": malformed JSON: " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Labels carried in degrees at the file boundary: everything except airspeed.
double to_si(const std::string& label, double value) { return label == "V_T" ? value : deg2rad(value); }

Bound parse_bound(const Node& n, const std::string& label) {
  const auto items = n.array();
  if (items.size() != 2) n.fail("expected [lower, upper]");
  const Bound b{to_si(label, items[0].number()), to_si(label, items[1].number())};
  if (!(b.lower < b.upper)) n.fail("lower bound must be below upper bound");
  return b;
}

const std::set<std::string>& bounded_labels() {
  static const std::set<std::string> labels = {"V_T", "beta", "alpha", "phi", "theta", "p", "q", "r",
                                               "delta_a", "delta_e", "delta_r", "delta_a_rate", "delta_e_rate",
                                               "delta_r_rate"};
  return labels;
}

bool is_deflection(const std::string& label) { return label.rfind("delta_", 0) == 0; }

}  // namespace

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::Longitudinal: return "longitudinal";
    case Axis::LateralAileron: return "lateral-aileron";
    case Axis::LateralRudder: return "lateral-rudder";
  }
  return "unknown";
}

Axis parse_axis(std::string_view text) {
  if (text == "longitudinal") return Axis::Longitudinal;
  if (text == "lateral-aileron") return Axis::LateralAileron;
  if (text == "lateral-rudder") return Axis::LateralRudder;
  throw ValidationError("unknown axis '" + std::string(text) + "' (longitudinal, lateral-aileron, lateral-rudder)");
}

AirframeData parse_airframe(std::string_view json_text, const std::string& source) {
  const json j = parse_json(json_text, source);
  const Node root(j, "", source);
  root.allow({"properties", "derivatives", "fixed", "trim"});
  AirframeData a;

  if (root.has("properties")) {
    const Node p = root["properties"];
    p.allow({"m", "I_x", "I_y", "I_z", "I_xz", "S", "b", "c_bar", "rho", "g"});
    AirframeProperties& ap = a.properties;
    ap.mass = p.number("m", ap.mass);
    ap.inertia_x = p.number("I_x", ap.inertia_x);
    ap.inertia_y = p.number("I_y", ap.inertia_y);
    ap.inertia_z = p.number("I_z", ap.inertia_z);
    ap.inertia_xz = p.number("I_xz", ap.inertia_xz);
    ap.wing_area = p.number("S", ap.wing_area);
    ap.wing_span = p.number("b", ap.wing_span);
    ap.mean_chord = p.number("c_bar", ap.mean_chord);
    ap.air_density = p.number("rho", ap.air_density);
    ap.gravity = p.number("g", ap.gravity);
    try {
      ap.validate();
    } catch (const ValidationError& e) {
      p.fail(e.what());
    }
  }

  if (root.has("derivatives")) {
    std::set<std::string> known(DimensionalDerivatives::longitudinal_names().begin(),
                                DimensionalDerivatives::longitudinal_names().end());
    known.insert(DimensionalDerivatives::lateral_names().begin(), DimensionalDerivatives::lateral_names().end());
    for (const auto& [name, n] : root["derivatives"].members()) {
      if (!known.count(name)) n.fail("unknown derivative");
      a.derivatives.set(name, n.number());
    }
  }

  if (root.has("fixed")) {
    a.derivatives.fixed.clear();
    for (const Node& n : root["fixed"].array()) {
      const std::string name = n.string();
      try {
        a.derivatives.get(name);
      } catch (const ValidationError&) {
        n.fail("unknown derivative '" + name + "'");
      }
      a.derivatives.fixed.push_back(name);
    }
  }

  if (root.has("trim")) {
    const Node t = root["trim"];
    t.allow({"V_T", "alpha_deg", "theta_deg", "delta_e_deg"});
    TrimCondition& tc = a.trim;
    tc.airspeed = t.number("V_T", tc.airspeed);
    if (t.has("alpha_deg")) tc.angle_of_attack = deg2rad(t["alpha_deg"].number());
    if (t.has("theta_deg")) tc.pitch = deg2rad(t["theta_deg"].number());
    if (t.has("delta_e_deg")) tc.elevator = deg2rad(t["delta_e_deg"].number());
    try {
      tc.validate();
    } catch (const ValidationError& e) {
      t.fail(e.what());
    }
  }
  return a;
}

AirframeData load_airframe(const std::string& path) { return parse_airframe(read_file(path), path); }

ExperimentConfig ExperimentConfig::defaults(Axis axis) {
  ExperimentConfig c;
  c.axis = axis;
  c.sensor = axis == Axis::Longitudinal ? SensorModel::longitudinal() : SensorModel::lateral();
  c.constraints = EnvelopeConstraints::defaults(c.airframe.trim);
  return c;
}

std::string ExperimentConfig::active_channel() const {
  switch (axis) {
    case Axis::Longitudinal: return "delta_e";
    case Axis::LateralAileron: return "delta_a";
    case Axis::LateralRudder: return "delta_r";
  }
  return "delta_e";
}

UniformGrid ExperimentConfig::grid() const {
  const double n = horizon / sample_period;
  if (!(n >= 1.0) || std::abs(n - std::round(n)) > 1e-9 * n)
    throw ValidationError("config: /grid: horizon must be a whole number of sample periods");
  return {sample_period, static_cast<int>(std::lround(n))};
}

LtiModel ExperimentConfig::plant() const {
  const double g = airframe.properties.gravity;
  return axis == Axis::Longitudinal ? build_longitudinal_lti(airframe.derivatives, airframe.trim, g, linearization)
                                    : build_lateral_lti(airframe.derivatives, airframe.trim, g, linearization);
}

LtiModel ExperimentConfig::model() const { return augment_actuator_rate(plant()); }

std::vector<std::string> ExperimentConfig::all_parameters() const { return model().parameter_names(); }

std::vector<std::string> ExperimentConfig::estimable_parameters() const {
  return flightoed::estimable_parameters(model(), active_channel());
}

Eigen::VectorXd ExperimentConfig::nominal(const std::vector<std::string>& parameters) const {
  const LtiModel m = model();
  Eigen::VectorXd v(static_cast<Eigen::Index>(parameters.size()));
  for (size_t k = 0; k < parameters.size(); ++k) v(static_cast<Eigen::Index>(k)) = m.parameter_value(parameters[k]);
  return v;
}

InputSignal ExperimentConfig::baseline_signal() const {
  if (!has_baseline) throw ValidationError("config: /baseline: required for this subcommand");
  const auto gen = baseline.kind == SignalKind::Doublet ? gen_doublet : gen_3211;
  return gen(baseline.amplitude, baseline.pulse_width, baseline.start_time, baseline.rate_limit, grid(),
             active_channel());
}

OedProblem ExperimentConfig::oed_problem() const {
  OedProblem p;
  p.model = model();
  p.sensor = sensor;
  p.active_channel = active_channel();
  p.parameters = estimable_parameters();
  p.nominal = nominal(p.parameters);
  p.horizon = horizon;
  p.sample_period = sample_period;
  p.control_period = control_period;
  p.constraints = constraints;
  p.initial_guess = baseline_signal();
  p.settings = solver;
  return p;
}

void ExperimentConfig::validate() const {
  airframe.properties.validate();
  airframe.trim.validate();
  sensor.validate();
  constraints.validate(airframe.trim);
  if (!(horizon > 0.0)) throw ValidationError("config: /grid/horizon: must be positive");
  if (!(sample_period > 0.0)) throw ValidationError("config: /grid/sample_period: must be positive");
  if (!(control_period >= sample_period)) throw ValidationError("config: /grid/control_period: must be >= sample_period");
  grid();
  const LtiModel m = plant();
  for (const auto& out : sensor.outputs)
    if (m.state_index(out) < 0)
      throw ValidationError("config: /sensor/outputs: '" + out + "' is not a state of the " + to_string(axis) + " model");
  if (has_baseline) {
    if (!(baseline.amplitude >= 0.0)) throw ValidationError("config: /baseline/amplitude_deg: must be >= 0");
    if (!(baseline.pulse_width > 0.0)) throw ValidationError("config: /baseline/pulse_width: must be positive");
    if (!(baseline.start_time >= 0.0)) throw ValidationError("config: /baseline/start_time: must be >= 0");
    if (!(baseline.rate_limit > 0.0)) throw ValidationError("config: /baseline/rate_limit_deg_s: must be positive");
  }
  if (!(screen_perturbation_pct >= 0.0)) throw ValidationError("config: /screen/perturbation_pct: must be >= 0");
  if (screen_samples < 1) throw ValidationError("config: /screen/samples: must be positive");
  if (!(quantize_min_step > 0.0)) throw ValidationError("config: /quantize/min_step_duration: must be positive");
}

ExperimentConfig parse_config(std::string_view json_text, const std::string& base_dir, const std::string& source) {
  const json j = parse_json(json_text, source);
  const Node root(j, "", source);
  root.allow({"airframe", "axis", "linearization", "sensor", "constraints", "grid", "baseline", "solver", "screen",
              "quantize", "output_dir", "seed"});

  const Axis axis = root.has("axis") ? [&] {
    const Node n = root["axis"];
    try {
      return parse_axis(n.string());
    } catch (const ValidationError& e) {
      n.fail(e.what());
    }
  }()
                                     : Axis::Longitudinal;
  ExperimentConfig c = ExperimentConfig::defaults(axis);

  if (root.has("airframe")) {
    const std::filesystem::path p(root["airframe"].string());
    c.airframe_path = (p.is_absolute() ? p : std::filesystem::path(base_dir) / p).lexically_normal().string();
    c.airframe = load_airframe(c.airframe_path);
    c.constraints = EnvelopeConstraints::defaults(c.airframe.trim);
  }

  if (root.has("linearization")) {
    const Node n = root["linearization"];
    const std::string s = n.string();
    if (s == "a-priori") c.linearization = Linearization::APriori;
    else if (s == "exact") c.linearization = Linearization::Exact;
    else n.fail("expected \"a-priori\" or \"exact\"");
  }

  if (root.has("sensor")) {
    const Node s = root["sensor"];
    s.allow({"outputs", "sigma", "sample_rate_hz"});
    if (s.has("outputs")) {
      std::vector<std::string> outputs;
      for (const Node& n : s["outputs"].array()) outputs.push_back(n.string());
      try {
        c.sensor = SensorModel::with_defaults(outputs, c.sensor.sample_rate);
      } catch (const ValidationError& e) {
        s["outputs"].fail(e.what());
      }
    }
    c.sensor.sample_rate = s.number("sample_rate_hz", c.sensor.sample_rate);
    if (s.has("sigma")) {
      for (const auto& [label, n] : s["sigma"].members()) {
        const auto it = std::find(c.sensor.outputs.begin(), c.sensor.outputs.end(), label);
        if (it == c.sensor.outputs.end()) n.fail("not a measured output");
        c.sensor.sigma(it - c.sensor.outputs.begin()) = to_si(label, n.number());
      }
    }
  }

  if (root.has("constraints")) {
    const Node k = root["constraints"];
    k.allow({"safety_margin", "oed", "envelope"});
    c.constraints.safety_margin = k.number("safety_margin", c.constraints.safety_margin);
    if (k.has("envelope"))
      for (const auto& [label, n] : k["envelope"].members()) {
        if (!bounded_labels().count(label) || is_deflection(label)) n.fail("not an envelope variable");
        c.constraints.envelope[label] = parse_bound(n, label);
      }
    if (k.has("oed"))
      for (const auto& [label, n] : k["oed"].members()) {
        if (!bounded_labels().count(label)) n.fail("not a bounded variable");
        Bound b = parse_bound(n, label);
        // States are given as absolute limits, deflections and rates as perturbations.
        const double t = EnvelopeConstraints::trim_value(label, c.airframe.trim);
        c.constraints.oed[label] = {b.lower - t, b.upper - t};
      }
  }

  if (root.has("grid")) {
    const Node g = root["grid"];
    g.allow({"horizon", "sample_period", "control_period"});
    c.horizon = g.number("horizon", c.horizon);
    c.sample_period = g.number("sample_period", c.sample_period);
    c.control_period = g.number("control_period", c.control_period);
  }

  if (root.has("baseline")) {
    const Node b = root["baseline"];
    b.allow({"kind", "amplitude_deg", "pulse_width", "start_time", "rate_limit_deg_s"});
    const std::string kind = b.string("kind", "3211");
    if (kind == "3211") c.baseline.kind = SignalKind::ThreeTwoOneOne;
    else if (kind == "doublet") c.baseline.kind = SignalKind::Doublet;
    else b["kind"].fail("expected \"3211\" or \"doublet\"");
    c.baseline.amplitude = deg2rad(b["amplitude_deg"].number());
    c.baseline.pulse_width = b["pulse_width"].number();
    c.baseline.start_time = b["start_time"].number();
    if (b.has("rate_limit_deg_s")) c.baseline.rate_limit = deg2rad(b["rate_limit_deg_s"].number());
    c.has_baseline = true;
  }

  if (root.has("solver")) {
    const Node s = root["solver"];
    s.allow({"max_outer_iterations", "max_qp_iterations", "stationarity_tolerance", "feasibility_tolerance",
             "finite_difference_gradient", "finite_difference_step", "multistart_pulse_widths", "threads"});
    SolverSettings& st = c.solver;
    st.max_outer_iterations = s.integer("max_outer_iterations", st.max_outer_iterations);
    st.max_qp_iterations = s.integer("max_qp_iterations", st.max_qp_iterations);
    st.stationarity_tolerance = s.number("stationarity_tolerance", st.stationarity_tolerance);
    st.feasibility_tolerance = s.number("feasibility_tolerance", st.feasibility_tolerance);
    st.finite_difference_gradient = s.boolean("finite_difference_gradient", st.finite_difference_gradient);
    st.finite_difference_step = s.number("finite_difference_step", st.finite_difference_step);
    if (s.has("multistart_pulse_widths"))
      for (const Node& n : s["multistart_pulse_widths"].array()) st.multistart_pulse_widths.push_back(n.number());
    st.threads = s.integer("threads", st.threads);
  }

  if (root.has("screen")) {
    const Node s = root["screen"];
    s.allow({"perturbation_pct", "samples"});
    c.screen_perturbation_pct = s.number("perturbation_pct", c.screen_perturbation_pct);
    c.screen_samples = s.integer("samples", c.screen_samples);
  }

  if (root.has("quantize")) {
    const Node q = root["quantize"];
    q.allow({"min_step_duration"});
    c.quantize_min_step = q.number("min_step_duration", c.quantize_min_step);
  }

  c.output_dir = root.string("output_dir", c.output_dir);
  if (root.has("seed")) {
    const Node n = root["seed"];
    if (!n.value().is_number_unsigned()) n.fail("expected a non-negative integer");
    c.seed = n.value().get<std::uint64_t>();
  }

  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  const std::filesystem::path p(path);
  return parse_config(read_file(path), p.parent_path().empty() ? "." : p.parent_path().string(), path);
}

}  // namespace flightoed
