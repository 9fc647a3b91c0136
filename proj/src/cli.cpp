#include "flightoed/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "flightoed/assessment.hpp"
#include "flightoed/config.hpp"
#include "flightoed/errors.hpp"
#include "flightoed/information.hpp"
#include "flightoed/maneuvers.hpp"
#include "flightoed/modal.hpp"
#include "flightoed/oed.hpp"
#include "flightoed/units.hpp"

namespace flightoed {

namespace {

using nlohmann::ordered_json;

// Non-finite values (unidentifiable bounds) become null.
ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i).transpose()));
  return a;
}

ordered_json report_json(const InformationReport& r) {
  ordered_json j;
  j["parameters"] = r.parameters;
  j["nominal"] = vector_json(r.nominal);
  j["rank"] = r.rank;
  j["identifiable"] = r.identifiable;
  j["unidentifiable"] = r.unidentifiable;
  j["singular_values"] = vector_json(r.singular_values);
  j["crlb_diagonal"] = vector_json(r.crlb_diagonal);
  j["crlb_marginal"] = vector_json(r.crlb_marginal);
  j["a_criterion"] = number(r.a_criterion);
  j["a_criterion_scaled"] = r.a_criterion_scaled ? number(*r.a_criterion_scaled) : ordered_json(nullptr);
  j["fisher"] = matrix_json(r.fisher);
  return j;
}

ordered_json comparison_json(const std::vector<CrlbComparison>& rows) {
  ordered_json a = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json j;
    j["parameter"] = r.parameter;
    j["value"] = number(r.value);
    j["crlb_init"] = number(r.crlb_init);
    j["crlb_opt"] = number(r.crlb_opt);
    j["delta_pct"] = r.delta_pct ? number(*r.delta_pct) : ordered_json(nullptr);
    j["note"] = r.note;
    a.push_back(j);
  }
  return a;
}

std::string comparison_csv(const std::vector<CrlbComparison>& rows) {
  std::ostringstream s;
  s << "parameter,value,crlb_init,crlb_opt,delta_pct,note\n";
  for (const auto& r : rows)
    s << r.parameter << ',' << format_number(r.value) << ',' << format_number(r.crlb_init) << ','
      << format_number(r.crlb_opt) << ',' << (r.delta_pct ? format_number(*r.delta_pct) : "") << ',' << r.note << '\n';
  return s.str();
}

std::string signal_csv(const InputSignal& s) {
  std::ostringstream o;
  write_signal_csv(s, o);
  return o.str();
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream s;
  s << "time";
  for (const auto& l : t.labels) s << ',' << l;
  s << '\n';
  for (Eigen::Index i = 0; i < t.states.rows(); ++i) {
    s << format_number(static_cast<double>(i) * t.sample_period);
    for (Eigen::Index j = 0; j < t.states.cols(); ++j) s << ',' << format_number(t.states(i, j));
    s << '\n';
  }
  return s.str();
}

// Display unit of a state label at the file boundary.
std::string display_unit(const std::string& label) {
  if (label == "V_T") return "m/s";
  if (label == "p" || label == "q" || label == "r") return "deg/s";
  return "deg";
}
double to_display(const std::string& label, double v) { return label == "V_T" ? v : rad2deg(v); }

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> amplitude_deg;
  std::optional<double> dt;
  std::optional<double> grid_hz;
  std::string signal;
  std::string baseline;
  std::string candidate;
  bool nonlinear = false;
};

class Session {
 public:
  Session(const Options& o, std::ostream& out) : opt_(o), out_(out) {
    cfg_ = o.config.empty() ? ExperimentConfig::defaults() : load_config(o.config);
    if (o.seed) cfg_.seed = *o.seed;
    if (o.out_dir) cfg_.output_dir = *o.out_dir;
    if (o.dt) cfg_.sample_period = *o.dt;
    if (o.grid_hz) {
      if (!(*o.grid_hz > 0.0)) throw ValidationError("--grid-hz must be positive");
      cfg_.control_period = 1.0 / *o.grid_hz;
    }
    if (o.amplitude_deg) {
      if (!cfg_.has_baseline) throw ValidationError("--amplitude-deg needs a baseline maneuver in the config");
      cfg_.baseline.amplitude = deg2rad(*o.amplitude_deg);
    }
    cfg_.validate();
    axis_ = to_string(cfg_.axis);
  }

  int trim();
  int modal();
  int gen();
  int sim();
  int info();
  int oed();
  int compare();
  int screen();
  int quantize();

 private:
  std::string write(std::string_view subcommand, const std::string& content, std::string_view ext) {
    std::filesystem::create_directories(cfg_.output_dir);
    const std::string path = (std::filesystem::path(cfg_.output_dir) / artifact_name(axis_, subcommand, content, ext)).string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << content;
    if (!f) throw ValidationError("cannot write '" + path + "'");
    out_ << path << '\n';
    return path;
  }
  std::string write_json(std::string_view subcommand, const ordered_json& j) {
    return write(subcommand, j.dump(2) + "\n", "json");
  }

  ordered_json header(std::string_view subcommand) const {
    ordered_json j;
    j["subcommand"] = subcommand;
    j["axis"] = axis_;
    j["seed"] = cfg_.seed;
    return j;
  }

  // --signal when given, otherwise the configured baseline maneuver.
  InputSignal input_signal(const std::string& path) const {
    return path.empty() ? round_to_csv_precision(cfg_.baseline_signal()) : read_signal_csv(path);
  }

  AeroCoefficients coefficients() const {
    return to_dimensionless(cfg_.airframe.derivatives, cfg_.airframe.properties, cfg_.airframe.trim);
  }

  const Options& opt_;
  std::ostream& out_;
  ExperimentConfig cfg_;
  std::string axis_;
};

int Session::trim() {
  const TrimResult r = trim_solve(cfg_.airframe.trim.airspeed, coefficients(), cfg_.airframe.properties);
  ordered_json j = header("trim");
  j["airspeed"] = r.condition.airspeed;
  j["alpha_deg"] = rad2deg(r.condition.angle_of_attack);
  j["theta_deg"] = rad2deg(r.condition.pitch);
  j["delta_e_deg"] = rad2deg(r.condition.elevator);
  j["gamma_deg"] = rad2deg(r.condition.flight_path_angle());
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  write_json("trim", j);
  return kExitSuccess;
}

int Session::modal() {
  std::ostringstream s;
  s << "mode,natural_frequency,damping_ratio,time_constant,overshoot_pct,period,eigenvalue_real,eigenvalue_imag,stable\n";
  const double g = cfg_.airframe.properties.gravity;
  for (const LtiModel& m : {build_longitudinal_lti(cfg_.airframe.derivatives, cfg_.airframe.trim, g, cfg_.linearization),
                            build_lateral_lti(cfg_.airframe.derivatives, cfg_.airframe.trim, g, cfg_.linearization)})
    for (const ModeCharacteristics& c : modal_report(m)) {
      const auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
      s << to_string(c.label) << ',' << format_number(c.natural_frequency) << ',' << opt(c.damping_ratio) << ','
        << format_number(c.time_constant) << ',' << opt(c.overshoot_pct) << ',' << opt(c.period) << ','
        << format_number(c.eigenvalue.real()) << ',' << format_number(c.eigenvalue.imag()) << ','
        << (c.stable ? "true" : "false") << '\n';
    }
  write("modal", s.str(), "csv");
  return kExitSuccess;
}

int Session::gen() {
  write("gen", signal_csv(cfg_.baseline_signal()), "csv");
  return kExitSuccess;
}

int Session::sim() {
  const InputSignal s = input_signal(opt_.signal);
  if (opt_.nonlinear) {
    const ReplayResult r = nonlinear_replay(s, coefficients(), cfg_.airframe.properties, cfg_.airframe.trim, cfg_.constraints);
    write("sim", trajectory_csv(r.trajectory), "csv");
  } else {
    write("sim", trajectory_csv(simulate_lti(cfg_.model(), s)), "csv");
  }
  return kExitSuccess;
}

int Session::info() {
  const InputSignal s = input_signal(opt_.signal);
  const InformationReport r = information_report(cfg_.model(), s, cfg_.sensor, cfg_.all_parameters());
  ordered_json j = header("info");
  j["report"] = report_json(r);
  write_json("info", j);
  return kExitSuccess;
}

int Session::oed() {
  const OedProblem p = cfg_.oed_problem();
  const OedSolution sol = solve_oed(p);
  const InformationReport initial = information_report(p.model, p.initial_guess, p.sensor, p.parameters);
  const auto rows = compare_reports(initial, sol.report);

  ordered_json j = header("oed");
  j["signal"] = std::filesystem::path(write("oed", signal_csv(sol.signal), "csv")).filename().string();
  j["status"] = to_string(sol.status);
  j["iterations"] = sol.iterations;
  j["start_index"] = sol.start_index;
  j["objective"] = number(sol.objective);
  j["initial_objective"] = number(sol.initial_objective);
  j["stationarity"] = number(sol.stationarity);
  ordered_json viol;
  for (const auto& [label, v] : sol.max_violation) viol[label] = number(v);
  j["max_violation"] = viol;
  j["bang_bang_metric"] = number(bang_bang_metric(sol.signal, p.constraints));
  j["mean_delta_pct"] = number(mean_delta_pct(rows));
  j["comparison"] = comparison_json(rows);
  j["report"] = report_json(sol.report);
  write_json("oed", j);
  return sol.status == SolverStatus::Converged ? kExitSuccess : kExitNonConvergence;
}

int Session::compare() {
  if (opt_.candidate.empty()) throw ValidationError("compare: --candidate is required");
  const InputSignal base = input_signal(opt_.baseline);
  const InputSignal cand = read_signal_csv(opt_.candidate);
  const auto rows = compare_designs(cfg_.model(), base, cand, cfg_.sensor, cfg_.estimable_parameters());
  write("compare", comparison_csv(rows), "csv");
  ordered_json j = header("compare");
  j["mean_delta_pct"] = number(mean_delta_pct(rows));
  j["comparison"] = comparison_json(rows);
  write_json("compare", j);
  return kExitSuccess;
}

int Session::screen() {
  const InputSignal s = input_signal(opt_.signal);
  const AeroCoefficients c = coefficients();
  const auto& props = cfg_.airframe.properties;
  const ReplayResult r = nonlinear_replay(s, c, props, cfg_.airframe.trim, cfg_.constraints);
  const ScreenResult sr = perturbed_model_screen(s, c, props, cfg_.airframe.trim, cfg_.constraints,
                                                 cfg_.screen_perturbation_pct, cfg_.screen_samples, cfg_.seed);

  std::ostringstream csv;
  csv << "variable,unit,min,max,lower_limit,upper_limit,first_violation_time\n";
  for (const auto& v : r.report.variables) {
    const Bound b = *cfg_.constraints.envelope_bound(v.name);
    csv << v.name << ',' << display_unit(v.name) << ',' << format_number(to_display(v.name, v.min)) << ','
        << format_number(to_display(v.name, v.max)) << ',' << format_number(to_display(v.name, b.lower)) << ','
        << format_number(to_display(v.name, b.upper)) << ','
        << (v.first_violation_time ? format_number(*v.first_violation_time) : "") << '\n';
  }
  write("screen", csv.str(), "csv");

  ordered_json j = header("screen");
  j["passed"] = r.report.passed();
  j["abort_time"] = r.report.abort_time ? number(*r.report.abort_time) : ordered_json(nullptr);
  j["abort_variable"] = r.report.abort_variable;
  j["abort_cause"] = r.report.abort_cause;
  j["perturbation_pct"] = cfg_.screen_perturbation_pct;
  j["samples"] = cfg_.screen_samples;
  j["pass_fraction"] = sr.pass_fraction;
  j["perturbed_passed"] = sr.passed;
  write_json("screen", j);
  return kExitSuccess;
}

int Session::quantize() {
  const FccQuantization q = quantize_to_fcc_steps(input_signal(opt_.signal), cfg_.quantize_min_step);
  std::ostringstream csv;
  csv << "channel,start,duration,amplitude_deg\n";
  for (const auto& st : q.steps)
    csv << st.channel << ',' << format_number(st.start) << ',' << format_number(st.duration) << ','
        << format_number(rad2deg(st.amplitude)) << '\n';
  write("quantize", csv.str(), "csv");
  write("quantize-signal", signal_csv(q.signal), "csv");
  return kExitSuccess;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string artifact_name(std::string_view axis, std::string_view subcommand, std::string_view content,
                          std::string_view extension) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(content)));
  return std::string(axis) + "_" + std::string(subcommand) + "_" + hash + "." + std::string(extension);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal excitation maneuver design for parameter identification flight tests", "flightoed"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "Experiment configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--out", o.out_dir, "Output directory");
  app.add_option("--amplitude-deg", o.amplitude_deg, "Baseline maneuver amplitude override (deg)");
  app.add_option("--dt", o.dt, "Signal sample period override (s)");
  app.add_option("--grid-hz", o.grid_hz, "OED control grid rate override (Hz)");

  using Handler = int (Session::*)();
  std::vector<std::pair<CLI::App*, Handler>> commands;
  const auto add = [&](const char* name, const char* help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.emplace_back(sub, h);
    return sub;
  };
  add("trim", "Solve the wings-level trim of the nonlinear model", &Session::trim);
  add("modal", "Mode characteristics of both axes", &Session::modal);
  add("gen", "Generate the configured baseline maneuver", &Session::gen);
  CLI::App* sim = add("sim", "Simulate a signal on the linear (or nonlinear) model", &Session::sim);
  sim->add_option("--signal", o.signal, "Input signal CSV (default: baseline)")->check(CLI::ExistingFile);
  sim->add_flag("--nonlinear", o.nonlinear, "Replay through the nonlinear model");
  CLI::App* info = add("info", "Fisher information and Cramer-Rao bounds of a signal", &Session::info);
  info->add_option("--signal", o.signal, "Input signal CSV (default: baseline)")->check(CLI::ExistingFile);
  add("oed", "Optimize the excitation signal", &Session::oed);
  CLI::App* cmp = add("compare", "Bound improvement of a candidate over a baseline", &Session::compare);
  cmp->add_option("--baseline", o.baseline, "Baseline signal CSV (default: configured baseline)")->check(CLI::ExistingFile);
  cmp->add_option("--candidate", o.candidate, "Candidate signal CSV")->required()->check(CLI::ExistingFile);
  CLI::App* scr = add("screen", "Nonlinear replay and perturbed-model safety screen", &Session::screen);
  scr->add_option("--signal", o.signal, "Input signal CSV (default: baseline)")->check(CLI::ExistingFile);
  CLI::App* qz = add("quantize", "Approximate a signal by FCC step commands", &Session::quantize);
  qz->add_option("--signal", o.signal, "Input signal CSV (default: baseline)")->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitValidation;
  }

  try {
    Session session(o, out);
    for (const auto& [sub, handler] : commands)
      if (sub->parsed()) return (session.*handler)();
    return kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace flightoed
