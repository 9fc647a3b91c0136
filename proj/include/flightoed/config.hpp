#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "flightoed/airframe.hpp"
#include "flightoed/constraints.hpp"
#include "flightoed/derivatives.hpp"
#include "flightoed/lti.hpp"
#include "flightoed/oed.hpp"
#include "flightoed/sensor.hpp"
#include "flightoed/signal.hpp"
#include "flightoed/trim.hpp"

namespace flightoed {

enum class Axis { Longitudinal, LateralAileron, LateralRudder };
std::string to_string(Axis axis);  // "longitudinal", "lateral-aileron", "lateral-rudder"
Axis parse_axis(std::string_view text);

// Vehicle description: geometry, a-priori derivatives and the reference trim.
struct AirframeData {
  AirframeProperties properties;
  DimensionalDerivatives derivatives;
  TrimCondition trim;
};

// Angles in files are degrees (angular rates deg/s); everything here is SI.
// Throws ValidationError naming the offending field.
AirframeData parse_airframe(std::string_view json_text, const std::string& source = "airframe");
AirframeData load_airframe(const std::string& path);

struct BaselineSpec {
  SignalKind kind = SignalKind::ThreeTwoOneOne;  // ThreeTwoOneOne or Doublet
  double amplitude = 0.0;                        // rad
  double pulse_width = 0.0;                      // s
  double start_time = 0.0;                       // s
  double rate_limit = 3.25;                      // rad/s
};

struct ExperimentConfig {
  std::string airframe_path;  // empty: built-in a-priori airframe
  AirframeData airframe;
  Axis axis = Axis::Longitudinal;
  Linearization linearization = Linearization::APriori;
  SensorModel sensor;
  EnvelopeConstraints constraints;
  double horizon = 10.0;
  double sample_period = 0.01;
  double control_period = 0.1;
  bool has_baseline = false;  // pulse width and start time have no defaults
  BaselineSpec baseline;
  SolverSettings solver;
  double screen_perturbation_pct = 20.0;
  int screen_samples = 50;
  double quantize_min_step = 0.1;  // s
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  // Defaults for `axis` (sensor, constraints) with the a-priori airframe.
  static ExperimentConfig defaults(Axis axis = Axis::Longitudinal);

  std::string active_channel() const;
  UniformGrid grid() const;
  LtiModel plant() const;   // unaugmented 4-state model
  LtiModel model() const;   // rate-augmented
  std::vector<std::string> all_parameters() const;
  std::vector<std::string> estimable_parameters() const;
  Eigen::VectorXd nominal(const std::vector<std::string>& parameters) const;
  InputSignal baseline_signal() const;  // throws without a baseline
  OedProblem oed_problem() const;
  void validate() const;
};

// Relative airframe paths resolve against the directory of the config file.
ExperimentConfig parse_config(std::string_view json_text, const std::string& base_dir = ".",
                              const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);

}  // namespace flightoed
