#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flightoed/aero.hpp"
#include "flightoed/airframe.hpp"
#include "flightoed/constraints.hpp"
#include "flightoed/signal.hpp"
#include "flightoed/simulate.hpp"
#include "flightoed/trim.hpp"

namespace flightoed {

struct VariableExcursion {
  std::string name;
  std::optional<double> first_violation_time;
  double min = 0.0;
  double max = 0.0;
};

struct EnvelopeViolationReport {
  std::vector<VariableExcursion> variables;
  std::optional<double> abort_time;
  std::string abort_variable;
  std::string abort_cause;  // "envelope" or "divergence"

  bool passed() const { return !abort_time.has_value(); }
};

struct ReplayResult {
  Trajectory trajectory;  // absolute states, labels V_T beta alpha phi theta psi p q r
  EnvelopeViolationReport report;
};

// Fixed-step RK4 of the nonlinear model at the signal rate, started at trim,
// with the signal added to the trim deflections (held per sample).
ReplayResult nonlinear_replay(const InputSignal& signal, const AeroCoefficients& coeffs,
                              const AirframeProperties& props, const TrimCondition& trim,
                              const EnvelopeConstraints& limits, int substeps = 1);

struct ScreenResult {
  double pass_fraction = 0.0;
  std::vector<bool> passed;
};

// Slope derivatives scaled by independent factors 1 + U(-pct, pct)/100, the
// perturbed airframe re-trimmed at the trim airspeed and the signal replayed.
ScreenResult perturbed_model_screen(const InputSignal& signal, const AeroCoefficients& coeffs,
                                    const AirframeProperties& props, const TrimCondition& trim,
                                    const EnvelopeConstraints& limits, double perturbation_pct, int samples,
                                    std::uint64_t seed, int threads = 0);

}  // namespace flightoed
