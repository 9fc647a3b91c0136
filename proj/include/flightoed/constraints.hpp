#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "flightoed/trim.hpp"

namespace flightoed {

struct Bound {
  double lower = 0.0;
  double upper = 0.0;

  double span() const { return upper - lower; }
  bool contains(double v, double tol = 0.0) const { return v >= lower - tol && v <= upper + tol; }
};

// oed: bounds on perturbations from trim (states, deflections, "<deflection>_rate").
// envelope: absolute flight-envelope limits on the nonlinear states.
struct EnvelopeConstraints {
  std::map<std::string, Bound> oed;
  std::map<std::string, Bound> envelope;
  double safety_margin = 0.2;

  static EnvelopeConstraints defaults(const TrimCondition& trim);

  std::optional<Bound> oed_bound(std::string_view label) const;
  std::optional<Bound> envelope_bound(std::string_view label) const;
  // Trim value of a state label (0 for labels that are zero at trim).
  static double trim_value(std::string_view label, const TrimCondition& trim);
  // OED box must sit inside the envelope and span at most (1 - margin) of it
  // (0.5% allowance for the rounding of the default limits).
  void validate(const TrimCondition& trim) const;
};

}  // namespace flightoed
