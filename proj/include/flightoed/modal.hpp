#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "flightoed/lti.hpp"

namespace flightoed {

enum class ModeLabel { Phugoid, ShortPeriod, Spiral, DutchRoll, RollSubsidence, Unclassified };

std::string to_string(ModeLabel label);

struct ModeCharacteristics {
  std::complex<double> eigenvalue;  // upper half-plane member for pairs
  bool oscillatory = false;
  double natural_frequency = 0.0;           // rad/s
  std::optional<double> damping_ratio;      // 1 for stable real modes, absent if unstable real
  double time_constant = 0.0;               // 1/omega_n (inf for a zero root)
  std::optional<double> overshoot_pct;      // oscillatory modes only
  std::optional<double> period;             // s, oscillatory modes only
  ModeLabel label = ModeLabel::Unclassified;
  bool stable = true;
};

// Modes sorted by natural frequency. Models with the standard longitudinal or
// lateral state labels are classified; others come back Unclassified.
// Throws ValidationError when a labelled model has an unexpected eigenstructure.
std::vector<ModeCharacteristics> modal_report(const LtiModel& model);

}  // namespace flightoed
