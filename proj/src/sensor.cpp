#include "flightoed/sensor.hpp"

#include <string>

#include "flightoed/errors.hpp"
#include "flightoed/units.hpp"

namespace flightoed {

double SensorModel::default_sigma(std::string_view label) {
  if (label == "V_T") return 2.5;
  if (label == "alpha" || label == "beta") return deg2rad(0.5);
  if (label == "phi" || label == "theta" || label == "psi") return deg2rad(0.1);
  if (label == "p" || label == "q" || label == "r") return deg2rad(0.1);
  throw ValidationError("no default sensor noise for '" + std::string(label) + "'");
}

SensorModel SensorModel::with_defaults(const std::vector<std::string>& outputs, double sample_rate) {
  SensorModel s;
  s.outputs = outputs;
  s.sample_rate = sample_rate;
  s.sigma.resize(static_cast<Eigen::Index>(outputs.size()));
  for (size_t i = 0; i < outputs.size(); ++i) s.sigma(static_cast<Eigen::Index>(i)) = default_sigma(outputs[i]);
  return s;
}

SensorModel SensorModel::longitudinal() { return with_defaults({"V_T", "alpha", "theta", "q"}); }

SensorModel SensorModel::lateral() { return with_defaults({"beta", "phi", "p", "r"}); }

void SensorModel::validate() const {
  if (outputs.empty()) throw ValidationError("sensor: no measured outputs");
  if (sigma.size() != static_cast<Eigen::Index>(outputs.size())) throw ValidationError("sensor: sigma size mismatch");
  if (!(sigma.array() > 0.0).all() || !sigma.allFinite()) throw ValidationError("sensor: sigma must be positive");
  if (!(sample_rate > 0.0)) throw ValidationError("sensor: sample rate must be positive");
}

}  // namespace flightoed
