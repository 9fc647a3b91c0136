#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace flightoed {

// Measured states with white Gaussian noise of standard deviation sigma (SI).
struct SensorModel {
  std::vector<std::string> outputs;
  Eigen::VectorXd sigma;
  double sample_rate = 100.0;  // Hz

  // Default noise level per state label; throws for labels without one.
  static double default_sigma(std::string_view label);
  static SensorModel with_defaults(const std::vector<std::string>& outputs, double sample_rate = 100.0);
  static SensorModel longitudinal();  // V_T alpha theta q
  static SensorModel lateral();       // beta phi p r (heading not measured)

  void validate() const;
  Eigen::VectorXd weights() const { return sigma.array().square().inverse(); }
};

}  // namespace flightoed
