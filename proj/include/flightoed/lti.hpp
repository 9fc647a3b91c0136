#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "flightoed/derivatives.hpp"
#include "flightoed/trim.hpp"

namespace flightoed {

enum class MatrixSlot { State, Input };

// One matrix entry driven by a named derivative: M(row, col) = scale * value.
struct ParameterSlot {
  std::string name;
  MatrixSlot matrix = MatrixSlot::State;
  int row = 0;
  int col = 0;
  double scale = 1.0;
};

struct LtiModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  std::vector<std::string> state_labels;
  std::vector<std::string> input_labels;
  std::vector<ParameterSlot> parameter_map;
  // After augment_actuator_rate: state index holding each input channel's deflection.
  std::vector<int> deflection_states;

  int states() const { return static_cast<int>(A.rows()); }
  int inputs() const { return static_cast<int>(B.cols()); }
  bool augmented() const { return !deflection_states.empty(); }

  std::vector<std::string> parameter_names() const;
  bool has_parameter(std::string_view name) const;
  double parameter_value(std::string_view name) const;
  // Copy with every slot of `name` moved to the new value (affine update).
  LtiModel with_parameter(std::string_view name, double value) const;
  // Indicator patterns dA/dtheta, dB/dtheta.
  Eigen::MatrixXd state_partial(std::string_view name) const;
  Eigen::MatrixXd input_partial(std::string_view name) const;
  int state_index(std::string_view label) const;  // -1 when absent
  int input_index(std::string_view label) const;
};

// How gravity and kinematic entries are referenced to the trim attitude.
//  APriori: pitch reference = trim angle of attack in both axes; matches the
//           a-priori modal characteristics.
//  Exact:   exact Jacobian of nonlinear_rhs at trim (flight-path angle in the
//           longitudinal gravity entries, trim pitch in the lateral ones).
enum class Linearization { APriori, Exact };

// x = [V_T alpha theta q], u = [delta_e]
LtiModel build_longitudinal_lti(const DimensionalDerivatives& derivs, const TrimCondition& trim, double g,
                                Linearization lin = Linearization::APriori);
// x = [beta phi p r], u = [delta_a delta_r]; heading dropped
LtiModel build_lateral_lti(const DimensionalDerivatives& derivs, const TrimCondition& trim, double g,
                           Linearization lin = Linearization::APriori);

// Deflections become states, deflection rates become inputs ("<label>_rate").
LtiModel augment_actuator_rate(const LtiModel& model);

}  // namespace flightoed
