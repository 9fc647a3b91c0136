#include "flightoed/lti.hpp"

#include <algorithm>
#include <cmath>

#include "flightoed/errors.hpp"

namespace flightoed {

std::vector<std::string> LtiModel::parameter_names() const {
  std::vector<std::string> names;
  for (const auto& slot : parameter_map)
    if (std::find(names.begin(), names.end(), slot.name) == names.end()) names.push_back(slot.name);
  return names;
}

bool LtiModel::has_parameter(std::string_view name) const {
  return std::any_of(parameter_map.begin(), parameter_map.end(), [&](const auto& s) { return s.name == name; });
}

double LtiModel::parameter_value(std::string_view name) const {
  for (const auto& s : parameter_map)
    if (s.name == name) return (s.matrix == MatrixSlot::State ? A(s.row, s.col) : B(s.row, s.col)) / s.scale;
  throw ValidationError("unknown parameter '" + std::string(name) + "'");
}

LtiModel LtiModel::with_parameter(std::string_view name, double value) const {
  const double delta = value - parameter_value(name);
  LtiModel out = *this;
  for (const auto& s : parameter_map) {
    if (s.name != name) continue;
    (s.matrix == MatrixSlot::State ? out.A : out.B)(s.row, s.col) += s.scale * delta;
  }
  return out;
}

Eigen::MatrixXd LtiModel::state_partial(std::string_view name) const {
  if (!has_parameter(name)) throw ValidationError("unknown parameter '" + std::string(name) + "'");
  Eigen::MatrixXd dA = Eigen::MatrixXd::Zero(A.rows(), A.cols());
  for (const auto& s : parameter_map)
    if (s.name == name && s.matrix == MatrixSlot::State) dA(s.row, s.col) += s.scale;
  return dA;
}

Eigen::MatrixXd LtiModel::input_partial(std::string_view name) const {
  if (!has_parameter(name)) throw ValidationError("unknown parameter '" + std::string(name) + "'");
  Eigen::MatrixXd dB = Eigen::MatrixXd::Zero(B.rows(), B.cols());
  for (const auto& s : parameter_map)
    if (s.name == name && s.matrix == MatrixSlot::Input) dB(s.row, s.col) += s.scale;
  return dB;
}

int LtiModel::state_index(std::string_view label) const {
  auto it = std::find(state_labels.begin(), state_labels.end(), label);
  return it == state_labels.end() ? -1 : static_cast<int>(it - state_labels.begin());
}

int LtiModel::input_index(std::string_view label) const {
  auto it = std::find(input_labels.begin(), input_labels.end(), label);
  return it == input_labels.end() ? -1 : static_cast<int>(it - input_labels.begin());
}

namespace {

struct Placement {
  const char* name;
  MatrixSlot matrix;
  int row, col;
};

LtiModel assemble(const DimensionalDerivatives& d, Eigen::MatrixXd A, Eigen::MatrixXd B,
                  const std::vector<Placement>& placements) {
  LtiModel m;
  for (const auto& p : placements) {
    (p.matrix == MatrixSlot::State ? A : B)(p.row, p.col) = d.get(p.name);
    if (!d.is_fixed(p.name)) m.parameter_map.push_back({p.name, p.matrix, p.row, p.col, 1.0});
  }
  m.A = std::move(A);
  m.B = std::move(B);
  return m;
}

}  // namespace

LtiModel build_longitudinal_lti(const DimensionalDerivatives& d, const TrimCondition& trim, double g,
                                Linearization lin) {
  trim.validate();
  const double ref = lin == Linearization::APriori ? trim.angle_of_attack : trim.flight_path_angle();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 1);
  A(0, 2) = -g * std::cos(ref);
  A(1, 2) = -g * std::sin(ref) / trim.airspeed;
  A(2, 3) = 1.0;
  const std::vector<Placement> placements = {
      {"X_V", MatrixSlot::State, 0, 0},         {"X_alpha", MatrixSlot::State, 0, 1},
      {"X_q", MatrixSlot::State, 0, 3},         {"X_de", MatrixSlot::Input, 0, 0},
      {"Z_V", MatrixSlot::State, 1, 0},         {"Z_alpha_over_V", MatrixSlot::State, 1, 1},
      {"Z_q", MatrixSlot::State, 1, 3},         {"Z_de_over_V", MatrixSlot::Input, 1, 0},
      {"M_V", MatrixSlot::State, 3, 0},         {"M_alpha", MatrixSlot::State, 3, 1},
      {"M_q", MatrixSlot::State, 3, 3},         {"M_de", MatrixSlot::Input, 3, 0},
  };
  LtiModel m = assemble(d, A, B, placements);
  m.state_labels = {"V_T", "alpha", "theta", "q"};
  m.input_labels = {"delta_e"};
  return m;
}

LtiModel build_lateral_lti(const DimensionalDerivatives& d, const TrimCondition& trim, double g,
                           Linearization lin) {
  trim.validate();
  const double ref = lin == Linearization::APriori ? trim.angle_of_attack : trim.pitch;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 4);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 2);
  A(0, 1) = g * std::cos(ref) / trim.airspeed;
  A(1, 2) = 1.0;
  A(1, 3) = std::tan(ref);
  const std::vector<Placement> placements = {
      {"Y_beta_over_V", MatrixSlot::State, 0, 0}, {"Y_p", MatrixSlot::State, 0, 2},
      {"Y_r", MatrixSlot::State, 0, 3},           {"Y_da_over_V", MatrixSlot::Input, 0, 0},
      {"Y_dr_over_V", MatrixSlot::Input, 0, 1},   {"Lbeta_prime", MatrixSlot::State, 2, 0},
      {"Lp_prime", MatrixSlot::State, 2, 2},      {"Lr_prime", MatrixSlot::State, 2, 3},
      {"Lda_prime", MatrixSlot::Input, 2, 0},     {"Ldr_prime", MatrixSlot::Input, 2, 1},
      {"Nbeta_prime", MatrixSlot::State, 3, 0},   {"Np_prime", MatrixSlot::State, 3, 2},
      {"Nr_prime", MatrixSlot::State, 3, 3},      {"Nda_prime", MatrixSlot::Input, 3, 0},
      {"Ndr_prime", MatrixSlot::Input, 3, 1},
  };
  LtiModel m = assemble(d, A, B, placements);
  m.state_labels = {"beta", "phi", "p", "r"};
  m.input_labels = {"delta_a", "delta_r"};
  return m;
}

LtiModel augment_actuator_rate(const LtiModel& model) {
  if (model.augmented()) throw ValidationError("augment_actuator_rate: model already augmented");
  const int nx = model.states(), nu = model.inputs();
  LtiModel out;
  out.A = Eigen::MatrixXd::Zero(nx + nu, nx + nu);
  out.A.topLeftCorner(nx, nx) = model.A;
  out.A.topRightCorner(nx, nu) = model.B;
  out.B = Eigen::MatrixXd::Zero(nx + nu, nu);
  out.B.bottomRows(nu).setIdentity();
  out.state_labels = model.state_labels;
  for (const auto& label : model.input_labels) {
    out.state_labels.push_back(label);
    out.input_labels.push_back(label + "_rate");
  }
  for (int j = 0; j < nu; ++j) out.deflection_states.push_back(nx + j);
  for (ParameterSlot s : model.parameter_map) {
    if (s.matrix == MatrixSlot::Input) {
      s.matrix = MatrixSlot::State;
      s.col += nx;
    }
    out.parameter_map.push_back(s);
  }
  return out;
}

}  // namespace flightoed
