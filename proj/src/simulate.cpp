#include "flightoed/simulate.hpp"

#include <algorithm>

#include <unsupported/Eigen/MatrixFunctions>

#include "flightoed/errors.hpp"

namespace flightoed {

int Trajectory::column(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw ValidationError("trajectory has no state '" + label + "'");
  return static_cast<int>(it - labels.begin());
}

ZohDiscretization discretize(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double dt) {
  if (A.rows() != A.cols() || B.rows() != A.rows()) throw ValidationError("discretize: dimension mismatch");
  const Eigen::Index n = A.rows(), m = B.cols();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + m, n + m);
  M.topLeftCorner(n, n) = A * dt;
  M.topRightCorner(n, m) = B * dt;
  const Eigen::MatrixXd E = M.exp();
  return {E.topLeftCorner(n, n), E.topRightCorner(n, m)};
}

ModelInput model_input(const LtiModel& model, const InputSignal& signal) {
  signal.validate();
  const int N = signal.size();
  ModelInput in;
  in.u = Eigen::MatrixXd::Zero(N, model.inputs());
  in.x0 = Eigen::VectorXd::Zero(model.states());
  std::vector<bool> taken(static_cast<size_t>(model.inputs()), false);
  for (size_t j = 0; j < signal.channels.size(); ++j) {
    const std::string& name = signal.channels[j];
    const Eigen::VectorXd x = signal.samples.col(static_cast<Eigen::Index>(j));
    int k = model.input_index(name);
    if (k >= 0) {
      in.u.col(k) = x;
    } else {
      const int s = model.state_index(name);
      auto it = std::find(model.deflection_states.begin(), model.deflection_states.end(), s);
      if (s < 0 || it == model.deflection_states.end())
        throw ValidationError("signal channel '" + name + "' does not drive this model");
      k = static_cast<int>(it - model.deflection_states.begin());
      if (N > 1) in.u.col(k).head(N - 1) = (x.tail(N - 1) - x.head(N - 1)) / signal.sample_period;
      in.x0(s) = x(0);
    }
    if (taken[static_cast<size_t>(k)]) throw ValidationError("two signal channels drive input '" + model.input_labels[static_cast<size_t>(k)] + "'");
    taken[static_cast<size_t>(k)] = true;
  }
  return in;
}

namespace {

Eigen::VectorXd initial_state(const LtiModel& model, const ModelInput& in, const Eigen::VectorXd& x0) {
  if (x0.size() == 0) return in.x0;
  if (x0.size() != model.states()) throw ValidationError("initial state has wrong dimension");
  return x0 + in.x0;
}

}  // namespace

Trajectory simulate_lti(const LtiModel& model, const InputSignal& signal, const Eigen::VectorXd& x0) {
  const ModelInput in = model_input(model, signal);
  const ZohDiscretization d = discretize(model.A, model.B, signal.sample_period);
  const int N = signal.size();
  Trajectory tr;
  tr.sample_period = signal.sample_period;
  tr.labels = model.state_labels;
  tr.states.resize(N + 1, model.states());
  Eigen::VectorXd x = initial_state(model, in, x0);
  tr.states.row(0) = x.transpose();
  for (int i = 0; i < N; ++i) {
    x = d.Ad * x + d.Bd * in.u.row(i).transpose();
    tr.states.row(i + 1) = x.transpose();
  }
  return tr;
}

SensitivityResult sensitivity_trajectories(const LtiModel& model, const InputSignal& signal,
                                           const std::vector<std::string>& parameters, const Eigen::VectorXd& x0) {
  const ModelInput in = model_input(model, signal);
  const int n = model.states();
  const int P = static_cast<int>(parameters.size());
  const int big = n * (P + 1);

  // z = [x; s_1; ...; s_P], s_k' = A s_k + dA_k x + dB_k u
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(big, big);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(big, model.inputs());
  A.topLeftCorner(n, n) = model.A;
  B.topRows(n) = model.B;
  for (int k = 0; k < P; ++k) {
    const auto& name = parameters[static_cast<size_t>(k)];
    A.block(n * (k + 1), n * (k + 1), n, n) = model.A;
    A.block(n * (k + 1), 0, n, n) = model.state_partial(name);
    B.middleRows(n * (k + 1), n) = model.input_partial(name);
  }
  const ZohDiscretization d = discretize(A, B, signal.sample_period);

  const int N = signal.size();
  Eigen::MatrixXd Z(N + 1, big);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(big);
  z.head(n) = initial_state(model, in, x0);
  Z.row(0) = z.transpose();
  for (int i = 0; i < N; ++i) {
    z = d.Ad * z + d.Bd * in.u.row(i).transpose();
    Z.row(i + 1) = z.transpose();
  }

  SensitivityResult out;
  out.parameters = parameters;
  out.nominal.sample_period = signal.sample_period;
  out.nominal.labels = model.state_labels;
  out.nominal.states = Z.leftCols(n);
  for (int k = 0; k < P; ++k) out.states.push_back(Z.middleCols(n * (k + 1), n));
  return out;
}

}  // namespace flightoed
