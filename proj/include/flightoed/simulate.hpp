#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flightoed/lti.hpp"
#include "flightoed/sensor.hpp"
#include "flightoed/signal.hpp"

namespace flightoed {

// States at t = 0, dt, ..., N*dt (N+1 rows).
struct Trajectory {
  double sample_period = 0.01;
  Eigen::MatrixXd states;
  std::vector<std::string> labels;

  int column(const std::string& label) const;  // throws when absent
};

struct ZohDiscretization {
  Eigen::MatrixXd Ad;
  Eigen::MatrixXd Bd;
};

// exp([A B; 0 0] dt)
ZohDiscretization discretize(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double dt);

// Signal channels mapped onto model inputs. A channel named like an input is
// held per sample. On a rate-augmented model a channel named like a deflection
// state is linearly interpolated between samples: its rate feeds the input and
// its first sample sets the initial deflection. Absent inputs are zero.
struct ModelInput {
  Eigen::MatrixXd u;   // N x n_u
  Eigen::VectorXd x0;  // initial deflection states
};
ModelInput model_input(const LtiModel& model, const InputSignal& signal);

Trajectory simulate_lti(const LtiModel& model, const InputSignal& signal,
                        const Eigen::VectorXd& x0 = Eigen::VectorXd());

struct SensitivityResult {
  Trajectory nominal;
  std::vector<std::string> parameters;
  std::vector<Eigen::MatrixXd> states;  // d x / d theta_k, (N+1) x n_x each
};

SensitivityResult sensitivity_trajectories(const LtiModel& model, const InputSignal& signal,
                                           const std::vector<std::string>& parameters,
                                           const Eigen::VectorXd& x0 = Eigen::VectorXd());

}  // namespace flightoed
