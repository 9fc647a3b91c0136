#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "flightoed/constraints.hpp"
#include "flightoed/information.hpp"
#include "flightoed/lti.hpp"
#include "flightoed/sensor.hpp"
#include "flightoed/signal.hpp"
#include "flightoed/simulate.hpp"

namespace flightoed {

struct SolverSettings {
  int max_outer_iterations = 500;
  int max_qp_iterations = 100;
  double stationarity_tolerance = 1e-6;
  double feasibility_tolerance = 1e-8;
  bool finite_difference_gradient = false;
  double finite_difference_step = 3e-5;  // forward step relative to the knot bound
  // Extra 3-2-1-1 pulse widths tried as alternative starting points.
  std::vector<double> multistart_pulse_widths;
  int threads = 0;
};

struct OedProblem {
  LtiModel model;  // rate-augmented
  SensorModel sensor;
  std::vector<std::string> parameters;
  Eigen::VectorXd nominal;  // theta_init, nonzero
  double horizon = 10.0;
  double sample_period = 0.01;
  double control_period = 0.1;
  EnvelopeConstraints constraints;
  std::string active_channel = "delta_e";  // deflection label
  InputSignal initial_guess;
  SolverSettings settings;
};

// Parameters of the augmented model, minus those driven only by an inactive
// input channel (single-axis excitation).
std::vector<std::string> estimable_parameters(const LtiModel& model, const std::string& active_channel);

struct ParameterScaling {
  std::vector<std::string> parameters;
  Eigen::VectorXd nominal;

  Eigen::MatrixXd scale_fisher(const Eigen::MatrixXd& F) const;  // D F D
  Eigen::VectorXd scale_crlb(const Eigen::VectorXd& crlb) const;   // crlb / |theta_init|
};

ParameterScaling scale_parameters(const std::vector<std::string>& parameters, const Eigen::VectorXd& nominal);

// Finite-dimensional program. Decision variables are the deflection-rate
// samples on the control grid; the program is stated on the equivalent
// deflection knots d_k = d(k * control_period), k = 1..K, d_0 = 0, with the
// fine-grid deflection interpolated linearly between knots.
class OedNlp {
 public:
  explicit OedNlp(const OedProblem& problem);

  int decision_count() const { return knots_; }
  int samples_per_knot() const { return per_knot_; }
  double knot_bound() const { return box_; }
  const OedProblem& problem() const { return problem_; }

  Eigen::VectorXd knots_from_signal(const InputSignal& signal) const;
  InputSignal signal_from_knots(const Eigen::VectorXd& knots) const;
  Eigen::VectorXd rates_from_knots(const Eigen::VectorXd& knots) const;
  Eigen::VectorXd knots_from_rates(const Eigen::VectorXd& rates) const;

  bool informative(const Eigen::VectorXd& knots) const;
  // Scaled A-criterion; +inf when the Fisher matrix is singular.
  double objective(const Eigen::VectorXd& knots) const;
  double objective(const Eigen::VectorXd& knots, Eigen::VectorXd& gradient) const;
  // Exact Hessian of the scaled A-criterion.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& knots) const;
  Eigen::VectorXd finite_difference_gradient(const Eigen::VectorXd& knots, double step) const;

  // Linear path constraints lower <= C d <= upper (states on the fine grid and
  // knot-to-knot rates).
  const Eigen::MatrixXd& constraint_matrix() const { return C_; }
  const Eigen::VectorXd& constraint_lower() const { return lower_; }
  const Eigen::VectorXd& constraint_upper() const { return upper_; }
  const std::vector<std::string>& constraint_labels() const { return labels_; }
  double max_violation(const Eigen::VectorXd& knots) const;
  // Largest s in [0, 1] with s * knots feasible.
  double feasible_scale(const Eigen::VectorXd& knots) const;

 private:
  OedProblem problem_;
  int knots_ = 0;
  int per_knot_ = 0;
  int samples_ = 0;
  double box_ = 0.0;
  int params_ = 0;
  // Scaled Fisher entries are quadratic forms in the knots: F_ab = d' S_ab d.
  // S stacks the symmetric K x K blocks of the pairs a <= b row-wise.
  Eigen::MatrixXd S_;
  std::vector<std::pair<int, int>> pairs_;
  Eigen::MatrixXd C_;
  Eigen::VectorXd lower_, upper_;
  std::vector<std::string> labels_;
};

// Throws ValidationError for an infeasible or uninformative initial guess.
OedNlp transcribe(const OedProblem& problem);

enum class SolverStatus { Converged, MaxIterations };
std::string to_string(SolverStatus status);

struct OedSolution {
  InputSignal signal;
  double objective = 0.0;          // scaled A-criterion at the solution
  double initial_objective = 0.0;  // scaled A-criterion of the initial guess
  std::map<std::string, double> max_violation;
  int iterations = 0;
  SolverStatus status = SolverStatus::MaxIterations;
  double stationarity = 0.0;
  int start_index = 0;
  InformationReport report;
  Trajectory trajectory;
};

OedSolution solve_oed(const OedProblem& problem);

// Fraction of (sample, channel) pairs at a position or rate bound, band 2%.
double bang_bang_metric(const InputSignal& signal, const EnvelopeConstraints& constraints);

}  // namespace flightoed
