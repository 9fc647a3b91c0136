#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flightoed/lti.hpp"
#include "flightoed/sensor.hpp"
#include "flightoed/signal.hpp"
#include "flightoed/simulate.hpp"

namespace flightoed {

// Sample indices (rows of a trajectory) seen by the sensor: every k-th sample
// after t = 0, k = signal rate / sensor rate.
std::vector<int> measurement_rows(double sample_period, int samples, const SensorModel& sensor);

// Measured-output sensitivities stacked over samples and weighted by 1/sigma:
// rows (sample, output), columns parameters. F = J^T J.
Eigen::MatrixXd weighted_output_jacobian(const SensitivityResult& sens, const SensorModel& sensor);

Eigen::MatrixXd fisher_matrix(const SensitivityResult& sens, const SensorModel& sensor);

struct InformationReport {
  std::vector<std::string> parameters;
  Eigen::VectorXd nominal;
  Eigen::MatrixXd fisher;
  Eigen::VectorXd singular_values;
  int rank = 0;
  std::vector<std::string> unidentifiable;
  std::vector<std::string> identifiable;
  std::optional<Eigen::MatrixXd> covariance;  // over `identifiable`, when invertible
  Eigen::VectorXd crlb_diagonal;              // 1/sqrt(F_ii), ignores correlation; +inf if unidentifiable
  Eigen::VectorXd crlb_marginal;              // sqrt((F^-1)_ii); +inf if unavailable
  double a_criterion = 0.0;                   // trace(cov)/n
  std::optional<double> a_criterion_scaled;   // trace(D^-1 cov D^-1)/n, D = diag(nominal)
};

// Throws ValidationError when every parameter is unidentifiable.
InformationReport analyze_fisher(const Eigen::MatrixXd& fisher, const std::vector<std::string>& parameters,
                                 const Eigen::VectorXd& nominal);

InformationReport information_report(const LtiModel& model, const InputSignal& signal, const SensorModel& sensor,
                                     const std::vector<std::string>& parameters);

struct CrlbComparison {
  std::string parameter;
  double value = 0.0;
  double crlb_init = 0.0;
  double crlb_opt = 0.0;
  std::optional<double> delta_pct;  // absent when unidentifiable in either design
  std::string note;
};

std::vector<CrlbComparison> compare_reports(const InformationReport& baseline, const InformationReport& candidate);
std::vector<CrlbComparison> compare_designs(const LtiModel& model, const InputSignal& baseline,
                                            const InputSignal& candidate, const SensorModel& sensor,
                                            const std::vector<std::string>& parameters);
double mean_delta_pct(const std::vector<CrlbComparison>& rows);

struct MonteCarloOptions {
  int runs = 500;
  std::uint64_t seed = 1;
  double initial_perturbation = 0.1;  // relative, uniform
  int max_iterations = 30;
  double step_tolerance = 1e-9;       // relative parameter step
  int threads = 0;                    // 0: hardware concurrency
};

struct MonteCarloResult {
  std::vector<std::string> parameters;
  Eigen::VectorXd truth;
  Eigen::VectorXd mean;
  Eigen::VectorXd empirical_std;
  Eigen::VectorXd predicted_std;  // sqrt((F^-1)_ii)
  int runs = 0;
  int diverged = 0;
};

// Gauss-Newton output-error estimation on noisy simulated data. Throws
// ConvergenceError when more than 5% of the runs diverge.
MonteCarloResult monte_carlo_crlb_check(const LtiModel& model, const InputSignal& signal, const SensorModel& sensor,
                                        const std::vector<std::string>& parameters,
                                        const MonteCarloOptions& options = {});

}  // namespace flightoed
