#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "flightoed/errors.hpp"
#include "flightoed/information.hpp"

namespace flightoed {

namespace {

struct RunResult {
  Eigen::VectorXd estimate;
  bool converged = false;
};

LtiModel model_at(const LtiModel& model, const std::vector<std::string>& names, const Eigen::VectorXd& theta) {
  LtiModel m = model;
  for (size_t k = 0; k < names.size(); ++k) m = m.with_parameter(names[k], theta(static_cast<Eigen::Index>(k)));
  return m;
}

// Weighted measured outputs stacked like weighted_output_jacobian rows.
Eigen::VectorXd weighted_outputs(const Trajectory& tr, const SensorModel& sensor, const std::vector<int>& rows) {
  const int ny = static_cast<int>(sensor.outputs.size());
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()) * ny);
  for (int j = 0; j < ny; ++j) {
    const int c = tr.column(sensor.outputs[static_cast<size_t>(j)]);
    for (size_t r = 0; r < rows.size(); ++r) y(static_cast<Eigen::Index>(r) * ny + j) = tr.states(rows[r], c) / sensor.sigma(j);
  }
  return y;
}

RunResult estimate_once(const LtiModel& model, const InputSignal& signal, const SensorModel& sensor,
                        const std::vector<std::string>& names, const Eigen::VectorXd& truth,
                        const Eigen::VectorXd& y_true, const std::vector<int>& rows, const MonteCarloOptions& opt,
                        std::uint64_t run) {
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> start(-opt.initial_perturbation, opt.initial_perturbation);

  // Noise is white with unit variance after the 1/sigma weighting.
  Eigen::VectorXd y_meas(y_true.size());
  for (Eigen::Index i = 0; i < y_meas.size(); ++i) y_meas(i) = y_true(i) + noise(rng);
  Eigen::VectorXd theta(truth.size());
  for (Eigen::Index k = 0; k < theta.size(); ++k) theta(k) = truth(k) * (1.0 + start(rng));

  RunResult out;
  auto evaluate = [&](const Eigen::VectorXd& th, Eigen::MatrixXd* J) {
    const LtiModel m = model_at(model, names, th);
    if (J) {
      const SensitivityResult s = sensitivity_trajectories(m, signal, names);
      *J = weighted_output_jacobian(s, sensor);
      return Eigen::VectorXd(y_meas - weighted_outputs(s.nominal, sensor, rows));
    }
    return Eigen::VectorXd(y_meas - weighted_outputs(simulate_lti(m, signal), sensor, rows));
  };

  Eigen::MatrixXd J;
  Eigen::VectorXd res = evaluate(theta, &J);
  double cost = res.squaredNorm();
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (!std::isfinite(cost)) return out;
    const Eigen::VectorXd step = (J.transpose() * J).ldlt().solve(J.transpose() * res);
    if (!step.allFinite()) return out;
    // Gauss-Newton decrement: the model cost reduction available from this step.
    if (step.dot(J.transpose() * res) <= 1e-12 * cost) {
      out.estimate = theta;
      out.converged = true;
      return out;
    }
    double lambda = 1.0;
    Eigen::VectorXd trial = theta + step;
    Eigen::VectorXd trial_res = evaluate(trial, nullptr);
    double trial_cost = trial_res.squaredNorm();
    for (int k = 0; k < 20 && !(trial_cost <= cost); ++k) {
      lambda *= 0.5;
      trial = theta + lambda * step;
      trial_res = evaluate(trial, nullptr);
      trial_cost = trial_res.squaredNorm();
    }
    if (!(trial_cost <= cost)) return out;
    const bool small = ((lambda * step).array().abs() <= opt.step_tolerance * theta.array().abs()).all();
    theta = trial;
    if (small) {
      out.estimate = theta;
      out.converged = true;
      return out;
    }
    res = evaluate(theta, &J);
    cost = res.squaredNorm();
  }
  return out;
}

}  // namespace

MonteCarloResult monte_carlo_crlb_check(const LtiModel& model, const InputSignal& signal, const SensorModel& sensor,
                                        const std::vector<std::string>& parameters,
                                        const MonteCarloOptions& options) {
  if (options.runs < 2) throw ValidationError("monte carlo: need at least two runs");
  const int P = static_cast<int>(parameters.size());
  Eigen::VectorXd truth(P);
  for (int k = 0; k < P; ++k) truth(k) = model.parameter_value(parameters[static_cast<size_t>(k)]);

  const SensitivityResult nominal = sensitivity_trajectories(model, signal, parameters);
  const InformationReport report = analyze_fisher(fisher_matrix(nominal, sensor), parameters, truth);
  if (!report.covariance || !report.unidentifiable.empty())
    throw ValidationError("monte carlo: Fisher matrix is not full rank");
  const std::vector<int> rows = measurement_rows(signal.sample_period, signal.size(), sensor);
  const Eigen::VectorXd y_true = weighted_outputs(nominal.nominal, sensor, rows);

  std::vector<RunResult> results(static_cast<size_t>(options.runs));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r; (r = next.fetch_add(1)) < options.runs;)
      results[static_cast<size_t>(r)] =
          estimate_once(model, signal, sensor, parameters, truth, y_true, rows, options, static_cast<std::uint64_t>(r));
  };
  int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, options.runs));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  MonteCarloResult out;
  out.parameters = parameters;
  out.truth = truth;
  out.runs = options.runs;
  out.predicted_std = report.crlb_marginal;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(P), sum_sq = Eigen::VectorXd::Zero(P);
  int ok = 0;
  for (const auto& r : results) {
    if (!r.converged) {
      ++out.diverged;
      continue;
    }
    const Eigen::VectorXd e = r.estimate - truth;
    sum += e;
    sum_sq += e.cwiseProduct(e);
    ++ok;
  }
  if (out.diverged * 20 > options.runs)
    throw ConvergenceError("monte carlo: " + std::to_string(out.diverged) + " of " + std::to_string(options.runs) +
                           " estimation runs diverged");
  const Eigen::VectorXd mean_err = sum / ok;
  out.mean = truth + mean_err;
  out.empirical_std = ((sum_sq - ok * mean_err.cwiseProduct(mean_err)) / (ok - 1)).cwiseSqrt();
  return out;
}

}  // namespace flightoed
