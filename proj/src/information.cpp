#include "flightoed/information.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>

#include "flightoed/errors.hpp"

namespace flightoed {

std::vector<int> measurement_rows(double sample_period, int samples, const SensorModel& sensor) {
  sensor.validate();
  const double ratio = 1.0 / (sample_period * sensor.sample_rate);
  const int stride = static_cast<int>(std::lround(ratio));
  if (stride < 1 || std::abs(ratio - stride) > 1e-9 * ratio)
    throw ValidationError("sensor rate must divide the signal rate");
  std::vector<int> rows;
  for (int i = stride; i <= samples; i += stride) rows.push_back(i);
  return rows;
}

Eigen::MatrixXd weighted_output_jacobian(const SensitivityResult& sens, const SensorModel& sensor) {
  const int N = static_cast<int>(sens.nominal.states.rows()) - 1;
  const std::vector<int> rows = measurement_rows(sens.nominal.sample_period, N, sensor);
  const int ny = static_cast<int>(sensor.outputs.size());
  std::vector<int> cols;
  for (const auto& o : sensor.outputs) cols.push_back(sens.nominal.column(o));
  const int P = static_cast<int>(sens.parameters.size());
  Eigen::MatrixXd J(static_cast<Eigen::Index>(rows.size()) * ny, P);
  for (int k = 0; k < P; ++k) {
    const Eigen::MatrixXd& S = sens.states[static_cast<size_t>(k)];
    for (size_t r = 0; r < rows.size(); ++r)
      for (int j = 0; j < ny; ++j)
        J(static_cast<Eigen::Index>(r) * ny + j, k) = S(rows[r], cols[static_cast<size_t>(j)]) / sensor.sigma(j);
  }
  return J;
}

Eigen::MatrixXd fisher_matrix(const SensitivityResult& sens, const SensorModel& sensor) {
  const Eigen::MatrixXd J = weighted_output_jacobian(sens, sensor);
  Eigen::MatrixXd F = J.transpose() * J;
  return 0.5 * (F + F.transpose());
}

InformationReport analyze_fisher(const Eigen::MatrixXd& fisher, const std::vector<std::string>& parameters,
                                 const Eigen::VectorXd& nominal) {
  const int n = static_cast<int>(parameters.size());
  if (fisher.rows() != n || fisher.cols() != n || nominal.size() != n)
    throw ValidationError("analyze_fisher: dimension mismatch");
  const double inf = std::numeric_limits<double>::infinity();

  InformationReport r;
  r.parameters = parameters;
  r.nominal = nominal;
  r.fisher = fisher;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fisher, Eigen::EigenvaluesOnly);
  r.singular_values = es.eigenvalues().cwiseAbs().reverse();
  std::sort(r.singular_values.data(), r.singular_values.data() + n, std::greater<>());
  const double smax = n > 0 ? r.singular_values(0) : 0.0;
  if (!(smax > 0.0)) throw ValidationError("information: every parameter is unidentifiable (no excitation)");
  const double threshold = n * std::numeric_limits<double>::epsilon() * smax;
  r.rank = static_cast<int>((r.singular_values.array() > threshold).count());

  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (fisher(i, i) > threshold) {
      keep.push_back(i);
      r.identifiable.push_back(parameters[static_cast<size_t>(i)]);
    } else {
      r.unidentifiable.push_back(parameters[static_cast<size_t>(i)]);
    }
  }

  r.crlb_diagonal = Eigen::VectorXd::Constant(n, inf);
  r.crlb_marginal = Eigen::VectorXd::Constant(n, inf);
  for (int i : keep) r.crlb_diagonal(i) = 1.0 / std::sqrt(fisher(i, i));

  const int m = static_cast<int>(keep.size());
  Eigen::MatrixXd Fs(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) Fs(a, b) = fisher(keep[static_cast<size_t>(a)], keep[static_cast<size_t>(b)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sub(Fs, Eigen::EigenvaluesOnly);
  const double sub_threshold = m * std::numeric_limits<double>::epsilon() * sub.eigenvalues().cwiseAbs().maxCoeff();
  if (sub.eigenvalues().minCoeff() > sub_threshold) {
    Eigen::MatrixXd cov = Fs.ldlt().solve(Eigen::MatrixXd::Identity(m, m));
    cov = 0.5 * (cov + cov.transpose());
    bool scalable = true;
    double scaled = 0.0;
    for (int a = 0; a < m; ++a) {
      const int i = keep[static_cast<size_t>(a)];
      r.crlb_marginal(i) = std::sqrt(cov(a, a));
      if (nominal(i) == 0.0) scalable = false;
      else scaled += cov(a, a) / (nominal(i) * nominal(i));
    }
    r.a_criterion = cov.trace() / m;
    if (scalable) r.a_criterion_scaled = scaled / m;
    r.covariance = std::move(cov);
  } else {
    r.a_criterion = inf;
  }
  return r;
}

InformationReport information_report(const LtiModel& model, const InputSignal& signal, const SensorModel& sensor,
                                     const std::vector<std::string>& parameters) {
  const SensitivityResult sens = sensitivity_trajectories(model, signal, parameters);
  Eigen::VectorXd nominal(static_cast<Eigen::Index>(parameters.size()));
  for (size_t k = 0; k < parameters.size(); ++k) nominal(static_cast<Eigen::Index>(k)) = model.parameter_value(parameters[k]);
  return analyze_fisher(fisher_matrix(sens, sensor), parameters, nominal);
}

std::vector<CrlbComparison> compare_reports(const InformationReport& baseline, const InformationReport& candidate) {
  if (baseline.parameters != candidate.parameters) throw ValidationError("compare: parameter sets differ");
  std::vector<CrlbComparison> rows;
  for (size_t k = 0; k < baseline.parameters.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    CrlbComparison c;
    c.parameter = baseline.parameters[k];
    c.value = baseline.nominal(i);
    c.crlb_init = baseline.crlb_diagonal(i);
    c.crlb_opt = candidate.crlb_diagonal(i);
    if (std::isfinite(c.crlb_init) && std::isfinite(c.crlb_opt))
      c.delta_pct = 100.0 * (c.crlb_opt - c.crlb_init) / c.crlb_init;
    else
      c.note = std::isfinite(c.crlb_init) ? "unidentifiable in candidate" : "unidentifiable in baseline";
    rows.push_back(std::move(c));
  }
  return rows;
}

std::vector<CrlbComparison> compare_designs(const LtiModel& model, const InputSignal& baseline,
                                            const InputSignal& candidate, const SensorModel& sensor,
                                            const std::vector<std::string>& parameters) {
  if (baseline.size() != candidate.size() || baseline.sample_period != candidate.sample_period)
    throw ValidationError("compare: signals are on different grids");
  return compare_reports(information_report(model, baseline, sensor, parameters),
                         information_report(model, candidate, sensor, parameters));
}

double mean_delta_pct(const std::vector<CrlbComparison>& rows) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : rows)
    if (r.delta_pct) {
      sum += *r.delta_pct;
      ++n;
    }
  return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace flightoed
