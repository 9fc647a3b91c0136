#include "flightoed/oed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "flightoed/errors.hpp"
#include "flightoed/qp.hpp"
#include "flightoed/maneuvers.hpp"

namespace flightoed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int whole_ratio(double a, double b, const char* what) {
  const double r = a / b;
  const long n = std::lround(r);
  if (n < 1 || std::abs(r - static_cast<double>(n)) > 1e-9 * r) throw ValidationError(std::string("oed: ") + what);
  return static_cast<int>(n);
}

}  // namespace

std::vector<std::string> estimable_parameters(const LtiModel& model, const std::string& active_channel) {
  if (!model.augmented()) throw ValidationError("oed: model must be rate-augmented");
  const int active = model.state_index(active_channel);
  if (active < 0 || std::find(model.deflection_states.begin(), model.deflection_states.end(), active) ==
                        model.deflection_states.end())
    throw ValidationError("oed: '" + active_channel + "' is not a deflection state");
  std::vector<std::string> out;
  for (const auto& name : model.parameter_names()) {
    bool inactive_only = true;
    for (const auto& s : model.parameter_map) {
      if (s.name != name) continue;
      const bool inactive_input = s.col != active && std::find(model.deflection_states.begin(),
                                                               model.deflection_states.end(),
                                                               s.col) != model.deflection_states.end();
      if (!inactive_input) inactive_only = false;
    }
    if (!inactive_only) out.push_back(name);
  }
  return out;
}

Eigen::MatrixXd ParameterScaling::scale_fisher(const Eigen::MatrixXd& F) const {
  return nominal.asDiagonal() * F * nominal.asDiagonal();
}

Eigen::VectorXd ParameterScaling::scale_crlb(const Eigen::VectorXd& crlb) const {
  return crlb.cwiseQuotient(nominal.cwiseAbs());
}

ParameterScaling scale_parameters(const std::vector<std::string>& parameters, const Eigen::VectorXd& nominal) {
  if (nominal.size() != static_cast<Eigen::Index>(parameters.size()))
    throw ValidationError("scale_parameters: size mismatch");
  for (Eigen::Index k = 0; k < nominal.size(); ++k)
    if (nominal(k) == 0.0 || !std::isfinite(nominal(k)))
      throw ValidationError("scale_parameters: zero nominal value for '" + parameters[static_cast<size_t>(k)] + "'");
  return {parameters, nominal};
}

OedNlp::OedNlp(const OedProblem& problem) : problem_(problem) {
  const OedProblem& p = problem_;
  p.sensor.validate();
  scale_parameters(p.parameters, p.nominal);
  const std::vector<std::string> allowed = estimable_parameters(p.model, p.active_channel);
  for (const auto& name : p.parameters)
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
      throw ValidationError("oed: parameter '" + name + "' is not excited by '" + p.active_channel + "'");

  samples_ = whole_ratio(p.horizon, p.sample_period, "horizon must be a whole number of samples");
  per_knot_ = whole_ratio(p.control_period, p.sample_period, "control period must be a multiple of the sample period");
  if (samples_ % per_knot_ != 0) throw ValidationError("oed: horizon must be a whole number of control periods");
  knots_ = samples_ / per_knot_;
  const auto box = p.constraints.oed_bound(p.active_channel);
  if (!box) throw ValidationError("oed: no deflection bound for '" + p.active_channel + "'");
  box_ = std::min(-box->lower, box->upper);
  params_ = static_cast<int>(p.parameters.size());

  std::vector<int> bounded;
  for (int s = 0; s < p.model.states(); ++s) {
    const bool deflection = std::find(p.model.deflection_states.begin(), p.model.deflection_states.end(), s) !=
                            p.model.deflection_states.end();
    if (!deflection && p.constraints.oed_bound(p.model.state_labels[static_cast<size_t>(s)])) bounded.push_back(s);
  }
  const auto rate = p.constraints.oed_bound(p.active_channel + "_rate");
  const int state_rows = samples_ * static_cast<int>(bounded.size());
  const int rate_rows = rate ? knots_ : 0;
  C_ = Eigen::MatrixXd::Zero(state_rows + rate_rows, knots_);
  lower_.resize(state_rows + rate_rows);
  upper_.resize(state_rows + rate_rows);

  // One hat-shaped deflection per knot gives one column of every linear map.
  InputSignal hat = zero_signal({p.sample_period, samples_}, {p.active_channel});
  Eigen::MatrixXd G;  // vec(J D) = G d, column-major J
  int rows = 0;
  for (int k = 1; k <= knots_; ++k) {
    hat.samples.setZero();
    for (int i = std::max(0, (k - 1) * per_knot_); i < std::min(samples_, (k + 1) * per_knot_); ++i)
      hat.samples(i, 0) = 1.0 - std::abs(i - k * per_knot_) / static_cast<double>(per_knot_);
    const SensitivityResult sens = sensitivity_trajectories(p.model, hat, p.parameters);
    Eigen::MatrixXd J = weighted_output_jacobian(sens, p.sensor) * p.nominal.asDiagonal();
    if (G.size() == 0) {
      rows = static_cast<int>(J.rows());
      G.resize(J.size(), knots_);
    }
    G.col(k - 1) = Eigen::Map<const Eigen::VectorXd>(J.data(), J.size());
    for (size_t b = 0; b < bounded.size(); ++b)
      C_.col(k - 1).segment(static_cast<Eigen::Index>(b) * samples_, samples_) =
          sens.nominal.states.col(bounded[b]).tail(samples_);
  }
  for (int a = 0; a < params_; ++a)
    for (int b = a; b < params_; ++b) pairs_.emplace_back(a, b);
  S_.resize(static_cast<Eigen::Index>(pairs_.size()) * knots_, knots_);
  for (size_t i = 0; i < pairs_.size(); ++i) {
    const auto [a, b] = pairs_[i];
    const Eigen::MatrixXd M = G.middleRows(static_cast<Eigen::Index>(a) * rows, rows).transpose() *
                              G.middleRows(static_cast<Eigen::Index>(b) * rows, rows);
    S_.middleRows(static_cast<Eigen::Index>(i) * knots_, knots_) = 0.5 * (M + M.transpose());
  }
  for (size_t b = 0; b < bounded.size(); ++b) {
    const std::string& label = p.model.state_labels[static_cast<size_t>(bounded[b])];
    const Bound bd = *p.constraints.oed_bound(label);
    lower_.segment(static_cast<Eigen::Index>(b) * samples_, samples_).setConstant(bd.lower);
    upper_.segment(static_cast<Eigen::Index>(b) * samples_, samples_).setConstant(bd.upper);
    labels_.insert(labels_.end(), static_cast<size_t>(samples_), label);
  }
  for (int j = 0; j < rate_rows; ++j) {
    const int row = state_rows + j;
    C_(row, j) = 1.0 / p.control_period;
    if (j > 0) C_(row, j - 1) = -1.0 / p.control_period;
    lower_(row) = rate->lower;
    upper_(row) = rate->upper;
    labels_.push_back(p.active_channel + "_rate");
  }
}

Eigen::VectorXd OedNlp::knots_from_signal(const InputSignal& signal) const {
  const Eigen::VectorXd x = signal.channel(problem_.active_channel);
  if (x.size() != samples_) throw ValidationError("oed: signal length does not match the horizon");
  Eigen::VectorXd d(knots_);
  for (int k = 1; k <= knots_; ++k) {
    if (k * per_knot_ < samples_) {
      d(k - 1) = x(k * per_knot_);
      continue;
    }
    // Knot past the last sample: invert the interpolation on the final segment.
    const int i = samples_ - 1;
    const double f = static_cast<double>(i - (k - 1) * per_knot_) / per_knot_;
    const double left = k == 1 ? 0.0 : d(k - 2);
    d(k - 1) = f > 0.0 ? (x(i) - (1.0 - f) * left) / f : left;
  }
  return d;
}

InputSignal OedNlp::signal_from_knots(const Eigen::VectorXd& knots) const {
  InputSignal s = zero_signal({problem_.sample_period, samples_}, {problem_.active_channel});
  for (int i = 0; i < samples_; ++i) {
    const int j = i / per_knot_;
    const double f = static_cast<double>(i % per_knot_) / per_knot_;
    const double left = j == 0 ? 0.0 : knots(j - 1);
    const double right = j < knots_ ? knots(j) : left;
    s.samples(i, 0) = (1.0 - f) * left + f * right;
  }
  s.metadata.kind = SignalKind::Optimized;
  s.metadata.amplitude = box_;
  return s;
}

Eigen::VectorXd OedNlp::rates_from_knots(const Eigen::VectorXd& knots) const {
  Eigen::VectorXd r(knots_);
  for (int j = 0; j < knots_; ++j) r(j) = (knots(j) - (j == 0 ? 0.0 : knots(j - 1))) / problem_.control_period;
  return r;
}

Eigen::VectorXd OedNlp::knots_from_rates(const Eigen::VectorXd& rates) const {
  Eigen::VectorXd d(knots_);
  double acc = 0.0;
  for (int j = 0; j < knots_; ++j) d(j) = acc += rates(j) * problem_.control_period;
  return d;
}

double OedNlp::objective(const Eigen::VectorXd& knots) const {
  Eigen::VectorXd unused;
  return objective(knots, unused);
}

double OedNlp::objective(const Eigen::VectorXd& knots, Eigen::VectorXd& gradient) const {
  const Eigen::VectorXd v = S_ * knots;
  const Eigen::Map<const Eigen::MatrixXd> Sd(v.data(), knots_, static_cast<Eigen::Index>(pairs_.size()));
  const Eigen::VectorXd quad = Sd.transpose() * knots;
  Eigen::MatrixXd F(params_, params_);
  for (size_t i = 0; i < pairs_.size(); ++i) F(pairs_[i].first, pairs_[i].second) = F(pairs_[i].second, pairs_[i].first) = quad(i);
  Eigen::LLT<Eigen::MatrixXd> llt(F);
  const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
  if (llt.info() != Eigen::Success || !(diag.minCoeff() > 1e-7 * diag.maxCoeff())) {
    gradient = Eigen::VectorXd::Zero(knots_);
    return kInf;
  }
  const Eigen::MatrixXd Finv = llt.solve(Eigen::MatrixXd::Identity(params_, params_));
  const double psi = Finv.trace() / params_;
  // d psi / d F = -F^-2 / n and d F_ab / d d = 2 S_ab d; off-diagonal pairs count twice.
  const Eigen::MatrixXd W = -(Finv * Finv) / params_;
  Eigen::VectorXd w(static_cast<Eigen::Index>(pairs_.size()));
  for (size_t i = 0; i < pairs_.size(); ++i) {
    const auto [a, b] = pairs_[i];
    w(i) = (a == b ? 2.0 : 4.0) * W(a, b);
  }
  gradient = Sd * w;
  return psi;
}

Eigen::MatrixXd OedNlp::hessian(const Eigen::VectorXd& knots) const {
  const Eigen::VectorXd v = S_ * knots;
  const Eigen::Map<const Eigen::MatrixXd> Sd(v.data(), knots_, static_cast<Eigen::Index>(pairs_.size()));
  const Eigen::VectorXd quad = Sd.transpose() * knots;
  Eigen::MatrixXd F(params_, params_);
  for (size_t i = 0; i < pairs_.size(); ++i) F(pairs_[i].first, pairs_[i].second) = F(pairs_[i].second, pairs_[i].first) = quad(i);
  const Eigen::LLT<Eigen::MatrixXd> llt(F);
  if (llt.info() != Eigen::Success) throw ValidationError("oed: Hessian requested at an uninformative design");
  const Eigen::MatrixXd Finv = llt.solve(Eigen::MatrixXd::Identity(params_, params_));
  const Eigen::MatrixXd Finv2 = Finv * Finv;

  // d2 psi = (2 tr(F^-2 dF_k F^-1 dF_l) - tr(F^-2 d2F_kl)) / n with (dF_k)_ab = 2 (S_ab d)_k.
  const Eigen::Index pp = static_cast<Eigen::Index>(params_) * params_;
  Eigen::MatrixXd Q(knots_, pp), P(knots_, pp);
  Eigen::MatrixXd dF(params_, params_);
  for (int k = 0; k < knots_; ++k) {
    for (size_t i = 0; i < pairs_.size(); ++i)
      dF(pairs_[i].first, pairs_[i].second) = dF(pairs_[i].second, pairs_[i].first) = 2.0 * Sd(k, static_cast<Eigen::Index>(i));
    const Eigen::MatrixXd q = Finv2 * dF;
    const Eigen::MatrixXd pt = (Finv * dF).transpose();
    Q.row(k) = Eigen::Map<const Eigen::RowVectorXd>(q.data(), pp);
    P.row(k) = Eigen::Map<const Eigen::RowVectorXd>(pt.data(), pp);
  }
  Eigen::MatrixXd H = 2.0 / params_ * (Q * P.transpose());
  for (size_t i = 0; i < pairs_.size(); ++i) {
    const auto [a, b] = pairs_[i];
    H -= (a == b ? 2.0 : 4.0) / params_ * Finv2(a, b) * S_.middleRows(static_cast<Eigen::Index>(i) * knots_, knots_);
  }
  return 0.5 * (H + H.transpose());
}

Eigen::VectorXd OedNlp::finite_difference_gradient(const Eigen::VectorXd& knots, double step) const {
  const double f0 = objective(knots);
  Eigen::VectorXd g(knots_);
  for (int k = 0; k < knots_; ++k) {
    Eigen::VectorXd x = knots;
    const double h = step * std::max(1.0, std::abs(knots(k)) / box_) * box_;
    x(k) += h;
    g(k) = (objective(x) - f0) / h;
  }
  return g;
}

bool OedNlp::informative(const Eigen::VectorXd& knots) const { return std::isfinite(objective(knots)); }

double OedNlp::max_violation(const Eigen::VectorXd& knots) const {
  double v = std::max(0.0, knots.cwiseAbs().maxCoeff() - box_);
  if (C_.rows() > 0) {
    const Eigen::VectorXd c = C_ * knots;
    v = std::max({v, (c - upper_).maxCoeff(), (lower_ - c).maxCoeff()});
  }
  return v;
}

double OedNlp::feasible_scale(const Eigen::VectorXd& knots) const {
  double s = 1.0;
  const double peak = knots.cwiseAbs().maxCoeff();
  if (peak > box_) s = box_ / peak;
  const Eigen::VectorXd c = C_ * knots;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c(i) > upper_(i)) s = std::min(s, upper_(i) / c(i));
    if (c(i) < lower_(i)) s = std::min(s, lower_(i) / c(i));
  }
  return s;
}

OedNlp transcribe(const OedProblem& problem) {
  OedNlp nlp(problem);
  const InputSignal& guess = problem.initial_guess;
  guess.validate();
  if (guess.size() != nlp.decision_count() * nlp.samples_per_knot() || guess.sample_period != problem.sample_period)
    throw ValidationError("oed: initial guess is not on the problem grid");
  for (const auto& ch : guess.channels)
    if (ch != problem.active_channel) throw ValidationError("oed: initial guess excites inactive channel '" + ch + "'");

  const double tol = 1e-6;
  const Trajectory tr = simulate_lti(problem.model, guess);
  for (int s = 0; s < problem.model.states(); ++s) {
    const auto b = problem.constraints.oed_bound(problem.model.state_labels[static_cast<size_t>(s)]);
    if (!b) continue;
    if (tr.states.col(s).maxCoeff() > b->upper + tol || tr.states.col(s).minCoeff() < b->lower - tol)
      throw ValidationError("oed: initial guess violates the bound on '" + problem.model.state_labels[static_cast<size_t>(s)] + "'");
  }
  if (!nlp.informative(nlp.knots_from_signal(guess)))
    throw ValidationError("oed: initial guess is not informative (singular Fisher matrix)");
  return nlp;
}

std::string to_string(SolverStatus status) {
  return status == SolverStatus::Converged ? "converged" : "max_iterations";
}

namespace {

struct StartResult {
  Eigen::VectorXd knots;
  double objective = kInf;
  int iterations = 0;
  double stationarity = kInf;
  SolverStatus status = SolverStatus::MaxIterations;
};

// Feasible-path SQP on the knots divided by their bound (y in [-1, 1]^K).
// The path constraints are linear, so every QP step keeps the iterate
// feasible and an Armijo search on the objective alone suffices. The QP
// Hessian is the exact one with eigenvalues mirrored and floored.
StartResult solve_from(const OedNlp& nlp, const Eigen::VectorXd& start) {
  const SolverSettings& settings = nlp.problem().settings;
  const double box = nlp.knot_bound();
  const int K = nlp.decision_count();
  StartResult best;
  const Eigen::VectorXd d0 = start * nlp.feasible_scale(start);
  best.knots = d0;
  best.objective = nlp.objective(d0);
  if (!std::isfinite(best.objective)) throw ValidationError("oed: starting point is not informative");
  const double f_scale = best.objective;

  QpProblem qp;
  const Eigen::VectorXd span = nlp.constraint_upper() - nlp.constraint_lower();
  qp.A = span.cwiseInverse().asDiagonal() * nlp.constraint_matrix() * box;
  const Eigen::VectorXd lo = nlp.constraint_lower().cwiseQuotient(span);
  const Eigen::VectorXd up = nlp.constraint_upper().cwiseQuotient(span);

  auto evaluate = [&](const Eigen::VectorXd& y, Eigen::VectorXd& g) {
    const Eigen::VectorXd d = box * y;
    double psi;
    if (settings.finite_difference_gradient) {
      psi = nlp.objective(d);
      if (std::isfinite(psi)) g = nlp.finite_difference_gradient(d, settings.finite_difference_step);
    } else {
      psi = nlp.objective(d, g);
    }
    g *= box / f_scale;
    return psi / f_scale;
  };

  Eigen::VectorXd y = (d0 / box).cwiseMax(-1.0).cwiseMin(1.0);
  Eigen::VectorXd g;
  double f = evaluate(y, g);
  for (int iter = 1; iter <= settings.max_outer_iterations; ++iter) {
    best.iterations = iter;
    const Eigen::MatrixXd H = nlp.hessian(box * y) * (box * box / f_scale);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H);
    const Eigen::VectorXd ev = eig.eigenvalues().cwiseAbs();
    const double floor = 1e-8 * std::max(1.0, ev.maxCoeff());
    qp.H = eig.eigenvectors() * ev.cwiseMax(floor).asDiagonal() * eig.eigenvectors().transpose();
    qp.g = g;
    const Eigen::VectorXd ay = qp.A * y;
    qp.row_lower = lo - ay;
    qp.row_upper = up - ay;
    qp.lower = -Eigen::VectorXd::Ones(K) - y;
    qp.upper = Eigen::VectorXd::Ones(K) - y;
    const QpResult step = solve_qp(qp, settings.max_qp_iterations);

    // KKT residual at y with the QP multipliers: gradient balance plus complementarity.
    const Eigen::VectorXd row_mult = step.row_upper_mult - step.row_lower_mult;
    const Eigen::VectorXd residual =
        g + qp.A.transpose() * row_mult + step.upper_mult - step.lower_mult;
    double comp = 0.0;
    for (Eigen::Index i = 0; i < ay.size(); ++i)
      comp = std::max({comp, step.row_lower_mult(i) * std::abs(ay(i) - lo(i)),
                       step.row_upper_mult(i) * std::abs(up(i) - ay(i))});
    for (int j = 0; j < K; ++j)
      comp = std::max({comp, step.lower_mult(j) * std::abs(y(j) + 1.0), step.upper_mult(j) * std::abs(1.0 - y(j))});
    best.stationarity = std::max(residual.cwiseAbs().maxCoeff(), comp);
    if (best.stationarity <= settings.stationarity_tolerance &&
        nlp.max_violation(box * y) <= settings.feasibility_tolerance) {
      best.status = SolverStatus::Converged;
      break;
    }

    const Eigen::VectorXd p = step.x;
    const double slope = g.dot(p);
    if (!(slope < 0.0)) break;
    double alpha = 1.0;
    Eigen::VectorXd y_new, g_new;
    double f_new = kInf;
    for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
      y_new = (y + alpha * p).cwiseMax(-1.0).cwiseMin(1.0);
      f_new = evaluate(y_new, g_new);
      if (f_new <= f + 1e-4 * alpha * slope) break;
    }
    if (!(f_new <= f + 1e-4 * alpha * slope)) break;
    y = y_new;
    g = g_new;
    f = f_new;
    const Eigen::VectorXd d = box * y;
    if (nlp.max_violation(d) <= settings.feasibility_tolerance && f * f_scale < best.objective) {
      best.objective = f * f_scale;
      best.knots = d;
    }
  }
  return best;
}

}  // namespace

OedSolution solve_oed(const OedProblem& problem) {
  const OedNlp nlp = transcribe(problem);

  std::vector<InputSignal> guesses{problem.initial_guess};
  const SignalMetadata& meta = problem.initial_guess.metadata;
  for (double width : problem.settings.multistart_pulse_widths) {
    if (meta.kind != SignalKind::ThreeTwoOneOne) throw ValidationError("oed: multi-start needs a 3-2-1-1 initial guess");
    const double rate = problem.constraints.oed_bound(problem.active_channel + "_rate")
                            ? problem.constraints.oed_bound(problem.active_channel + "_rate")->upper
                            : kInf;
    guesses.push_back(gen_3211(meta.amplitude, width, meta.start_time, rate, problem.initial_guess.grid(),
                               problem.active_channel));
  }

  std::vector<StartResult> results(guesses.size());
  auto run = [&](size_t i) { results[i] = solve_from(nlp, nlp.knots_from_signal(guesses[i])); };
  const int threads = problem.settings.threads > 0 ? problem.settings.threads
                                                   : static_cast<int>(std::thread::hardware_concurrency());
  if (guesses.size() > 1 && threads > 1) {
    std::vector<std::thread> pool;
    for (size_t i = 0; i < guesses.size(); ++i) pool.emplace_back(run, i);
    for (auto& t : pool) t.join();
  } else {
    for (size_t i = 0; i < guesses.size(); ++i) run(i);
  }
  size_t best = 0;
  for (size_t i = 1; i < results.size(); ++i)
    if (results[i].objective < results[best].objective) best = i;

  auto report_for = [&](const InputSignal& s) {
    const SensitivityResult sens = sensitivity_trajectories(problem.model, s, problem.parameters);
    return analyze_fisher(fisher_matrix(sens, problem.sensor), problem.parameters, problem.nominal);
  };

  OedSolution sol;
  sol.start_index = static_cast<int>(best);
  sol.iterations = results[best].iterations;
  sol.status = results[best].status;
  sol.stationarity = results[best].stationarity;
  sol.signal = round_to_csv_precision(nlp.signal_from_knots(results[best].knots));
  sol.report = report_for(sol.signal);
  const InformationReport initial = report_for(problem.initial_guess);
  sol.initial_objective = initial.a_criterion_scaled.value_or(kInf);
  sol.objective = sol.report.a_criterion_scaled.value_or(kInf);
  if (!(sol.objective <= sol.initial_objective)) {
    sol.signal = problem.initial_guess;
    sol.report = initial;
    sol.objective = sol.initial_objective;
  }

  sol.trajectory = simulate_lti(problem.model, sol.signal);
  for (int s = 0; s < problem.model.states(); ++s) {
    const std::string& label = problem.model.state_labels[static_cast<size_t>(s)];
    const auto b = problem.constraints.oed_bound(label);
    if (!b) continue;
    const auto col = sol.trajectory.states.col(s);
    sol.max_violation[label] = std::max({0.0, col.maxCoeff() - b->upper, b->lower - col.minCoeff()});
  }
  if (const auto rate = problem.constraints.oed_bound(problem.active_channel + "_rate")) {
    const Eigen::VectorXd x = sol.signal.channel(problem.active_channel);
    const Eigen::VectorXd r = (x.tail(x.size() - 1) - x.head(x.size() - 1)) / sol.signal.sample_period;
    sol.max_violation[problem.active_channel + "_rate"] =
        std::max({0.0, r.maxCoeff() - rate->upper, rate->lower - r.minCoeff()});
  }
  return sol;
}

double bang_bang_metric(const InputSignal& signal, const EnvelopeConstraints& constraints) {
  signal.validate();
  long hits = 0, total = 0;
  for (size_t c = 0; c < signal.channels.size(); ++c) {
    const auto pos = constraints.oed_bound(signal.channels[c]);
    const auto rate = constraints.oed_bound(signal.channels[c] + "_rate");
    if (!pos && !rate) continue;
    const Eigen::VectorXd x = signal.samples.col(static_cast<Eigen::Index>(c));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      bool at = false;
      if (pos) at = x(i) >= pos->upper - 0.02 * std::abs(pos->upper) || x(i) <= pos->lower + 0.02 * std::abs(pos->lower);
      if (!at && rate && i + 1 < x.size()) {
        const double r = (x(i + 1) - x(i)) / signal.sample_period;
        at = r >= rate->upper - 0.02 * std::abs(rate->upper) || r <= rate->lower + 0.02 * std::abs(rate->lower);
      }
      hits += at;
      ++total;
    }
  }
  return total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
}

}  // namespace flightoed
