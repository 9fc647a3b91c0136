#include "flightoed/assessment.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "flightoed/dynamics.hpp"
#include "flightoed/errors.hpp"

namespace flightoed {

namespace {

const std::vector<std::string>& state_labels() {
  static const std::vector<std::string> labels = {"V_T", "beta", "alpha", "phi", "theta", "psi", "p", "q", "r"};
  return labels;
}

using Vector9 = RigidBodyState::Vector;

Vector9 rhs(const Vector9& x, const ControlDeflections& u, const AeroCoefficients& c, const AirframeProperties& props) {
  return nonlinear_rhs(RigidBodyState::from_vector(x), u, c, props).to_vector();
}

}  // namespace

ReplayResult nonlinear_replay(const InputSignal& signal, const AeroCoefficients& coeffs,
                              const AirframeProperties& props, const TrimCondition& trim,
                              const EnvelopeConstraints& limits, int substeps) {
  signal.validate();
  if (substeps < 1) throw ValidationError("replay: substeps must be positive");
  const int ia = signal.channel_index("delta_a"), ie = signal.channel_index("delta_e"), ir = signal.channel_index("delta_r");
  for (const auto& ch : signal.channels)
    if (ch != "delta_a" && ch != "delta_e" && ch != "delta_r")
      throw ValidationError("replay: unknown channel '" + ch + "'");

  const int N = signal.size();
  const double h = signal.sample_period / substeps;
  ReplayResult out;
  out.trajectory.sample_period = signal.sample_period;
  out.trajectory.labels = state_labels();
  out.trajectory.states.resize(N + 1, 9);

  std::vector<int> monitored;
  for (int j = 0; j < 9; ++j)
    if (limits.envelope_bound(state_labels()[static_cast<size_t>(j)])) monitored.push_back(j);
  Vector9 x = trim.state().to_vector();
  for (int j : monitored) out.report.variables.push_back({state_labels()[static_cast<size_t>(j)], std::nullopt, x(j), x(j)});

  auto check = [&](int row) {
    for (size_t v = 0; v < monitored.size(); ++v) {
      const double value = x(monitored[v]);
      auto& ex = out.report.variables[v];
      ex.min = std::min(ex.min, value);
      ex.max = std::max(ex.max, value);
      if (!ex.first_violation_time && !limits.envelope_bound(ex.name)->contains(value)) {
        ex.first_violation_time = row * signal.sample_period;
        if (!out.report.abort_time) {
          out.report.abort_time = ex.first_violation_time;
          out.report.abort_variable = ex.name;
          out.report.abort_cause = "envelope";
        }
      }
    }
  };

  out.trajectory.states.row(0) = x.transpose();
  check(0);
  for (int i = 0; i < N; ++i) {
    ControlDeflections u = trim.controls();
    if (ia >= 0) u.aileron += signal.samples(i, ia);
    if (ie >= 0) u.elevator += signal.samples(i, ie);
    if (ir >= 0) u.rudder += signal.samples(i, ir);
    try {
      for (int s = 0; s < substeps; ++s) {
        const Vector9 k1 = rhs(x, u, coeffs, props);
        const Vector9 k2 = rhs(x + 0.5 * h * k1, u, coeffs, props);
        const Vector9 k3 = rhs(x + 0.5 * h * k2, u, coeffs, props);
        const Vector9 k4 = rhs(x + h * k3, u, coeffs, props);
        x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    } catch (const std::exception&) {
      x.setConstant(std::numeric_limits<double>::quiet_NaN());
    }
    if (!x.allFinite() || !(x(0) > 0.0)) {
      out.trajectory.states.conservativeResize(i + 1, 9);
      if (!out.report.abort_time) {
        out.report.abort_time = (i + 1) * signal.sample_period;
        out.report.abort_variable = "";
        out.report.abort_cause = "divergence";
      }
      return out;
    }
    out.trajectory.states.row(i + 1) = x.transpose();
    check(i + 1);
  }
  return out;
}

ScreenResult perturbed_model_screen(const InputSignal& signal, const AeroCoefficients& coeffs,
                                    const AirframeProperties& props, const TrimCondition& trim,
                                    const EnvelopeConstraints& limits, double perturbation_pct, int samples,
                                    std::uint64_t seed, int threads) {
  if (!(perturbation_pct >= 0.0)) throw ValidationError("screen: perturbation must be >= 0");
  if (samples < 1) throw ValidationError("screen: need at least one sample");
  ScreenResult out;
  std::vector<char> passed(static_cast<size_t>(samples), 0);

  auto one = [&](int k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(-perturbation_pct / 100.0, perturbation_pct / 100.0);
    AeroCoefficients c = coeffs;
    for (SymmetricTerms* t : {&c.x, &c.z, &c.m})
      for (double* v : {&t->alpha, &t->q, &t->elevator, &t->speed}) *v *= 1.0 + u(rng);
    for (AsymmetricTerms* t : {&c.y, &c.l, &c.n})
      for (double* v : {&t->beta, &t->p, &t->r, &t->aileron, &t->rudder}) *v *= 1.0 + u(rng);
    try {
      const TrimResult tr = trim_solve(trim.airspeed, c, props);
      passed[static_cast<size_t>(k)] = nonlinear_replay(signal, c, props, tr.condition, limits).report.passed();
    } catch (const std::exception&) {
      passed[static_cast<size_t>(k)] = 0;
    }
  };

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k; (k = next.fetch_add(1)) < samples;) one(k);
  };
  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, std::min(n, samples));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int count = 0;
  for (char p : passed) {
    out.passed.push_back(p != 0);
    count += p != 0;
  }
  out.pass_fraction = static_cast<double>(count) / samples;
  return out;
}

}  // namespace flightoed
