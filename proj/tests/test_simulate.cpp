#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>
#include <gtest/gtest.h>

#include "flightoed/lti.hpp"
#include "flightoed/maneuvers.hpp"
#include "flightoed/simulate.hpp"

using namespace flightoed;

namespace {

const DimensionalDerivatives kDerivs;
const TrimCondition kTrim;
const UniformGrid kGrid{0.01, 1000};

LtiModel scalar_model(double a, double b, bool b_is_parameter) {
  LtiModel m;
  m.A = Eigen::MatrixXd::Constant(1, 1, a);
  m.B = Eigen::MatrixXd::Constant(1, 1, b);
  m.state_labels = {"x"};
  m.input_labels = {"u"};
  m.parameter_map.push_back({"a", MatrixSlot::State, 0, 0, 1.0});
  if (b_is_parameter) m.parameter_map.push_back({"b", MatrixSlot::Input, 0, 0, 1.0});
  return m;
}

InputSignal constant_input(double value, int samples = 100) {
  InputSignal s = zero_signal({0.01, samples}, {"u"});
  s.samples.setConstant(value);
  return s;
}

// Sensitivities against central differences of simulate_lti, relative to each
// trajectory's peak.
double max_fd_error(const LtiModel& model, const InputSignal& signal) {
  const auto names = model.parameter_names();
  const SensitivityResult sens = sensitivity_trajectories(model, signal, names);
  double worst = 0.0;
  for (size_t k = 0; k < names.size(); ++k) {
    const double v = model.parameter_value(names[k]);
    const double h = 1e-6 * std::max(std::abs(v), 1e-3);
    const Trajectory up = simulate_lti(model.with_parameter(names[k], v + h), signal);
    const Trajectory dn = simulate_lti(model.with_parameter(names[k], v - h), signal);
    const Eigen::MatrixXd fd = (up.states - dn.states) / (2 * h);
    for (Eigen::Index c = 0; c < fd.cols(); ++c) {
      const double peak = sens.states[k].col(c).cwiseAbs().maxCoeff();
      if (peak == 0.0) {
        EXPECT_LT(fd.col(c).cwiseAbs().maxCoeff(), 1e-8) << names[k];
        continue;
      }
      worst = std::max(worst, (fd.col(c) - sens.states[k].col(c)).cwiseAbs().maxCoeff() / peak);
    }
  }
  return worst;
}

}  // namespace

TEST(SimulateLti, ZeroInputStaysAtRest) {
  const LtiModel m = build_longitudinal_lti(kDerivs, kTrim, 9.81);
  const Trajectory tr = simulate_lti(m, zero_signal(kGrid, {"delta_e"}));
  EXPECT_EQ(tr.states.rows(), 1001);
  EXPECT_EQ(tr.states.norm(), 0.0);
}

TEST(SimulateLti, FirstOrderStepResponse) {
  const Trajectory tr = simulate_lti(scalar_model(-1.0, 1.0, false), constant_input(1.0));
  for (int i = 0; i <= 100; ++i) EXPECT_NEAR(tr.states(i, 0), 1.0 - std::exp(-0.01 * i), 1e-14);
}

TEST(SimulateLti, InitialState) {
  const Trajectory tr = simulate_lti(scalar_model(-2.0, 1.0, false), constant_input(0.0), Eigen::VectorXd::Ones(1));
  EXPECT_NEAR(tr.states(100, 0), std::exp(-2.0), 1e-14);
  EXPECT_THROW(simulate_lti(scalar_model(-2.0, 1.0, false), constant_input(0.0), Eigen::VectorXd::Ones(2)),
               ValidationError);
}

TEST(SimulateLti, RejectsUnknownChannel) {
  const LtiModel m = build_longitudinal_lti(kDerivs, kTrim, 9.81);
  EXPECT_THROW(simulate_lti(m, zero_signal(kGrid, {"delta_r"})), ValidationError);
}

// Exact discretization against an adaptive Dormand-Prince integration with the
// input held over each sample.
TEST(SimulateLti, ZohMatchesAdaptiveIntegrator) {
  using State = std::vector<double>;
  for (const LtiModel& m : {build_longitudinal_lti(kDerivs, kTrim, 9.81), build_lateral_lti(kDerivs, kTrim, 9.81)}) {
    InputSignal s = zero_signal(kGrid, m.input_labels);
    s.samples.col(0) = gen_3211(deg2rad(5.0), 0.3, 1.0, 3.25, kGrid).samples.col(0);
    const Trajectory zoh = simulate_lti(m, s);

    const int n = m.states();
    State x(static_cast<size_t>(n), 0.0);
    auto stepper = boost::numeric::odeint::make_controlled<boost::numeric::odeint::runge_kutta_dopri5<State>>(1e-13, 1e-13);
    Eigen::MatrixXd ref(s.size() + 1, n);
    ref.row(0).setZero();
    for (int i = 0; i < s.size(); ++i) {
      const Eigen::VectorXd u = s.samples.row(i).transpose();
      auto rhs = [&](const State& xs, State& dx, double) {
        const Eigen::VectorXd xd = Eigen::Map<const Eigen::VectorXd>(xs.data(), n);
        Eigen::Map<Eigen::VectorXd>(dx.data(), n) = m.A * xd + m.B * u;
      };
      boost::numeric::odeint::integrate_adaptive(stepper, rhs, x, s.time(i), s.time(i + 1), 1e-3);
      ref.row(i + 1) = Eigen::Map<const Eigen::RowVectorXd>(x.data(), n);
    }
    for (int c = 0; c < n; ++c) {
      const double peak = ref.col(c).cwiseAbs().maxCoeff();
      EXPECT_LE((zoh.states.col(c) - ref.col(c)).cwiseAbs().maxCoeff(), 1e-6 * peak) << m.state_labels[c];
    }
  }
}

TEST(SimulateLti, RateAugmentedInterpolatesDeflection) {
  const LtiModel base = build_longitudinal_lti(kDerivs, kTrim, 9.81);
  const LtiModel aug = augment_actuator_rate(base);
  const InputSignal s = gen_3211(deg2rad(5.0), 0.3, 1.0, 3.25, kGrid);
  const Trajectory tr = simulate_lti(aug, s);
  for (int i = 0; i < s.size(); ++i) EXPECT_NEAR(tr.states(i, 4), s.samples(i, 0), 1e-12);
  const ModelInput in = model_input(aug, s);
  EXPECT_EQ(in.u(s.size() - 1, 0), 0.0);
  EXPECT_NEAR(in.u(100, 0), (s.samples(101, 0) - s.samples(100, 0)) / 0.01, 1e-12);
}

TEST(Sensitivity, ZeroInputGivesZero) {
  const LtiModel m = augment_actuator_rate(build_longitudinal_lti(kDerivs, kTrim, 9.81));
  const auto sens = sensitivity_trajectories(m, zero_signal(kGrid, {"delta_e"}), m.parameter_names());
  for (const auto& s : sens.states) EXPECT_EQ(s.norm(), 0.0);
}

TEST(Sensitivity, PureInputParameterClosedForm) {
  const auto sens = sensitivity_trajectories(scalar_model(0.0, 2.0, true), constant_input(1.0), {"b"});
  for (int i = 0; i <= 100; ++i) EXPECT_NEAR(sens.states[0](i, 0), 0.01 * i, 1e-13);
}

TEST(Sensitivity, RejectsUnknownParameter) {
  const LtiModel m = build_longitudinal_lti(kDerivs, kTrim, 9.81);
  EXPECT_THROW(sensitivity_trajectories(m, zero_signal(kGrid, {"delta_e"}), {"M_V"}), ValidationError);
}

TEST(Sensitivity, MatchesFiniteDifferencesLongitudinal) {
  const LtiModel m = augment_actuator_rate(build_longitudinal_lti(kDerivs, kTrim, 9.81));
  EXPECT_LE(max_fd_error(m, gen_3211(deg2rad(5.0), 0.17, 1.0, 3.25, kGrid)), 1e-4);
}

TEST(Sensitivity, MatchesFiniteDifferencesLateral) {
  const LtiModel m = augment_actuator_rate(build_lateral_lti(kDerivs, kTrim, 9.81));
  for (const char* channel : {"delta_a", "delta_r"})
    EXPECT_LE(max_fd_error(m, gen_3211(deg2rad(5.0), 0.3, 1.0, 3.25, kGrid, channel)), 1e-4) << channel;
}

TEST(Sensitivity, Superposition) {
  const LtiModel m = augment_actuator_rate(build_lateral_lti(kDerivs, kTrim, 9.81));
  const auto names = m.parameter_names();
  InputSignal a = gen_3211(0.05, 0.3, 1.0, 3.25, kGrid, "delta_a");
  InputSignal b = gen_doublet(0.03, 0.8, 4.0, 3.25, kGrid, "delta_a");
  InputSignal sum = a;
  sum.samples += b.samples;
  const auto sa = sensitivity_trajectories(m, a, names), sb = sensitivity_trajectories(m, b, names),
             ss = sensitivity_trajectories(m, sum, names);
  for (size_t k = 0; k < names.size(); ++k)
    EXPECT_LE((ss.states[k] - sa.states[k] - sb.states[k]).cwiseAbs().maxCoeff(),
              1e-12 * std::max(1.0, ss.states[k].cwiseAbs().maxCoeff()));
}
