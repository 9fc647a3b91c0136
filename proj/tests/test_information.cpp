#include <algorithm>
#include <chrono>
#include <cmath>

#include <gtest/gtest.h>

#include "flightoed/information.hpp"
#include "flightoed/maneuvers.hpp"
#include "flightoed/oed.hpp"

using namespace flightoed;

namespace {

const DimensionalDerivatives kDerivs;
const TrimCondition kTrim;
const UniformGrid kGrid{0.01, 1000};

LtiModel lateral() { return augment_actuator_rate(build_lateral_lti(kDerivs, kTrim, 9.81)); }
LtiModel longitudinal() { return augment_actuator_rate(build_longitudinal_lti(kDerivs, kTrim, 9.81)); }

LtiModel scalar_model() {
  LtiModel m;
  m.A = Eigen::MatrixXd::Constant(1, 1, -1.0);
  m.B = Eigen::MatrixXd::Constant(1, 1, 2.0);
  m.state_labels = {"x"};
  m.input_labels = {"u"};
  m.parameter_map.push_back({"b", MatrixSlot::Input, 0, 0, 1.0});
  return m;
}

SensorModel scalar_sensor(double sigma) { return {{"x"}, Eigen::VectorXd::Constant(1, sigma), 100.0}; }

InputSignal unit_input() {
  InputSignal s = zero_signal(kGrid, {"u"});
  s.samples.setOnes();
  return s;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST(Fisher, ZeroSensitivities) {
  const LtiModel m = longitudinal();
  const auto sens = sensitivity_trajectories(m, zero_signal(kGrid, {"delta_e"}), m.parameter_names());
  EXPECT_EQ(fisher_matrix(sens, SensorModel::longitudinal()).norm(), 0.0);
}

TEST(Fisher, ConstantSensitivityClosedForm) {
  SensitivityResult sens;
  sens.parameters = {"b"};
  sens.nominal.sample_period = 0.01;
  sens.nominal.labels = {"x"};
  sens.nominal.states = Eigen::MatrixXd::Zero(1001, 1);
  sens.states = {Eigen::MatrixXd::Constant(1001, 1, 0.3)};
  const Eigen::MatrixXd F = fisher_matrix(sens, scalar_sensor(0.05));
  EXPECT_NEAR(F(0, 0), 1000 * 0.09 / 0.0025, 1e-8);
}

TEST(Fisher, NoiseScaling) {
  const LtiModel m = longitudinal();
  const InputSignal s = gen_3211(deg2rad(5.0), 0.17, 1.0, 3.25, kGrid);
  SensorModel sensor = SensorModel::longitudinal();
  const auto base = information_report(m, s, sensor, m.parameter_names());
  sensor.sigma *= 2.0;
  const auto noisy = information_report(m, s, sensor, m.parameter_names());
  EXPECT_TRUE(noisy.fisher.isApprox(base.fisher / 4.0, 1e-12));
  EXPECT_TRUE(noisy.crlb_diagonal.isApprox(base.crlb_diagonal * 2.0, 1e-12));
}

TEST(Fisher, SymmetricPositiveSemidefinite) {
  const LtiModel m = lateral();
  const auto r = information_report(m, gen_3211(deg2rad(5.0), 0.3, 1.0, 3.25, kGrid, "delta_a"),
                                    SensorModel::lateral(), m.parameter_names());
  EXPECT_LE((r.fisher - r.fisher.transpose()).norm(), 1e-12 * r.fisher.norm());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.fisher);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8 * es.eigenvalues().maxCoeff());
}

TEST(MeasurementRows, SensorRateDecimates) {
  EXPECT_EQ(measurement_rows(0.01, 1000, SensorModel::longitudinal()).size(), 1000u);
  SensorModel slow = SensorModel::longitudinal();
  slow.sample_rate = 50.0;
  const auto rows = measurement_rows(0.01, 1000, slow);
  EXPECT_EQ(rows.size(), 500u);
  EXPECT_EQ(rows.front(), 2);
  slow.sample_rate = 30.0;
  EXPECT_THROW(measurement_rows(0.01, 1000, slow), ValidationError);
}

TEST(AnalyzeFisher, IdentityMatrix) {
  const auto r = analyze_fisher(Eigen::MatrixXd::Identity(3, 3), {"a", "b", "c"}, Eigen::Vector3d(1, 2, 4));
  ASSERT_TRUE(r.covariance.has_value());
  EXPECT_TRUE(r.covariance->isApprox(Eigen::MatrixXd::Identity(3, 3)));
  EXPECT_DOUBLE_EQ(r.a_criterion, 1.0);
  EXPECT_TRUE(r.crlb_diagonal.isApprox(Eigen::Vector3d::Ones()));
  EXPECT_TRUE(r.crlb_marginal.isApprox(Eigen::Vector3d::Ones()));
  EXPECT_EQ(r.rank, 3);
  EXPECT_NEAR(*r.a_criterion_scaled, (1.0 + 0.25 + 1.0 / 16) / 3, 1e-15);
}

TEST(AnalyzeFisher, CorrelationSeparatesBounds) {
  Eigen::Matrix2d F;
  F << 4, 3, 3, 4;
  const auto r = analyze_fisher(F, {"a", "b"}, Eigen::Vector2d(1, 1));
  EXPECT_NEAR(r.crlb_diagonal(0), 0.5, 1e-15);
  EXPECT_NEAR(r.crlb_marginal(0), std::sqrt(4.0 / 7.0), 1e-15);
}

TEST(AnalyzeFisher, ZeroMatrixRejected) {
  EXPECT_THROW(analyze_fisher(Eigen::MatrixXd::Zero(2, 2), {"a", "b"}, Eigen::Vector2d(1, 1)), ValidationError);
}

TEST(Identifiability, AileronOnlyFlagsRudderDerivatives) {
  const auto start = std::chrono::steady_clock::now();
  const LtiModel m = lateral();
  const auto r = information_report(m, gen_3211(deg2rad(5.0), 0.3, 1.0, 3.25, kGrid, "delta_a"),
                                    SensorModel::lateral(), m.parameter_names());
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 5.0);
  EXPECT_EQ(r.parameters.size(), 14u);
  EXPECT_EQ(r.rank, 11);
  EXPECT_EQ(sorted(r.unidentifiable), sorted({"Y_dr_over_V", "Ldr_prime", "Ndr_prime"}));
  EXPECT_EQ(r.identifiable.size(), 11u);
  ASSERT_TRUE(r.covariance.has_value());
  for (size_t k = 0; k < r.parameters.size(); ++k)
    EXPECT_EQ(std::isinf(r.crlb_diagonal(static_cast<Eigen::Index>(k))),
              std::count(r.unidentifiable.begin(), r.unidentifiable.end(), r.parameters[k]) == 1);
}

TEST(Identifiability, RudderOnlyFlagsAileronDerivatives) {
  const LtiModel m = lateral();
  const auto r = information_report(m, gen_3211(deg2rad(5.0), 0.3, 1.0, 3.25, kGrid, "delta_r"),
                                    SensorModel::lateral(), m.parameter_names());
  EXPECT_EQ(r.rank, 11);
  EXPECT_EQ(sorted(r.unidentifiable), sorted({"Y_da_over_V", "Lda_prime", "Nda_prime"}));
}

TEST(Identifiability, ZeroInputRejected) {
  const LtiModel m = lateral();
  EXPECT_THROW(information_report(m, zero_signal(kGrid, {"delta_a"}), SensorModel::lateral(), m.parameter_names()),
               ValidationError);
}

// Loose agreement with the reference bound magnitude; the baseline pulse width behind it is unknown.
TEST(InformationReport, LongitudinalBaselineOrderOfMagnitude) {
  const LtiModel m = longitudinal();
  const auto r = information_report(m, gen_3211(deg2rad(5.0), 0.17, 1.0, 3.25, kGrid), SensorModel::longitudinal(),
                                    m.parameter_names());
  const auto& names = r.parameters;
  const auto k = std::find(names.begin(), names.end(), "M_de") - names.begin();
  EXPECT_GT(r.crlb_diagonal(k), 0.0024 / 10);
  EXPECT_LT(r.crlb_diagonal(k), 0.0024 * 10);
  EXPECT_TRUE(r.covariance.has_value());
  EXPECT_TRUE(r.unidentifiable.empty());
}

TEST(InformationProperties, TimeTranslationInvariance) {
  const LtiModel m = longitudinal();
  const auto a = information_report(m, gen_3211(deg2rad(5.0), 0.17, 1.0, 3.25, {0.01, 2000}), SensorModel::longitudinal(),
                                    m.parameter_names());
  const auto b = information_report(m, gen_3211(deg2rad(5.0), 0.17, 3.0, 3.25, {0.01, 2200}), SensorModel::longitudinal(),
                                    m.parameter_names());
  // Both windows hold the full, settled response; only the zero-input lead-in differs.
  EXPECT_TRUE(a.fisher.isApprox(b.fisher, 1e-6));
}

TEST(InformationProperties, MoreMeasurementsNeverDecreaseInformation) {
  const LtiModel m = longitudinal();
  const auto shorter = information_report(m, gen_3211(deg2rad(5.0), 0.17, 1.0, 3.25, {0.01, 1000}),
                                          SensorModel::longitudinal(), m.parameter_names());
  const auto longer = information_report(m, gen_3211(deg2rad(5.0), 0.17, 1.0, 3.25, {0.01, 1500}),
                                         SensorModel::longitudinal(), m.parameter_names());
  for (Eigen::Index i = 0; i < shorter.fisher.rows(); ++i) EXPECT_GE(longer.fisher(i, i), shorter.fisher(i, i));
}

TEST(CompareDesigns, IdenticalDesignsGiveZero) {
  const LtiModel m = longitudinal();
  const InputSignal s = gen_3211(deg2rad(5.0), 0.17, 1.0, 3.25, kGrid);
  for (const auto& row : compare_designs(m, s, s, SensorModel::longitudinal(), m.parameter_names()))
    EXPECT_EQ(*row.delta_pct, 0.0) << row.parameter;
}

TEST(CompareDesigns, DoubledAmplitudeHalvesBounds) {
  const LtiModel m = longitudinal();
  const InputSignal s = gen_3211(deg2rad(2.0), 0.17, 1.0, 3.25, kGrid);
  InputSignal twice = s;
  twice.samples *= 2.0;
  const auto rows = compare_designs(m, s, twice, SensorModel::longitudinal(), m.parameter_names());
  for (const auto& row : rows) EXPECT_NEAR(*row.delta_pct, -50.0, 1e-9) << row.parameter;
  EXPECT_NEAR(mean_delta_pct(rows), -50.0, 1e-9);
}

TEST(CompareDesigns, UnidentifiableReportedPerParameter) {
  const LtiModel m = lateral();
  const auto rows = compare_designs(m, gen_3211(deg2rad(5.0), 0.3, 1.0, 3.25, kGrid, "delta_a"),
                                    gen_3211(deg2rad(5.0), 0.3, 1.0, 3.25, kGrid, "delta_r"), SensorModel::lateral(),
                                    m.parameter_names());
  int missing = 0;
  for (const auto& row : rows)
    if (!row.delta_pct) {
      ++missing;
      EXPECT_FALSE(row.note.empty());
    }
  EXPECT_EQ(missing, 6);
}

TEST(MonteCarlo, ScalarRegressionClosedForm) {
  const LtiModel m = scalar_model();
  const InputSignal u = unit_input();
  const SensorModel sensor = scalar_sensor(0.05);
  MonteCarloOptions opt;
  opt.seed = 11;
  const auto r = monte_carlo_crlb_check(m, u, sensor, {"b"}, opt);
  const auto sens = sensitivity_trajectories(m, u, {"b"});
  const double sum_sq = sens.states[0].bottomRows(1000).squaredNorm();
  const double expected = 0.05 / std::sqrt(sum_sq);
  EXPECT_NEAR(r.predicted_std(0), expected, 1e-12);
  EXPECT_NEAR(r.empirical_std(0) / expected, 1.0, 0.15);
  EXPECT_EQ(r.diverged, 0);
}

TEST(MonteCarlo, VanishingNoise) {
  MonteCarloOptions opt;
  opt.runs = 20;
  const auto r = monte_carlo_crlb_check(scalar_model(), unit_input(), scalar_sensor(1e-9), {"b"}, opt);
  EXPECT_LT(r.empirical_std(0), 1e-8);
}

TEST(MonteCarlo, DeterministicPerSeed) {
  MonteCarloOptions opt;
  opt.runs = 50;
  opt.seed = 5;
  const LtiModel m = longitudinal();
  const InputSignal s = gen_3211(deg2rad(5.0), 0.17, 1.0, 3.25, kGrid);
  opt.threads = 1;
  const auto a = monte_carlo_crlb_check(m, s, SensorModel::longitudinal(), m.parameter_names(), opt);
  opt.threads = 3;
  const auto b = monte_carlo_crlb_check(m, s, SensorModel::longitudinal(), m.parameter_names(), opt);
  EXPECT_EQ(a.empirical_std, b.empirical_std);
  EXPECT_EQ(a.mean, b.mean);
}

TEST(MonteCarlo, RejectsRankDeficientDesign) {
  const LtiModel m = lateral();
  EXPECT_THROW(monte_carlo_crlb_check(m, gen_3211(deg2rad(5.0), 0.3, 1.0, 3.25, kGrid, "delta_a"),
                                      SensorModel::lateral(), m.parameter_names()),
               ValidationError);
}
