#include <chrono>
#include <cmath>

#include <gtest/gtest.h>

#include "flightoed/derivatives.hpp"
#include "flightoed/trim.hpp"

using namespace flightoed;

namespace {

// Lift balances weight at zero incidence; no drag, no pitching moment.
AeroCoefficients symmetric_airframe(const AirframeProperties& p, double V) {
  AeroCoefficients c;
  c.z.zero = -p.mass * p.gravity / (p.dynamic_pressure(V) * p.wing_area);
  c.z.alpha = -4.5;
  c.x.alpha = 0.2;
  c.m.alpha = -0.5;
  c.m.q = -8.0;
  c.m.elevator = -0.8;
  c.reference_airspeed = V;
  return c;
}

}  // namespace

TEST(Trim, RecoversReferenceEquilibrium) {
  const AirframeProperties p;
  const auto c = to_dimensionless(DimensionalDerivatives{}, p, TrimCondition{});
  const auto start = std::chrono::steady_clock::now();
  const TrimResult r = trim_solve(20.0, c, p);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 1.0);
  EXPECT_NEAR(rad2deg(r.condition.angle_of_attack), -0.4, 0.3);
  EXPECT_NEAR(rad2deg(r.condition.pitch), -4.5, 0.3);
  EXPECT_NEAR(rad2deg(r.condition.elevator), -1.5, 0.3);
  EXPECT_LT(r.residual, 1e-9);
  EXPECT_LE(r.iterations, 50);
}

TEST(Trim, SolutionIsEquilibrium) {
  const AirframeProperties p;
  const auto c = to_dimensionless(DimensionalDerivatives{}, p, TrimCondition{});
  const TrimResult r = trim_solve(20.0, c, p);
  const auto d = nonlinear_rhs(r.condition.state(), r.condition.controls(), c, p).to_vector();
  EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Trim, SymmetricAirframeTrimsAtZero) {
  const AirframeProperties p;
  const TrimResult r = trim_solve(20.0, symmetric_airframe(p, 20.0), p);
  EXPECT_NEAR(r.condition.angle_of_attack, 0.0, 1e-10);
  EXPECT_NEAR(r.condition.elevator, 0.0, 1e-10);
  EXPECT_NEAR(r.condition.pitch, 0.0, 1e-10);
}

TEST(Trim, PitchMomentOffsetShiftsElevator) {
  const AirframeProperties p;
  AeroCoefficients c = symmetric_airframe(p, 20.0);
  const double dcm0 = 1e-4;
  c.m.zero = dcm0;
  const TrimResult r = trim_solve(20.0, c, p);
  EXPECT_NEAR(r.condition.elevator, -dcm0 / c.m.elevator, 1e-3 * std::abs(dcm0 / c.m.elevator));
}

TEST(Trim, WingsLevelStructure) {
  const AirframeProperties p;
  const auto c = to_dimensionless(DimensionalDerivatives{}, p, TrimCondition{});
  const TrimCondition t = trim_solve(20.0, c, p).condition;
  const RigidBodyState s = t.state();
  EXPECT_EQ(s.sideslip, 0.0);
  EXPECT_EQ(s.roll, 0.0);
  EXPECT_EQ(s.roll_rate, 0.0);
  EXPECT_EQ(s.pitch_rate, 0.0);
  EXPECT_EQ(s.yaw_rate, 0.0);
  EXPECT_NEAR(t.flight_path_angle(), t.pitch - t.angle_of_attack, 1e-15);
}

TEST(Trim, RejectsUnreachableEquilibrium) {
  const AirframeProperties p;
  AeroCoefficients c = symmetric_airframe(p, 20.0);
  c.m.zero = 0.5;  // needs far more than 30 deg of elevator
  EXPECT_THROW(trim_solve(20.0, c, p), ConvergenceError);
}

TEST(Trim, RejectsNonPositiveAirspeed) {
  const AirframeProperties p;
  EXPECT_THROW(trim_solve(0.0, symmetric_airframe(p, 20.0), p), ValidationError);
}
