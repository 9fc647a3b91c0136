#pragma once

#include "flightoed/aero.hpp"
#include "flightoed/airframe.hpp"
#include "flightoed/dynamics.hpp"
#include "flightoed/units.hpp"

namespace flightoed {

// Steady wings-level equilibrium: beta = phi = p = q = r = 0.
struct TrimCondition {
  double airspeed = 20.0;
  double angle_of_attack = deg2rad(-0.4);
  double pitch = deg2rad(-4.5);
  double elevator = deg2rad(-1.5);
  double flap = 0.0;

  double flight_path_angle() const { return pitch - angle_of_attack; }
  RigidBodyState state() const;
  ControlDeflections controls() const;
  void validate() const;
};

struct TrimOptions {
  int max_iterations = 50;
  double tolerance = 1e-10;
  double alpha_min = deg2rad(-15.0);
  double alpha_max = deg2rad(25.0);
  double elevator_limit = deg2rad(30.0);
  double pitch_limit = deg2rad(80.0);
};

struct TrimResult {
  TrimCondition condition;
  int iterations = 0;
  double residual = 0.0;  // max |derivative| over the nine states
};

// Damped Newton on (Vdot, alphadot, qdot) over (alpha, theta, elevator) at fixed
// airspeed, started from zero. Without thrust the flight-path angle comes out of
// the solve. Throws ConvergenceError / TrimOutOfRangeError.
TrimResult trim_solve(double airspeed, const AeroCoefficients& coeffs, const AirframeProperties& props,
                      const TrimOptions& options = {});

}  // namespace flightoed
