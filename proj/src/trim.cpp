#include "flightoed/trim.hpp"

#include <cmath>
#include <string>

namespace flightoed {

RigidBodyState TrimCondition::state() const {
  RigidBodyState s;
  s.airspeed = airspeed;
  s.angle_of_attack = angle_of_attack;
  s.pitch = pitch;
  return s;
}

ControlDeflections TrimCondition::controls() const {
  ControlDeflections u;
  u.elevator = elevator;
  return u;
}

void TrimCondition::validate() const {
  if (!(airspeed > 0.0)) throw ValidationError("trim: airspeed must be positive");
  if (!(std::abs(pitch) < deg2rad(89.0))) throw ValidationError("trim: |pitch| must be below 90 deg");
  if (!std::isfinite(angle_of_attack) || !std::isfinite(elevator) || !std::isfinite(flap))
    throw ValidationError("trim: non-finite angle");
}

namespace {

Eigen::Vector3d residual(const Eigen::Vector3d& z, double airspeed, const AeroCoefficients& c,
                         const AirframeProperties& props) {
  RigidBodyState s;
  s.airspeed = airspeed;
  s.angle_of_attack = z(0);
  s.pitch = z(1);
  ControlDeflections u;
  u.elevator = z(2);
  const RigidBodyState d = nonlinear_rhs(s, u, c, props);
  return {d.airspeed, d.angle_of_attack, d.pitch_rate};
}

double max_derivative(const Eigen::Vector3d& z, double airspeed, const AeroCoefficients& c,
                      const AirframeProperties& props) {
  RigidBodyState s;
  s.airspeed = airspeed;
  s.angle_of_attack = z(0);
  s.pitch = z(1);
  ControlDeflections u;
  u.elevator = z(2);
  return nonlinear_rhs(s, u, c, props).to_vector().cwiseAbs().maxCoeff();
}

}  // namespace

TrimResult trim_solve(double airspeed, const AeroCoefficients& coeffs, const AirframeProperties& props,
                      const TrimOptions& options) {
  if (!(airspeed > 0.0)) throw ValidationError("trim_solve: airspeed must be positive");
  props.validate();

  Eigen::Vector3d z = Eigen::Vector3d::Zero();
  Eigen::Vector3d r = residual(z, airspeed, coeffs, props);
  const double h = 1e-7;
  int it = 0;
  for (; it < options.max_iterations && r.cwiseAbs().maxCoeff() >= options.tolerance; ++it) {
    Eigen::Matrix3d J;
    for (int j = 0; j < 3; ++j) {
      Eigen::Vector3d zp = z, zm = z;
      zp(j) += h;
      zm(j) -= h;
      J.col(j) = (residual(zp, airspeed, coeffs, props) - residual(zm, airspeed, coeffs, props)) / (2.0 * h);
    }
    Eigen::FullPivLU<Eigen::Matrix3d> lu(J);
    if (!lu.isInvertible()) throw ConvergenceError("trim_solve: singular Jacobian");
    const Eigen::Vector3d step = lu.solve(-r);

    double lambda = 1.0;
    Eigen::Vector3d trial = z + step;
    Eigen::Vector3d r_trial = residual(trial, airspeed, coeffs, props);
    for (int k = 0; k < 30 && !(r_trial.norm() < r.norm()); ++k) {
      lambda *= 0.5;
      trial = z + lambda * step;
      r_trial = residual(trial, airspeed, coeffs, props);
    }
    z = trial;
    r = r_trial;
    if (std::abs(z(1)) > options.pitch_limit) throw TrimOutOfRangeError("trim_solve: pitch left admissible range");
  }
  if (!(r.cwiseAbs().maxCoeff() < options.tolerance))
    throw ConvergenceError("trim_solve: no convergence after " + std::to_string(it) + " iterations");
  if (z(0) < options.alpha_min || z(0) > options.alpha_max || std::abs(z(2)) > options.elevator_limit)
    throw TrimOutOfRangeError("trim_solve: equilibrium outside admissible alpha/elevator range");

  TrimResult out;
  out.condition.airspeed = airspeed;
  out.condition.angle_of_attack = z(0);
  out.condition.pitch = z(1);
  out.condition.elevator = z(2);
  out.iterations = it;
  out.residual = max_derivative(z, airspeed, coeffs, props);
  return out;
}

}  // namespace flightoed
