#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "flightoed/aero.hpp"
#include "flightoed/airframe.hpp"
#include "flightoed/errors.hpp"

namespace flightoed {

template <typename Scalar>
struct RigidBodyStateT {
  Scalar airspeed{20};
  Scalar sideslip{0};
  Scalar angle_of_attack{0};
  Scalar roll{0};
  Scalar pitch{0};
  Scalar yaw{0};
  Scalar roll_rate{0};
  Scalar pitch_rate{0};
  Scalar yaw_rate{0};

  static constexpr int size = 9;
  using Vector = Eigen::Matrix<Scalar, 9, 1>;

  Vector to_vector() const {
    Vector v;
    v << airspeed, sideslip, angle_of_attack, roll, pitch, yaw, roll_rate, pitch_rate, yaw_rate;
    return v;
  }

  static RigidBodyStateT from_vector(const Vector& v) {
    return {v(0), v(1), v(2), v(3), v(4), v(5), v(6), v(7), v(8)};
  }
};

using RigidBodyState = RigidBodyStateT<double>;

template <typename Scalar>
struct ControlDeflectionsT {
  Scalar aileron{0};
  Scalar elevator{0};
  Scalar rudder{0};
};

using ControlDeflections = ControlDeflectionsT<double>;

template <typename Scalar>
struct WindAxisGravity {
  Scalar airspeed;
  Scalar sideslip;
  Scalar angle_of_attack;
};

template <typename Scalar>
struct AeroLoads {
  Eigen::Matrix<Scalar, 3, 1> force;   // X, Y, Z (N)
  Eigen::Matrix<Scalar, 3, 1> moment;  // L, M, N (N m)
};

// Body-axis gravity projected on the wind-axis directions that drive
// V_T, beta and alpha.
template <typename Scalar>
WindAxisGravity<Scalar> gravity_components(const RigidBodyStateT<Scalar>& s, Scalar g) {
  using std::cos;
  using std::sin;
  const Scalar sa = sin(s.angle_of_attack), ca = cos(s.angle_of_attack);
  const Scalar sb = sin(s.sideslip), cb = cos(s.sideslip);
  const Scalar sp = sin(s.roll), cp = cos(s.roll);
  const Scalar st = sin(s.pitch), ct = cos(s.pitch);
  return {
      g * (sb * sp * ct - ca * cb * st + sa * cb * cp * ct),
      g * (ca * sb * st + cb * sp * ct - sa * sb * cp * ct),
      g * (sa * st + ca * cp * ct),
  };
}

template <typename Scalar>
AeroLoads<Scalar> aero_forces_moments(const RigidBodyStateT<Scalar>& s,
                                      const ControlDeflectionsT<Scalar>& u,
                                      const AeroCoefficients& c,
                                      const AirframeProperties& props) {
  if (!(s.airspeed > Scalar(0))) throw ValidationError("aero_forces_moments: airspeed must be positive");
  const Scalar V = s.airspeed;
  const Scalar qbar_s = Scalar(0.5 * props.air_density * props.wing_area) * V * V;
  const Scalar p_hat = Scalar(props.wing_span) * s.roll_rate / (Scalar(2) * V);
  const Scalar q_hat = Scalar(props.mean_chord) * s.pitch_rate / (Scalar(2) * V);
  const Scalar r_hat = Scalar(props.wing_span) * s.yaw_rate / (Scalar(2) * V);
  const Scalar dv = c.reference_airspeed > 0 ? (V - Scalar(c.reference_airspeed)) / Scalar(c.reference_airspeed)
                                             : Scalar(0);

  auto symmetric = [&](const SymmetricTerms& t) {
    return Scalar(t.zero) + Scalar(t.alpha) * s.angle_of_attack + Scalar(t.q) * q_hat +
           Scalar(t.elevator) * u.elevator + Scalar(t.speed) * dv;
  };
  auto asymmetric = [&](const AsymmetricTerms& t) {
    return Scalar(t.beta) * s.sideslip + Scalar(t.p) * p_hat + Scalar(t.r) * r_hat +
           Scalar(t.aileron) * u.aileron + Scalar(t.rudder) * u.rudder;
  };

  AeroLoads<Scalar> out;
  out.force << qbar_s * symmetric(c.x), qbar_s * asymmetric(c.y), qbar_s * symmetric(c.z);
  out.moment << qbar_s * Scalar(props.wing_span) * asymmetric(c.l),
      qbar_s * Scalar(props.mean_chord) * symmetric(c.m),
      qbar_s * Scalar(props.wing_span) * asymmetric(c.n);
  return out;
}

// Time derivative of the nine-state rigid-body model (aero forces only, no thrust).
template <typename Scalar>
RigidBodyStateT<Scalar> nonlinear_rhs(const RigidBodyStateT<Scalar>& s,
                                      const ControlDeflectionsT<Scalar>& u,
                                      const AeroCoefficients& c,
                                      const AirframeProperties& props) {
  using std::cos;
  using std::sin;
  using std::abs;
  const Scalar cb = cos(s.sideslip), ct = cos(s.pitch);
  if (abs(cb) < Scalar(1e-6)) throw SingularStateError("nonlinear_rhs: sideslip at +-90 deg");
  if (abs(ct) < Scalar(1e-6)) throw SingularStateError("nonlinear_rhs: pitch at +-90 deg");

  const AeroLoads<Scalar> f = aero_forces_moments(s, u, c, props);
  const WindAxisGravity<Scalar> g = gravity_components(s, Scalar(props.gravity));
  const Scalar m = props.mass;
  const Scalar V = s.airspeed;
  const Scalar sa = sin(s.angle_of_attack), ca = cos(s.angle_of_attack);
  const Scalar sb = sin(s.sideslip);
  const Scalar sp = sin(s.roll), cp = cos(s.roll);
  const Scalar st = sin(s.pitch);
  const Scalar p = s.roll_rate, q = s.pitch_rate, r = s.yaw_rate;
  const Scalar X = f.force(0), Y = f.force(1), Z = f.force(2);
  const Scalar Jx = props.inertia_x, Jy = props.inertia_y, Jz = props.inertia_z, Jxz = props.inertia_xz;

  RigidBodyStateT<Scalar> d;
  d.airspeed = (X * ca * cb + Y * sb + Z * sa * cb) / m + g.airspeed;
  d.sideslip = (-X * ca * sb + Y * cb - Z * sa * sb) / (m * V) + g.sideslip / V + p * sa - r * ca;
  d.angle_of_attack = (-X * sa + Z * ca) / (m * V * cb) + g.angle_of_attack / (V * cb) +
                      (q * cb - (p * ca + r * sa) * sb) / cb;
  d.roll = p + st / ct * (q * sp + r * cp);
  d.pitch = q * cp - r * sp;
  d.yaw = (q * sp + r * cp) / ct;

  // [Jx -Jxz; -Jxz Jz] [pdot; rdot] = rhs
  const Scalar rhs_l = -q * r * (Jz - Jy) + q * p * Jxz + f.moment(0);
  const Scalar rhs_n = -p * q * (Jy - Jx) - q * r * Jxz + f.moment(2);
  const Scalar det = Jx * Jz - Jxz * Jxz;
  d.roll_rate = (Jz * rhs_l + Jxz * rhs_n) / det;
  d.yaw_rate = (Jxz * rhs_l + Jx * rhs_n) / det;
  d.pitch_rate = (-p * r * (Jx - Jz) - (p * p - r * r) * Jxz + f.moment(1)) / Jy;
  return d;
}

}  // namespace flightoed
