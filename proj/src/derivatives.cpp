#include "flightoed/derivatives.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "flightoed/errors.hpp"

namespace flightoed {

namespace {

using Member = double DimensionalDerivatives::*;

const std::vector<std::pair<std::string, Member>>& member_table() {
  static const std::vector<std::pair<std::string, Member>> table = {
      {"X_V", &DimensionalDerivatives::X_V},
      {"X_alpha", &DimensionalDerivatives::X_alpha},
      {"X_q", &DimensionalDerivatives::X_q},
      {"X_de", &DimensionalDerivatives::X_de},
      {"Z_V", &DimensionalDerivatives::Z_V},
      {"Z_alpha_over_V", &DimensionalDerivatives::Z_alpha_over_V},
      {"Z_q", &DimensionalDerivatives::Z_q},
      {"Z_de_over_V", &DimensionalDerivatives::Z_de_over_V},
      {"M_V", &DimensionalDerivatives::M_V},
      {"M_alpha", &DimensionalDerivatives::M_alpha},
      {"M_q", &DimensionalDerivatives::M_q},
      {"M_de", &DimensionalDerivatives::M_de},
      {"Y_beta_over_V", &DimensionalDerivatives::Y_beta_over_V},
      {"Y_p", &DimensionalDerivatives::Y_p},
      {"Y_r", &DimensionalDerivatives::Y_r},
      {"Y_da_over_V", &DimensionalDerivatives::Y_da_over_V},
      {"Y_dr_over_V", &DimensionalDerivatives::Y_dr_over_V},
      {"Lbeta_prime", &DimensionalDerivatives::Lbeta_prime},
      {"Lp_prime", &DimensionalDerivatives::Lp_prime},
      {"Lr_prime", &DimensionalDerivatives::Lr_prime},
      {"Lda_prime", &DimensionalDerivatives::Lda_prime},
      {"Ldr_prime", &DimensionalDerivatives::Ldr_prime},
      {"Nbeta_prime", &DimensionalDerivatives::Nbeta_prime},
      {"Np_prime", &DimensionalDerivatives::Np_prime},
      {"Nr_prime", &DimensionalDerivatives::Nr_prime},
      {"Nda_prime", &DimensionalDerivatives::Nda_prime},
      {"Ndr_prime", &DimensionalDerivatives::Ndr_prime},
  };
  return table;
}

Member lookup(std::string_view name) {
  for (const auto& [n, m] : member_table())
    if (n == name) return m;
  throw ValidationError("unknown derivative '" + std::string(name) + "'");
}

// Quantities shared by both conversion directions.
struct TrimTerms {
  double V, ca, sa, k, kM, kL, cbar_2v, b_2v, g_v, g_alpha, g;
  double Jx, Jz, Jxz, det;
};

TrimTerms trim_terms(const AirframeProperties& props, const TrimCondition& trim) {
  if (!(trim.airspeed > 0.0)) throw ValidationError("derivative conversion: airspeed must be positive");
  props.validate();
  TrimTerms t;
  t.V = trim.airspeed;
  t.ca = std::cos(trim.angle_of_attack);
  t.sa = std::sin(trim.angle_of_attack);
  const double qbar_s = props.dynamic_pressure(t.V) * props.wing_area;
  t.k = qbar_s / props.mass;
  t.kM = qbar_s * props.mean_chord / props.inertia_y;
  t.kL = qbar_s * props.wing_span;
  t.cbar_2v = props.mean_chord / (2.0 * t.V);
  t.b_2v = props.wing_span / (2.0 * t.V);
  t.g = props.gravity;
  t.g_v = props.gravity * std::sin(trim.angle_of_attack - trim.pitch);
  t.g_alpha = props.gravity * std::cos(trim.angle_of_attack - trim.pitch);
  t.Jx = props.inertia_x;
  t.Jz = props.inertia_z;
  t.Jxz = props.inertia_xz;
  t.det = t.Jx * t.Jz - t.Jxz * t.Jxz;
  return t;
}

}  // namespace

const std::vector<std::string>& DimensionalDerivatives::longitudinal_names() {
  static const std::vector<std::string> names = {"X_V", "X_alpha", "X_q", "X_de", "Z_V", "Z_alpha_over_V",
                                                 "Z_q", "Z_de_over_V", "M_V", "M_alpha", "M_q", "M_de"};
  return names;
}

const std::vector<std::string>& DimensionalDerivatives::lateral_names() {
  static const std::vector<std::string> names = {
      "Y_beta_over_V", "Y_p", "Y_r", "Y_da_over_V", "Y_dr_over_V", "Lbeta_prime", "Lp_prime", "Lr_prime",
      "Lda_prime", "Ldr_prime", "Nbeta_prime", "Np_prime", "Nr_prime", "Nda_prime", "Ndr_prime"};
  return names;
}

double DimensionalDerivatives::get(std::string_view name) const { return this->*lookup(name); }

void DimensionalDerivatives::set(std::string_view name, double value) { this->*lookup(name) = value; }

bool DimensionalDerivatives::is_fixed(std::string_view name) const {
  return std::find(fixed.begin(), fixed.end(), name) != fixed.end();
}

DimensionalDerivatives to_dimensional(const AeroCoefficients& c, const AirframeProperties& props,
                                      const TrimCondition& trim) {
  const TrimTerms t = trim_terms(props, trim);
  if (!(c.reference_airspeed > 0.0)) throw ValidationError("derivative conversion: reference airspeed must be positive");
  const AeroLoads<double> loads = aero_forces_moments(trim.state(), trim.controls(), c, props);
  const double fx = loads.force(0) / props.mass;
  const double fz = loads.force(2) / props.mass;
  const double m_trim = loads.moment(1) / props.inertia_y;
  const double vref = c.reference_airspeed;
  const double V = t.V, ca = t.ca, sa = t.sa, k = t.k;

  DimensionalDerivatives d;
  d.X_V = 2.0 / V * (fx * ca + fz * sa) + k * (c.x.speed * ca + c.z.speed * sa) / vref;
  d.X_alpha = k * (c.x.alpha * ca + c.z.alpha * sa) + (-fx * sa + fz * ca) + t.g_alpha;
  d.X_q = k * t.cbar_2v * (c.x.q * ca + c.z.q * sa);
  d.X_de = k * (c.x.elevator * ca + c.z.elevator * sa);
  d.Z_V = (fz * ca - fx * sa) / (V * V) - t.g_alpha / (V * V) + k / V * (c.z.speed * ca - c.x.speed * sa) / vref;
  d.Z_alpha_over_V = k / V * (c.z.alpha * ca - c.x.alpha * sa) - (fz * sa + fx * ca) / V - t.g_v / V;
  d.Z_q = 1.0 + k / V * t.cbar_2v * (c.z.q * ca - c.x.q * sa);
  d.Z_de_over_V = k / V * (c.z.elevator * ca - c.x.elevator * sa);
  d.M_V = 2.0 / V * m_trim + t.kM * c.m.speed / vref;
  d.M_alpha = t.kM * c.m.alpha;
  d.M_q = t.kM * t.cbar_2v * c.m.q;
  d.M_de = t.kM * c.m.elevator;

  d.Y_beta_over_V = k / V * c.y.beta - (fx * ca + fz * sa) / V - t.g_v / V;
  d.Y_p = k / V * t.b_2v * c.y.p + sa;
  d.Y_r = k / V * t.b_2v * c.y.r - ca;
  d.Y_da_over_V = k / V * c.y.aileron;
  d.Y_dr_over_V = k / V * c.y.rudder;

  // [L'; N'] = Gamma^-1 [L; N] with Gamma = [Jx -Jxz; -Jxz Jz]
  auto primed = [&](double cl, double cn, double factor, double& lp, double& np) {
    const double L = t.kL * cl * factor, N = t.kL * cn * factor;
    lp = (t.Jz * L + t.Jxz * N) / t.det;
    np = (t.Jxz * L + t.Jx * N) / t.det;
  };
  primed(c.l.beta, c.n.beta, 1.0, d.Lbeta_prime, d.Nbeta_prime);
  primed(c.l.p, c.n.p, t.b_2v, d.Lp_prime, d.Np_prime);
  primed(c.l.r, c.n.r, t.b_2v, d.Lr_prime, d.Nr_prime);
  primed(c.l.aileron, c.n.aileron, 1.0, d.Lda_prime, d.Nda_prime);
  primed(c.l.rudder, c.n.rudder, 1.0, d.Ldr_prime, d.Ndr_prime);
  return d;
}

AeroCoefficients to_dimensionless(const DimensionalDerivatives& d, const AirframeProperties& props,
                                  const TrimCondition& trim) {
  const TrimTerms t = trim_terms(props, trim);
  const double V = t.V, ca = t.ca, sa = t.sa, k = t.k;
  // Specific aero force that balances gravity at trim.
  const double fx = -t.g_v * ca + t.g_alpha * sa;
  const double fz = -t.g_v * sa - t.g_alpha * ca;

  AeroCoefficients c;
  c.reference_airspeed = V;
  // a = C_X cos(alpha) + C_Z sin(alpha), b = C_Z cos(alpha) - C_X sin(alpha)
  auto rotate = [&](double a, double b, double& cx, double& cz) {
    cx = a * ca - b * sa;
    cz = a * sa + b * ca;
  };
  rotate((d.X_alpha - (-fx * sa + fz * ca) - t.g_alpha) / k,
         (d.Z_alpha_over_V + (fz * sa + fx * ca) / V + t.g_v / V) * V / k, c.x.alpha, c.z.alpha);
  rotate(d.X_q / (k * t.cbar_2v), (d.Z_q - 1.0) * V / (k * t.cbar_2v), c.x.q, c.z.q);
  rotate(d.X_de / k, d.Z_de_over_V * V / k, c.x.elevator, c.z.elevator);
  double dcx = 0.0, dcz = 0.0;
  rotate((d.X_V - 2.0 / V * (fx * ca + fz * sa)) / k,
         (d.Z_V - (fz * ca - fx * sa) / (V * V) + t.g_alpha / (V * V)) * V / k, dcx, dcz);
  c.x.speed = dcx * V;
  c.z.speed = dcz * V;
  c.x.zero = fx / k - c.x.alpha * trim.angle_of_attack - c.x.elevator * trim.elevator;
  c.z.zero = fz / k - c.z.alpha * trim.angle_of_attack - c.z.elevator * trim.elevator;

  c.m.alpha = d.M_alpha / t.kM;
  c.m.q = d.M_q / (t.kM * t.cbar_2v);
  c.m.elevator = d.M_de / t.kM;
  c.m.speed = d.M_V / t.kM * V;
  c.m.zero = -(c.m.alpha * trim.angle_of_attack + c.m.elevator * trim.elevator);

  c.y.beta = (d.Y_beta_over_V + (fx * ca + fz * sa) / V + t.g_v / V) * V / k;
  c.y.p = (d.Y_p - sa) / (k / V * t.b_2v);
  c.y.r = (d.Y_r + ca) / (k / V * t.b_2v);
  c.y.aileron = d.Y_da_over_V * V / k;
  c.y.rudder = d.Y_dr_over_V * V / k;

  // [L; N] = Gamma [L'; N']
  auto unprimed = [&](double lp, double np, double factor, double& cl, double& cn) {
    cl = (t.Jx * lp - t.Jxz * np) / (t.kL * factor);
    cn = (-t.Jxz * lp + t.Jz * np) / (t.kL * factor);
  };
  unprimed(d.Lbeta_prime, d.Nbeta_prime, 1.0, c.l.beta, c.n.beta);
  unprimed(d.Lp_prime, d.Np_prime, t.b_2v, c.l.p, c.n.p);
  unprimed(d.Lr_prime, d.Nr_prime, t.b_2v, c.l.r, c.n.r);
  unprimed(d.Lda_prime, d.Nda_prime, 1.0, c.l.aileron, c.n.aileron);
  unprimed(d.Ldr_prime, d.Ndr_prime, 1.0, c.l.rudder, c.n.rudder);
  return c;
}

}  // namespace flightoed
