#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "flightoed/aero.hpp"
#include "flightoed/airframe.hpp"
#include "flightoed/trim.hpp"

namespace flightoed {

// Dimensional stability and control derivatives as they appear in the
// longitudinal and lateral state matrices. Defaults are the a-priori values.
struct DimensionalDerivatives {
  double X_V = -0.147;
  double X_alpha = 7.92;
  double X_q = -0.163;
  double X_de = -0.232;
  double Z_V = -0.060;
  double Z_alpha_over_V = -4.4;
  double Z_q = 0.896;
  double Z_de_over_V = -0.283;
  double M_V = 0.0;
  double M_alpha = -6.18;
  double M_q = -1.767;
  double M_de = -10.668;

  double Y_beta_over_V = -0.167;
  double Y_p = 0.0;
  double Y_r = -0.976;
  double Y_da_over_V = -0.046;
  double Y_dr_over_V = 0.093;
  double Lbeta_prime = -8.201;
  double Lp_prime = -11.292;
  double Lr_prime = 3.853;
  double Lda_prime = -32.6;
  double Ldr_prime = 0.524;
  double Nbeta_prime = 3.214;
  double Np_prime = -0.75;
  double Nr_prime = -0.457;
  double Nda_prime = 0.716;
  double Ndr_prime = -2.37;

  // Excluded from estimation.
  std::vector<std::string> fixed{"M_V", "Y_p"};

  static const std::vector<std::string>& longitudinal_names();
  static const std::vector<std::string>& lateral_names();

  double get(std::string_view name) const;
  void set(std::string_view name, double value);
  bool is_fixed(std::string_view name) const;

  double Z_alpha(double trim_airspeed) const { return Z_alpha_over_V * trim_airspeed; }
};

// Exact Jacobian matching of the nonlinear model at a wings-level trim point.
// to_dimensionless also sets the zero-order terms so that `trim` is an equilibrium.
AeroCoefficients to_dimensionless(const DimensionalDerivatives& derivs, const AirframeProperties& props,
                                  const TrimCondition& trim);
DimensionalDerivatives to_dimensional(const AeroCoefficients& coeffs, const AirframeProperties& props,
                                      const TrimCondition& trim);

}  // namespace flightoed
