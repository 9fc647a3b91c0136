#pragma once

namespace flightoed {

// Terms of the symmetric coefficients C_X, C_Z, C_m:
// C = zero + alpha*a + q*q_hat + elevator*de + speed*(V - V_ref)/V_ref
struct SymmetricTerms {
  double alpha = 0.0;
  double q = 0.0;
  double elevator = 0.0;
  double zero = 0.0;
  double speed = 0.0;
};

// Terms of the asymmetric coefficients C_Y, C_l, C_n:
// C = beta*b + p*p_hat + r*r_hat + aileron*da + rudder*dr
struct AsymmetricTerms {
  double beta = 0.0;
  double p = 0.0;
  double r = 0.0;
  double aileron = 0.0;
  double rudder = 0.0;
};

// Dimensionless aerodynamic derivatives. Rates are normalized as
// p_hat = b p / 2V, q_hat = c q / 2V, r_hat = b r / 2V.
struct AeroCoefficients {
  SymmetricTerms x;
  SymmetricTerms z;
  SymmetricTerms m;
  AsymmetricTerms y;
  AsymmetricTerms l;
  AsymmetricTerms n;
  double reference_airspeed = 20.0;  // m/s, anchor of the speed terms
};

}  // namespace flightoed
