#pragma once

#include <Eigen/Dense>

namespace flightoed {

// Dense convex QP
//   minimize 0.5 x'Hx + g'x  s.t.  row_lower <= A x <= row_upper,  lower <= x <= upper
// with H symmetric positive definite. Infinite bounds are ignored.
struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd A;
  Eigen::VectorXd row_lower, row_upper;
  Eigen::VectorXd lower, upper;
};

struct QpResult {
  Eigen::VectorXd x;
  // Multipliers, positive when the bound is active: the gradient condition is
  // Hx + g + A'(row_upper_mult - row_lower_mult) + (upper_mult - lower_mult) = 0.
  Eigen::VectorXd row_lower_mult, row_upper_mult, lower_mult, upper_mult;
  int iterations = 0;
  bool converged = false;
};

// Mehrotra predictor-corrector interior point method.
QpResult solve_qp(const QpProblem& qp, int max_iterations = 100, double tolerance = 1e-10);

}  // namespace flightoed
