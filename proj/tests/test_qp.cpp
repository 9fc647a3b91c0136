#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "flightoed/errors.hpp"
#include "flightoed/qp.hpp"

using namespace flightoed;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

QpProblem unconstrained(const Eigen::MatrixXd& H, const Eigen::VectorXd& g) {
  const Eigen::Index n = g.size();
  return {H, g, Eigen::MatrixXd(0, n), Eigen::VectorXd(0), Eigen::VectorXd(0),
          Eigen::VectorXd::Constant(n, -kInf), Eigen::VectorXd::Constant(n, kInf)};
}

double value(const QpProblem& qp, const Eigen::VectorXd& x) { return 0.5 * x.dot(qp.H * x) + qp.g.dot(x); }

}  // namespace

TEST(Qp, UnconstrainedMinimizer) {
  Eigen::Matrix2d H;
  H << 4, 1, 1, 3;
  const Eigen::Vector2d g(1, -2);
  const QpResult r = solve_qp(unconstrained(H, g));
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.x.isApprox(H.ldlt().solve(-g), 1e-9));
}

TEST(Qp, ActiveBox) {
  QpProblem qp = unconstrained(Eigen::Matrix2d::Identity(), Eigen::Vector2d(-3, 0.5));
  qp.lower = Eigen::Vector2d(-1, -1);
  qp.upper = Eigen::Vector2d(1, 1);
  const QpResult r = solve_qp(qp);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x(0), 1.0, 1e-9);
  EXPECT_NEAR(r.x(1), -0.5, 1e-9);
  EXPECT_NEAR(r.upper_mult(0), 2.0, 1e-8);
  EXPECT_NEAR(r.lower_mult(1), 0.0, 1e-8);
}

TEST(Qp, GeneralRowConstraint) {
  // min 0.5|x|^2 - x0 - x1  s.t. x0 + x1 <= 1  ->  x = (0.5, 0.5), multiplier 0.5
  QpProblem qp = unconstrained(Eigen::Matrix2d::Identity(), Eigen::Vector2d(-1, -1));
  qp.A = Eigen::RowVector2d(1, 1);
  qp.row_lower = Eigen::VectorXd::Constant(1, -kInf);
  qp.row_upper = Eigen::VectorXd::Constant(1, 1.0);
  const QpResult r = solve_qp(qp);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x(0), 0.5, 1e-9);
  EXPECT_NEAR(r.x(1), 0.5, 1e-9);
  EXPECT_NEAR(r.row_upper_mult(0), 0.5, 1e-8);
}

// KKT conditions on random feasible problems.
TEST(Qp, RandomProblemsSatisfyKkt) {
  std::mt19937 rng(3);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 8, m = 12;
    Eigen::MatrixXd L(n, n);
    for (int i = 0; i < n * n; ++i) L.data()[i] = N(rng);
    QpProblem qp = unconstrained(L * L.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd(n));
    for (int i = 0; i < n; ++i) qp.g(i) = 3 * N(rng);
    qp.A.resize(m, n);
    for (int i = 0; i < m * n; ++i) qp.A.data()[i] = N(rng);
    qp.row_lower = Eigen::VectorXd::Constant(m, -1.0);
    qp.row_upper = Eigen::VectorXd::Constant(m, 1.0);
    qp.row_lower(0) = -kInf;
    qp.lower = Eigen::VectorXd::Constant(n, -0.5);
    qp.upper = Eigen::VectorXd::Constant(n, 0.5);
    const QpResult r = solve_qp(qp);
    ASSERT_TRUE(r.converged);
    const Eigen::VectorXd ax = qp.A * r.x;
    const Eigen::VectorXd grad = qp.H * r.x + qp.g + qp.A.transpose() * (r.row_upper_mult - r.row_lower_mult) +
                                 r.upper_mult - r.lower_mult;
    EXPECT_LT(grad.cwiseAbs().maxCoeff(), 1e-8);
    for (int i = 0; i < m; ++i) {
      EXPECT_LE(ax(i), 1.0 + 1e-9);
      if (i > 0) EXPECT_GE(ax(i), -1.0 - 1e-9);
      EXPECT_LT(r.row_upper_mult(i) * std::abs(1.0 - ax(i)), 1e-8);
    }
    EXPECT_LE(r.x.cwiseAbs().maxCoeff(), 0.5 + 1e-9);
    // No feasible perturbation does better.
    for (int k = 0; k < 50; ++k) {
      Eigen::VectorXd y = r.x;
      for (int i = 0; i < n; ++i) y(i) += 0.05 * N(rng);
      y = y.cwiseMax(-0.5).cwiseMin(0.5);
      const Eigen::VectorXd ay = qp.A * y;
      bool feasible = (ay.array() <= 1.0).all() && (ay.tail(m - 1).array() >= -1.0).all();
      if (feasible) EXPECT_GE(value(qp, y), value(qp, r.x) - 1e-9);
    }
  }
}

TEST(Qp, RejectsIndefiniteHessian) {
  EXPECT_THROW(solve_qp(unconstrained(-Eigen::Matrix2d::Identity(), Eigen::Vector2d(1, 1))), ValidationError);
}
