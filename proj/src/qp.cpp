#include "flightoed/qp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "flightoed/errors.hpp"

namespace flightoed {

namespace {

// Inequalities stacked as G x <= h in four groups: row lower, row upper,
// variable lower, variable upper.
struct Stacked {
  const Eigen::MatrixXd& A;
  std::vector<int> rl, ru, vl, vu;
  Eigen::Index n = 0, size = 0;

  Stacked(const QpProblem& qp) : A(qp.A), n(qp.g.size()) {
    for (Eigen::Index i = 0; i < qp.A.rows(); ++i) {
      if (std::isfinite(qp.row_lower(i))) rl.push_back(static_cast<int>(i));
      if (std::isfinite(qp.row_upper(i))) ru.push_back(static_cast<int>(i));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::isfinite(qp.lower(j))) vl.push_back(static_cast<int>(j));
      if (std::isfinite(qp.upper(j))) vu.push_back(static_cast<int>(j));
    }
    size = static_cast<Eigen::Index>(rl.size() + ru.size() + vl.size() + vu.size());
  }

  Eigen::VectorXd rhs(const QpProblem& qp) const {
    Eigen::VectorXd h(size);
    Eigen::Index k = 0;
    for (int i : rl) h(k++) = -qp.row_lower(i);
    for (int i : ru) h(k++) = qp.row_upper(i);
    for (int j : vl) h(k++) = -qp.lower(j);
    for (int j : vu) h(k++) = qp.upper(j);
    return h;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd ax = A.rows() > 0 ? Eigen::VectorXd(A * x) : Eigen::VectorXd();
    Eigen::VectorXd out(size);
    Eigen::Index k = 0;
    for (int i : rl) out(k++) = -ax(i);
    for (int i : ru) out(k++) = ax(i);
    for (int j : vl) out(k++) = -x(j);
    for (int j : vu) out(k++) = x(j);
    return out;
  }

  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& v) const {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(A.rows());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    Eigen::Index k = 0;
    for (int i : rl) rows(i) -= v(k++);
    for (int i : ru) rows(i) += v(k++);
    for (int j : vl) out(j) -= v(k++);
    for (int j : vu) out(j) += v(k++);
    if (A.rows() > 0) out += A.transpose() * rows;
    return out;
  }

  // G' diag(d) G
  Eigen::MatrixXd weighted_gram(const Eigen::VectorXd& d) const {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(A.rows());
    Eigen::VectorXd vars = Eigen::VectorXd::Zero(n);
    Eigen::Index k = 0;
    for (int i : rl) rows(i) += d(k++);
    for (int i : ru) rows(i) += d(k++);
    for (int j : vl) vars(j) += d(k++);
    for (int j : vu) vars(j) += d(k++);
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    if (A.rows() > 0) M.selfadjointView<Eigen::Lower>().rankUpdate(A.transpose() * rows.cwiseSqrt().asDiagonal());
    M.diagonal() += vars;
    return M.selfadjointView<Eigen::Lower>();
  }
};

double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  return alpha;
}

}  // namespace

QpResult solve_qp(const QpProblem& qp, int max_iterations, double tolerance) {
  const Eigen::Index n = qp.g.size();
  if (qp.H.rows() != n || qp.H.cols() != n || qp.A.cols() != (qp.A.rows() > 0 ? n : qp.A.cols()) ||
      qp.row_lower.size() != qp.A.rows() || qp.row_upper.size() != qp.A.rows() || qp.lower.size() != n ||
      qp.upper.size() != n)
    throw ValidationError("solve_qp: dimension mismatch");

  if (Eigen::LLT<Eigen::MatrixXd>(qp.H).info() != Eigen::Success)
    throw ValidationError("solve_qp: Hessian is not positive definite");
  const Stacked G(qp);
  const Eigen::VectorXd h = G.rhs(qp);
  const Eigen::Index m = G.size;
  const double scale = 1.0 + std::max(qp.g.cwiseAbs().maxCoeff(), m > 0 ? h.cwiseAbs().maxCoeff() : 0.0);

  QpResult out;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd s = (h - G.apply(x)).cwiseMax(1.0);
  Eigen::VectorXd z = Eigen::VectorXd::Ones(m);

  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd rd = qp.H * x + qp.g + G.apply_transpose(z);
    const Eigen::VectorXd rp = G.apply(x) + s - h;
    const double mu = m > 0 ? s.dot(z) / static_cast<double>(m) : 0.0;
    out.iterations = it;
    if (rd.cwiseAbs().maxCoeff() <= tolerance * scale && (m == 0 || rp.cwiseAbs().maxCoeff() <= tolerance * scale) &&
        mu <= tolerance * scale) {
      out.converged = true;
      break;
    }

    const Eigen::VectorXd d = z.cwiseQuotient(s);
    // Near the solution z/s spans many decades; a tiny diagonal shift keeps the
    // factorization usable without moving the converged point.
    const Eigen::MatrixXd M = qp.H + G.weighted_gram(d);
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    const double shift = 1e-14 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
    for (int k = 0; k < 4 && llt.info() != Eigen::Success; ++k)
      llt.compute(M + std::pow(100.0, k) * shift * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() != Eigen::Success) break;

    // Newton step for the complementarity target s .* z = rc.
    auto newton = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& dx, Eigen::VectorXd& ds, Eigen::VectorXd& dz) {
      const Eigen::VectorXd w = d.cwiseProduct(rp) - rc.cwiseQuotient(s);
      dx = llt.solve(-rd - G.apply_transpose(w));
      dz = d.cwiseProduct(G.apply(dx)) + w;
      ds = -(rc + s.cwiseProduct(dz)).cwiseQuotient(z);
    };

    Eigen::VectorXd dx, ds, dz;
    newton(s.cwiseProduct(z), dx, ds, dz);
    const double a_aff = std::min(max_step(s, ds), max_step(z, dz));
    const double mu_aff = m > 0 ? (s + a_aff * ds).dot(z + a_aff * dz) / static_cast<double>(m) : 0.0;
    const double sigma = mu > 0 ? std::pow(mu_aff / mu, 3) : 0.0;
    newton(s.cwiseProduct(z) + ds.cwiseProduct(dz) - Eigen::VectorXd::Constant(m, sigma * mu), dx, ds, dz);
    const double alpha = std::min(1.0, 0.99 * std::min(max_step(s, ds), max_step(z, dz)));
    x += alpha * dx;
    s += alpha * ds;
    z += alpha * dz;
    out.iterations = it + 1;
  }

  out.x = x;
  out.row_lower_mult = Eigen::VectorXd::Zero(qp.A.rows());
  out.row_upper_mult = Eigen::VectorXd::Zero(qp.A.rows());
  out.lower_mult = Eigen::VectorXd::Zero(n);
  out.upper_mult = Eigen::VectorXd::Zero(n);
  Eigen::Index k = 0;
  for (int i : G.rl) out.row_lower_mult(i) = z(k++);
  for (int i : G.ru) out.row_upper_mult(i) = z(k++);
  for (int j : G.vl) out.lower_mult(j) = z(k++);
  for (int j : G.vu) out.upper_mult(j) = z(k++);
  return out;
}

}  // namespace flightoed
