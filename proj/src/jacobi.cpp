#include "sysid/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "sysid/errors.hpp"

namespace sysid {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

JacobiResult jacobi_eigensolve(const Eigen::MatrixXd& a, int max_sweeps) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw std::invalid_argument("jacobi_eigensolve: matrix must be square");
  const int n = static_cast<int>(a.rows());
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("jacobi_eigensolve: matrix not symmetric");

  Eigen::MatrixXd m = 0.5 * (a + a.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double tol = 1e-12 * m.norm();

  bool converged = off_diagonal_norm(m) <= tol;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::abs(apq) == 0.0) continue;
        const double tau = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(tau * tau + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // A <- J^T A J with the rotation in the (p,q) plane.
        for (int k = 0; k < n; ++k) {
          const double akp = m(k, p), akq = m(k, q);
          m(k, p) = c * akp - s * akq;
          m(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = m(p, k), aqk = m(q, k);
          m(p, k) = c * apk - s * aqk;
          m(q, k) = s * apk + c * aqk;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = off_diagonal_norm(m) <= tol;
  }
  if (!converged)
    throw numeric_failure("jacobi_eigensolve: no convergence within sweep limit");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return m(i, i) < m(j, j); });

  JacobiResult out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    out.values(i) = m(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

double min_eigenvalue(const Eigen::MatrixXd& f) {
  return jacobi_eigensolve(f).values(0);
}

}  // namespace sysid
