#pragma once

#include <Eigen/Dense>

namespace sysid {

struct JacobiResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column i pairs with values(i)
};

// Eigendecomposition of a small dense symmetric matrix by cyclic Jacobi
// rotations.  Stops when the off-diagonal Frobenius norm falls below
// 1e-12 * ||A||_F; throws numeric_failure after max_sweeps sweeps.
// Asymmetry beyond 1e-9 (relative to the largest entry) is rejected.
JacobiResult jacobi_eigensolve(const Eigen::MatrixXd& a, int max_sweeps = 50);

// Smallest eigenvalue of a symmetric positive definite matrix.
double min_eigenvalue(const Eigen::MatrixXd& f);

}  // namespace sysid
