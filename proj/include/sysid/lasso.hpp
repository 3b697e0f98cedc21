#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sysid/rls.hpp"

namespace sysid {

// Batch L1-penalized least squares:
//   minimize sum_k (y_k - phi_k^T beta)^2 + lambda * ||beta||_1.
// The objective is a plain sum of squares (no 1/2, no 1/n), which is the
// scaling under which lambda_n = n^0.75 behaves as intended.
struct LassoProblem {
  std::vector<RegressionSample> samples;
  double lambda = 0.0;
};

struct LassoSolution {
  Eigen::VectorXd beta;
  double kkt_residual = 0.0;
  int iterations = 0;            // full coordinate sweeps performed
  bool converged = false;
  std::vector<int> skipped_coords;  // zero-energy columns left at beta0 (lambda == 0)
};

// lambda_n = n^exponent.
double lambda_schedule(int n, double exponent);

// Cyclic coordinate descent, deterministic order 1..r, stopping when the
// largest coordinate change in a sweep falls below tol.
LassoSolution fit_lasso(const LassoProblem& problem, const Eigen::VectorXd& beta0,
                        double tol = 1e-10, int max_sweeps = 10000);

// Maximal violation of the subgradient stationarity conditions; zero at
// the exact minimizer.
double kkt_residual(const LassoProblem& problem, const Eigen::VectorXd& beta);

double lasso_objective(const LassoProblem& problem, const Eigen::VectorXd& beta);

}  // namespace sysid
