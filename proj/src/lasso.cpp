#include "sysid/lasso.hpp"

#include <cmath>
#include <stdexcept>

namespace sysid {

namespace {

double soft(double z, double t) {
  const double mag = std::abs(z) - t;
  if (mag <= 0.0) return 0.0;
  return (z > 0.0 ? mag : -mag);
}

// Stack the stream into a dense design matrix; problems here are small.
void to_dense(const LassoProblem& problem, Eigen::MatrixXd& x, Eigen::VectorXd& y) {
  if (problem.samples.empty())
    throw std::invalid_argument("lasso: at least one sample required");
  if (problem.lambda < 0.0)
    throw std::invalid_argument("lasso: lambda must be nonnegative");
  const int n = static_cast<int>(problem.samples.size());
  const int r = static_cast<int>(problem.samples.front().phi.size());
  x.resize(n, r);
  y.resize(n);
  for (int k = 0; k < n; ++k) {
    if (problem.samples[static_cast<std::size_t>(k)].phi.size() != r)
      throw std::invalid_argument("lasso: inconsistent sample dimensions");
    x.row(k) = problem.samples[static_cast<std::size_t>(k)].phi;
    y(k) = problem.samples[static_cast<std::size_t>(k)].y;
  }
}

}  // namespace

double lambda_schedule(int n, double exponent) {
  if (n < 1) throw std::invalid_argument("lambda_schedule: n must be >= 1");
  return std::pow(static_cast<double>(n), exponent);
}

LassoSolution fit_lasso(const LassoProblem& problem, const Eigen::VectorXd& beta0,
                        double tol, int max_sweeps) {
  if (!(tol > 0.0)) throw std::invalid_argument("fit_lasso: tol must be positive");
  if (max_sweeps < 1)
    throw std::invalid_argument("fit_lasso: max_sweeps must be positive");

  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  to_dense(problem, x, y);
  const int r = static_cast<int>(x.cols());
  if (beta0.size() != r)
    throw std::invalid_argument("fit_lasso: beta0 dimension mismatch");

  const Eigen::VectorXd col_energy = x.colwise().squaredNorm();
  LassoSolution sol;
  sol.beta = beta0;
  for (int l = 0; l < r; ++l) {
    if (col_energy(l) == 0.0 && problem.lambda == 0.0)
      sol.skipped_coords.push_back(l + 1);
  }

  Eigen::VectorXd residual = y - x * sol.beta;
  const double half_lambda = 0.5 * problem.lambda;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (int l = 0; l < r; ++l) {
      if (col_energy(l) == 0.0) {
        // Dead column: with lambda > 0 the penalty pins it at zero,
        // with lambda == 0 it stays at its beta0 value (flagged above).
        if (problem.lambda > 0.0 && sol.beta(l) != 0.0) {
          residual += x.col(l) * sol.beta(l);
          max_change = std::max(max_change, std::abs(sol.beta(l)));
          sol.beta(l) = 0.0;
        }
        continue;
      }
      const double old = sol.beta(l);
      const double z = x.col(l).dot(residual) + col_energy(l) * old;
      const double next = soft(z, half_lambda) / col_energy(l);
      if (next != old) {
        residual -= x.col(l) * (next - old);
        sol.beta(l) = next;
        max_change = std::max(max_change, std::abs(next - old));
      }
    }
    sol.iterations = sweep + 1;
    if (max_change < tol) {
      sol.converged = true;
      break;
    }
  }

  sol.kkt_residual = kkt_residual(problem, sol.beta);
  return sol;
}

double kkt_residual(const LassoProblem& problem, const Eigen::VectorXd& beta) {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  to_dense(problem, x, y);
  if (beta.size() != x.cols())
    throw std::invalid_argument("kkt_residual: beta dimension mismatch");

  const Eigen::VectorXd residual = y - x * beta;
  const Eigen::VectorXd grad = -2.0 * (x.transpose() * residual);
  double worst = 0.0;
  for (int l = 0; l < beta.size(); ++l) {
    double v;
    if (beta(l) != 0.0)
      v = std::abs(grad(l) + problem.lambda * (beta(l) > 0.0 ? 1.0 : -1.0));
    else
      v = std::max(0.0, std::abs(grad(l)) - problem.lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

double lasso_objective(const LassoProblem& problem, const Eigen::VectorXd& beta) {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  to_dense(problem, x, y);
  return (y - x * beta).squaredNorm() + problem.lambda * beta.lpNorm<1>();
}

}  // namespace sysid
