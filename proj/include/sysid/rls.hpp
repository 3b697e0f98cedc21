#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sysid {

// One (phi_k, y_{k+1}) pair of the stochastic regression model
// y_{k+1} = phi_k^T theta + w_{k+1}.
struct RegressionSample {
  Eigen::VectorXd phi;
  double y = 0.0;
};

struct UpdateReport {
  double gain = 0.0;        // a_k = 1/(1 + phi^T P phi), in (0,1]
  double innovation = 0.0;  // y - phi^T theta, with the pre-update theta
};

struct ExcitationStats {
  double r_n = 0.0;           // R_n = 1 + sum ||phi_k||^2
  double lambda_min = 0.0;    // smallest eigenvalue of the information matrix
  double ratio_weakest = 0.0; // log(R_n) / lambda_min
  double ratio_zhao = 0.0;    // (R_n/lambda_min) * sqrt(ratio_weakest)
};

// Recursive least-squares state.  Alongside the covariance P it carries the
// exact information matrix F = P0^{-1} + sum phi phi^T, which the threshold
// schedule queries every step, and the energy R_n with compensated summation.
class RlsState {
 public:
  RlsState(int r, const Eigen::VectorXd& theta0, double p0_scale);

  // One pass of the rank-1 recursion.  theta is advanced with the
  // pre-update covariance, then P is downdated and re-symmetrized.
  UpdateReport step(const RegressionSample& sample);

  ExcitationStats excitation_stats() const;

  // Max-abs entry of P*F - I; should stay below ~1e-6 on sane streams.
  double inverse_identity_error() const;

  int dim() const { return static_cast<int>(theta_.size()); }
  int step_count() const { return step_; }
  const Eigen::VectorXd& theta() const { return theta_; }
  const Eigen::MatrixXd& p() const { return p_; }
  const Eigen::MatrixXd& f() const { return f_; }
  double r_energy() const { return r_energy_ + r_comp_; }

 private:
  Eigen::VectorXd theta_;
  Eigen::MatrixXd p_;
  Eigen::MatrixXd f_;
  double r_energy_ = 1.0;
  double r_comp_ = 0.0;  // Neumaier compensation term
  int step_ = 0;
};

// Direct solve of the regularized normal equations
//   [(1/p0_scale) I + sum phi phi^T] theta = (1/p0_scale) theta0 + sum phi y.
// Algebraically identical to replaying the recursion; used as its oracle.
Eigen::VectorXd batch_ls(const std::vector<RegressionSample>& samples,
                         const Eigen::VectorXd& theta0, double p0_scale);

}  // namespace sysid
