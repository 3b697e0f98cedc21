#include "sysid/rls.hpp"

#include <cmath>
#include <stdexcept>

#include "sysid/jacobi.hpp"

namespace sysid {

RlsState::RlsState(int r, const Eigen::VectorXd& theta0, double p0_scale) {
  if (r < 1) throw std::invalid_argument("RlsState: dimension must be >= 1");
  if (!(p0_scale > 0.0))
    throw std::invalid_argument("RlsState: p0_scale must be positive");
  if (theta0.size() != r)
    throw std::invalid_argument("RlsState: theta0 dimension mismatch");
  if (!theta0.allFinite())
    throw std::invalid_argument("RlsState: theta0 must be finite");
  theta_ = theta0;
  p_ = p0_scale * Eigen::MatrixXd::Identity(r, r);
  f_ = (1.0 / p0_scale) * Eigen::MatrixXd::Identity(r, r);
}

UpdateReport RlsState::step(const RegressionSample& sample) {
  if (sample.phi.size() != theta_.size())
    throw std::invalid_argument("RlsState::step: regressor dimension mismatch");
  if (!sample.phi.allFinite() || !std::isfinite(sample.y))
    throw std::invalid_argument("RlsState::step: non-finite sample");

  const Eigen::VectorXd& phi = sample.phi;
  const Eigen::VectorXd p_phi = p_ * phi;
  const double quad = phi.dot(p_phi);
  const double gain = 1.0 / (1.0 + quad);
  const double innovation = sample.y - phi.dot(theta_);

  theta_ += gain * innovation * p_phi;           // uses pre-update P
  p_ -= gain * p_phi * p_phi.transpose();
  p_ = 0.5 * (p_ + p_.transpose());
  f_ += phi * phi.transpose();

  // Neumaier-compensated energy accumulation.
  const double add = phi.squaredNorm();
  const double sum = r_energy_ + add;
  if (std::abs(r_energy_) >= std::abs(add))
    r_comp_ += (r_energy_ - sum) + add;
  else
    r_comp_ += (add - sum) + r_energy_;
  r_energy_ = sum;

  ++step_;
  return {gain, innovation};
}

ExcitationStats RlsState::excitation_stats() const {
  ExcitationStats s;
  s.r_n = r_energy();
  s.lambda_min = min_eigenvalue(f_);
  s.ratio_weakest = std::log(s.r_n) / s.lambda_min;
  s.ratio_zhao = (s.r_n / s.lambda_min) * std::sqrt(s.ratio_weakest);
  return s;
}

double RlsState::inverse_identity_error() const {
  const int r = dim();
  return (p_ * f_ - Eigen::MatrixXd::Identity(r, r)).cwiseAbs().maxCoeff();
}

Eigen::VectorXd batch_ls(const std::vector<RegressionSample>& samples,
                         const Eigen::VectorXd& theta0, double p0_scale) {
  if (!(p0_scale > 0.0))
    throw std::invalid_argument("batch_ls: p0_scale must be positive");
  const int r = static_cast<int>(theta0.size());
  Eigen::MatrixXd f = (1.0 / p0_scale) * Eigen::MatrixXd::Identity(r, r);
  Eigen::VectorXd rhs = (1.0 / p0_scale) * theta0;
  for (const auto& s : samples) {
    if (s.phi.size() != r)
      throw std::invalid_argument("batch_ls: sample dimension mismatch");
    f += s.phi * s.phi.transpose();
    rhs += s.phi * s.y;
  }
  return f.ldlt().solve(rhs);
}

}  // namespace sysid
