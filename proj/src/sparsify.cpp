#include "sysid/sparsify.hpp"

#include <cmath>
#include <stdexcept>

namespace sysid {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("ThresholdSchedule: epsilon must lie in (0, 1/2)");
}

}  // namespace

ThresholdSchedule ThresholdSchedule::ratio_power(double m_const, double epsilon) {
  check_epsilon(epsilon);
  if (!(m_const > 0.0))
    throw std::invalid_argument("ThresholdSchedule: M must be positive");
  ThresholdSchedule s;
  s.kind_ = ScheduleKind::ratio_power;
  s.m_const_ = m_const;
  s.epsilon_ = epsilon;
  return s;
}

ThresholdSchedule ThresholdSchedule::log_over_n(double epsilon) {
  check_epsilon(epsilon);
  ThresholdSchedule s;
  s.kind_ = ScheduleKind::log_over_n;
  s.epsilon_ = epsilon;
  return s;
}

ThresholdSchedule ThresholdSchedule::fixed_sequence(std::vector<double> values) {
  for (double v : values)
    if (!(v > 0.0))
      throw std::invalid_argument("ThresholdSchedule: fixed values must be positive");
  ThresholdSchedule s;
  s.kind_ = ScheduleKind::fixed_sequence;
  s.fixed_values_ = std::move(values);
  return s;
}

double ThresholdSchedule::value(const ExcitationStats& stats, int n) const {
  if (n < 1) throw std::invalid_argument("ThresholdSchedule: n must be >= 1");
  switch (kind_) {
    case ScheduleKind::ratio_power:
      return m_const_ * std::pow(stats.r_n / stats.lambda_min, epsilon_);
    case ScheduleKind::log_over_n:
      if (n == 1) return 1.0;
      return std::pow(std::log(static_cast<double>(n)) / n, epsilon_);
    case ScheduleKind::fixed_sequence:
      if (n > static_cast<int>(fixed_values_.size()))
        throw std::invalid_argument("ThresholdSchedule: fixed sequence exhausted");
      return fixed_values_[static_cast<std::size_t>(n) - 1];
  }
  throw std::invalid_argument("ThresholdSchedule: unknown kind");
}

SparseEstimate sparsify(const Eigen::VectorXd& theta_hat, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("sparsify: alpha must be positive");
  if (!theta_hat.allFinite())
    throw std::invalid_argument("sparsify: estimate must be finite");
  SparseEstimate out;
  out.beta = theta_hat;
  out.alpha_used = alpha;
  for (int l = 0; l < theta_hat.size(); ++l) {
    if (std::abs(theta_hat(l)) < alpha) {
      out.beta(l) = 0.0;
      out.support_zero.insert(l + 1);
    }
  }
  return out;
}

SetConvergenceReport track_support(
    const std::vector<SparseEstimate>& history,
    const std::optional<std::set<int>>& truth) {
  if (history.empty())
    throw std::invalid_argument("track_support: empty history");
  SetConvergenceReport report;
  report.final_support = history.back().support_zero;

  int settled = static_cast<int>(history.size());
  while (settled > 1 &&
         history[static_cast<std::size_t>(settled) - 2].support_zero ==
             report.final_support) {
    --settled;
  }
  const bool last_two_agree =
      history.size() == 1 ||
      history[history.size() - 2].support_zero == report.final_support;
  if (last_two_agree) report.settled_index = settled;

  if (truth) report.matches_truth = (report.final_support == *truth);
  return report;
}

std::vector<double> schedule_validity_trace(
    const ThresholdSchedule& schedule,
    const std::vector<ExcitationStats>& stats_history) {
  if (stats_history.empty())
    throw std::invalid_argument("schedule_validity_trace: empty history");
  std::vector<double> trace;
  trace.reserve(stats_history.size());
  for (std::size_t i = 0; i < stats_history.size(); ++i) {
    const double alpha = schedule.value(stats_history[i], static_cast<int>(i) + 1);
    trace.push_back(std::sqrt(stats_history[i].ratio_weakest) / alpha);
  }
  return trace;
}

}  // namespace sysid
