#pragma once

#include <Eigen/Dense>
#include <optional>
#include <set>
#include <vector>

#include "sysid/rls.hpp"

namespace sysid {

enum class ScheduleKind { ratio_power, log_over_n, fixed_sequence };

// Rule producing the threshold alpha_n.  ratio_power follows
// M * (R_n / lambda_min)^eps; log_over_n follows (log n / n)^eps with
// alpha_1 = 1 (the raw formula gives 0 at n=1, which is not a valid
// positive threshold); fixed_sequence reads a user-supplied list.
class ThresholdSchedule {
 public:
  static ThresholdSchedule ratio_power(double m_const, double epsilon);
  static ThresholdSchedule log_over_n(double epsilon);
  static ThresholdSchedule fixed_sequence(std::vector<double> values);

  // n is the 1-based step index.
  double value(const ExcitationStats& stats, int n) const;

  ScheduleKind kind() const { return kind_; }
  double m_const() const { return m_const_; }
  double epsilon() const { return epsilon_; }

 private:
  ThresholdSchedule() = default;
  ScheduleKind kind_ = ScheduleKind::ratio_power;
  double m_const_ = 1.0;
  double epsilon_ = 0.25;
  std::vector<double> fixed_values_;
};

// Hard-thresholded estimate: entries are either kept exactly or zeroed.
struct SparseEstimate {
  Eigen::VectorXd beta;
  std::set<int> support_zero;  // 1-based indices with beta == 0
  double alpha_used = 0.0;
};

// beta(l) = 0 if |theta_hat(l)| < alpha, else theta_hat(l).  The
// comparison is strictly "<": a tie keeps the value.
SparseEstimate sparsify(const Eigen::VectorXd& theta_hat, double alpha);

struct SetConvergenceReport {
  // 1-based position in the history after which the zero set never changes;
  // absent when the last two recorded sets differ.
  std::optional<int> settled_index;
  std::set<int> final_support;
  std::optional<bool> matches_truth;
};

SetConvergenceReport track_support(
    const std::vector<SparseEstimate>& history,
    const std::optional<std::set<int>>& truth = std::nullopt);

// Diagnostic sequence sqrt(log R_n / lambda_min^n) / alpha_n; decay toward
// zero suggests the schedule's small-o excitation condition holds on this
// path.  Entry n uses the 1-based step index n.
std::vector<double> schedule_validity_trace(
    const ThresholdSchedule& schedule,
    const std::vector<ExcitationStats>& stats_history);

}  // namespace sysid
