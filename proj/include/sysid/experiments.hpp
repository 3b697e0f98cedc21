#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <set>
#include <vector>

#include "sysid/lasso.hpp"
#include "sysid/rls.hpp"
#include "sysid/sparsify.hpp"

namespace sysid {

struct NoiseSpec {
  double variance = 0.1;
  std::uint64_t seed = 0;
};

// Benchmark campaign driven by the diag(1.01) state-space regressor
// generator: x_k = A x_{k-1} + eps_k, phi_k = B_k x_k with B_k redrawn
// every step, y_{k+1} = phi_k^T theta + w_{k+1}.
struct Example1Config {
  int r = 10;
  int n = 600;
  Eigen::VectorXd theta_true;  // defaults to the benchmark vector below
  double a_diag = 1.01;
  Eigen::VectorXd x0;  // defaults to all-ones
  int replicates = 10;
  ThresholdSchedule schedule = ThresholdSchedule::ratio_power(0.1, 0.25);
  std::uint64_t seed = 1;
  double noise_variance = 0.1;
  double p0_scale = 100.0;
  Eigen::VectorXd theta0;  // defaults to zeros
  double lasso_exponent = 0.75;
  std::vector<int> checkpoints = {100, 200, 300, 400, 500};
};

Eigen::VectorXd example1_default_theta();
Example1Config make_example1_config();

// Deterministic stream for replicate j (1-based) of the campaign.
std::vector<RegressionSample> gen_example1(const Example1Config& config, int replicate);

struct StepRecord {
  Eigen::VectorXd theta;
  SparseEstimate sparse;
  ExcitationStats stats;
  double alpha = 0.0;
};

struct Trajectory {
  std::vector<StepRecord> steps;

  std::vector<SparseEstimate> sparse_history() const;
  std::vector<ExcitationStats> stats_history() const;
};

// Feeds a stream through the RLS recursion and applies the threshold after
// every step, recording the full trajectory.
Trajectory run_identification(const std::vector<RegressionSample>& samples,
                              const ThresholdSchedule& schedule,
                              const Eigen::VectorXd& theta0, double p0_scale);

struct CheckpointEstimates {
  int n = 0;
  Eigen::VectorXd algorithm1;     // thresholded beta, averaged over replicates
  Eigen::VectorXd least_squares;  // RLS theta, averaged
  Eigen::VectorXd lasso;          // batch LASSO with lambda = n^exponent, averaged
};

struct CampaignResult {
  std::vector<Trajectory> trajectories;  // one per replicate
  std::vector<int> checkpoints;
  std::vector<CheckpointEstimates> averaged;
  // raw per-replicate checkpoint estimates, [replicate][checkpoint]
  std::vector<std::vector<Eigen::VectorXd>> algorithm1_by_replicate;
  std::vector<std::vector<Eigen::VectorXd>> least_squares_by_replicate;
  std::vector<std::vector<Eigen::VectorXd>> lasso_by_replicate;
  std::vector<SetConvergenceReport> support_reports;
};

// Runs every replicate (concurrently, capped by SPARSE_SYSID_THREADS),
// evaluates checkpoint estimates for the three methods, and aggregates in
// replicate order so results are independent of scheduling.
CampaignResult run_campaign(const Example1Config& config);

struct SupportMetrics {
  double precision = 0.0;
  double recall = 0.0;
  bool exact_match = false;
};

// Convention: an empty estimated set has precision 1 against an empty truth
// and 0 otherwise; recall against an empty truth is 1.
SupportMetrics support_metrics(const std::set<int>& estimated,
                               const std::set<int>& truth);

// Arithmetic mean with Neumaier-compensated accumulation.
Eigen::VectorXd compensated_mean(const std::vector<Eigen::VectorXd>& values);

// Worker cap: SPARSE_SYSID_THREADS when set, hardware concurrency otherwise.
int worker_count(int jobs);

}  // namespace sysid
