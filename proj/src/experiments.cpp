#include "sysid/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "sysid/errors.hpp"
#include "sysid/rng.hpp"

namespace sysid {

Eigen::VectorXd example1_default_theta() {
  Eigen::VectorXd theta(10);
  theta << 0.8, 1.6, -0.3, 0.05, 0, 0, 0, 0, 0, 0;
  return theta;
}

Example1Config make_example1_config() {
  Example1Config config;
  config.theta_true = example1_default_theta();
  config.x0 = Eigen::VectorXd::Ones(config.r);
  config.theta0 = Eigen::VectorXd::Zero(config.r);
  return config;
}

std::vector<RegressionSample> gen_example1(const Example1Config& config,
                                           int replicate) {
  if (replicate < 1)
    throw std::invalid_argument("gen_example1: replicate index is 1-based");
  if (config.theta_true.size() != config.r || config.x0.size() != config.r)
    throw std::invalid_argument("gen_example1: dimension mismatch in config");
  if (!(config.noise_variance >= 0.0))
    throw std::invalid_argument("gen_example1: negative noise variance");

  GaussianRng rng(replicate_seed(config.seed, static_cast<std::uint64_t>(replicate)));
  const int r = config.r;
  const double w_std = std::sqrt(config.noise_variance);

  // Draw order per step is fixed: state noise, B_k row-major, then w.
  std::vector<RegressionSample> samples;
  samples.reserve(static_cast<std::size_t>(config.n));
  Eigen::VectorXd x = config.x0;
  Eigen::MatrixXd b(r, r);
  for (int k = 1; k <= config.n; ++k) {
    for (int i = 0; i < r; ++i) x(i) = config.a_diag * x(i) + rng.normal();
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) b(i, j) = rng.normal();
    RegressionSample s;
    s.phi = b * x;
    s.y = s.phi.dot(config.theta_true) + w_std * rng.normal();
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<SparseEstimate> Trajectory::sparse_history() const {
  std::vector<SparseEstimate> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.sparse);
  return out;
}

std::vector<ExcitationStats> Trajectory::stats_history() const {
  std::vector<ExcitationStats> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.stats);
  return out;
}

Trajectory run_identification(const std::vector<RegressionSample>& samples,
                              const ThresholdSchedule& schedule,
                              const Eigen::VectorXd& theta0, double p0_scale) {
  if (samples.empty())
    throw std::invalid_argument("run_identification: empty stream");
  const int r = static_cast<int>(samples.front().phi.size());
  RlsState state(r, theta0, p0_scale);

  Trajectory traj;
  traj.steps.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    state.step(samples[i]);
    StepRecord rec;
    rec.theta = state.theta();
    rec.stats = state.excitation_stats();
    rec.alpha = schedule.value(rec.stats, static_cast<int>(i) + 1);
    rec.sparse = sparsify(rec.theta, rec.alpha);
    traj.steps.push_back(std::move(rec));
  }
  return traj;
}

int worker_count(int jobs) {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("SPARSE_SYSID_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) cap = parsed;
  }
  return std::min(cap, std::max(jobs, 1));
}

CampaignResult run_campaign(const Example1Config& config) {
  if (config.replicates < 1)
    throw std::invalid_argument("run_campaign: replicates must be >= 1");
  CampaignResult result;
  for (int cp : config.checkpoints)
    if (cp <= config.n) result.checkpoints.push_back(cp);

  const int reps = config.replicates;
  result.trajectories.resize(static_cast<std::size_t>(reps));
  result.algorithm1_by_replicate.resize(static_cast<std::size_t>(reps));
  result.least_squares_by_replicate.resize(static_cast<std::size_t>(reps));
  result.lasso_by_replicate.resize(static_cast<std::size_t>(reps));
  std::vector<std::string> failures(static_cast<std::size_t>(reps));

  auto run_one = [&](int j) {  // j is 0-based here, replicates are 1-based
    const auto samples = gen_example1(config, j + 1);
    auto traj = run_identification(samples, config.schedule, config.theta0,
                                   config.p0_scale);
    auto& alg1 = result.algorithm1_by_replicate[static_cast<std::size_t>(j)];
    auto& ls = result.least_squares_by_replicate[static_cast<std::size_t>(j)];
    auto& lasso = result.lasso_by_replicate[static_cast<std::size_t>(j)];
    for (int cp : result.checkpoints) {
      const auto& rec = traj.steps[static_cast<std::size_t>(cp) - 1];
      alg1.push_back(rec.sparse.beta);
      ls.push_back(rec.theta);

      LassoProblem problem;
      problem.samples.assign(samples.begin(), samples.begin() + cp);
      problem.lambda = lambda_schedule(cp, config.lasso_exponent);
      const auto sol = fit_lasso(problem, Eigen::VectorXd::Zero(config.r));
      if (!sol.converged)
        throw numeric_failure("lasso did not converge at checkpoint " +
                              std::to_string(cp));
      lasso.push_back(sol.beta);
    }
    result.trajectories[static_cast<std::size_t>(j)] = std::move(traj);
  };

  const int workers = worker_count(reps);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int j = next.fetch_add(1); j < reps; j = next.fetch_add(1)) {
        try {
          run_one(j);
        } catch (const std::exception& e) {
          failures[static_cast<std::size_t>(j)] = e.what();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (int j = 0; j < reps; ++j) {
    if (!failures[static_cast<std::size_t>(j)].empty())
      throw numeric_failure("replicate " + std::to_string(j + 1) + ": " +
                            failures[static_cast<std::size_t>(j)]);
  }

  // Deterministic aggregation in replicate order.
  for (std::size_t ci = 0; ci < result.checkpoints.size(); ++ci) {
    CheckpointEstimates avg;
    avg.n = result.checkpoints[ci];
    std::vector<Eigen::VectorXd> alg1, ls, lasso;
    for (int j = 0; j < reps; ++j) {
      alg1.push_back(result.algorithm1_by_replicate[static_cast<std::size_t>(j)][ci]);
      ls.push_back(result.least_squares_by_replicate[static_cast<std::size_t>(j)][ci]);
      lasso.push_back(result.lasso_by_replicate[static_cast<std::size_t>(j)][ci]);
    }
    avg.algorithm1 = compensated_mean(alg1);
    avg.least_squares = compensated_mean(ls);
    avg.lasso = compensated_mean(lasso);
    result.averaged.push_back(std::move(avg));
  }

  std::set<int> truth;
  for (int l = 1; l <= config.r; ++l)
    if (config.theta_true(l - 1) == 0.0) truth.insert(l);
  for (int j = 0; j < reps; ++j) {
    result.support_reports.push_back(track_support(
        result.trajectories[static_cast<std::size_t>(j)].sparse_history(), truth));
  }
  return result;
}

SupportMetrics support_metrics(const std::set<int>& estimated,
                               const std::set<int>& truth) {
  SupportMetrics out;
  std::set<int> inter;
  for (int l : estimated)
    if (truth.count(l)) inter.insert(l);
  if (estimated.empty())
    out.precision = truth.empty() ? 1.0 : 0.0;
  else
    out.precision = static_cast<double>(inter.size()) / estimated.size();
  out.recall = truth.empty() ? 1.0
                             : static_cast<double>(inter.size()) / truth.size();
  out.exact_match = (estimated == truth);
  return out;
}

Eigen::VectorXd compensated_mean(const std::vector<Eigen::VectorXd>& values) {
  if (values.empty())
    throw std::invalid_argument("compensated_mean: empty input");
  const Eigen::Index r = values.front().size();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(r);
  Eigen::VectorXd comp = Eigen::VectorXd::Zero(r);
  for (const auto& v : values) {
    if (v.size() != r)
      throw std::invalid_argument("compensated_mean: ragged input");
    for (Eigen::Index i = 0; i < r; ++i) {
      const double t = sum(i) + v(i);
      if (std::abs(sum(i)) >= std::abs(v(i)))
        comp(i) += (sum(i) - t) + v(i);
      else
        comp(i) += (v(i) - t) + sum(i);
      sum(i) = t;
    }
  }
  return (sum + comp) / static_cast<double>(values.size());
}

}  // namespace sysid
