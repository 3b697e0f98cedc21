#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sysid/csv.hpp"
#include "sysid/experiments.hpp"
#include "sysid/rng.hpp"

using namespace sysid;

TEST_CASE("stream generation is deterministic for a fixed seed") {
  auto config = make_example1_config();
  config.n = 50;
  const auto first = gen_example1(config, 3);
  const auto second = gen_example1(config, 3);
  REQUIRE(first.size() == second.size());
  for (std::size_t k = 0; k < first.size(); ++k) {
    CHECK(first[k].phi == second[k].phi);
    CHECK(first[k].y == second[k].y);
  }
  // Different replicates draw from split seeds.
  const auto other = gen_example1(config, 4);
  CHECK(first[0].phi != other[0].phi);
}

TEST_CASE("zero noise and zero parameter give zero observations") {
  auto config = make_example1_config();
  config.n = 20;
  config.noise_variance = 0.0;
  config.theta_true = Eigen::VectorXd::Zero(config.r);
  for (const auto& s : gen_example1(config, 1)) CHECK(s.y == 0.0);
}

TEST_CASE("unstable state dynamics inflate the regressor stream") {
  auto config = make_example1_config();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    config.seed = seed;
    const auto samples = gen_example1(config, 1);
    // ||phi|| at the end dwarfs the initial scale because x grows like 1.01^k.
    double early = 0.0, late = 0.0;
    for (int k = 0; k < 10; ++k) {
      early += samples[static_cast<std::size_t>(k)].phi.norm();
      late += samples[samples.size() - 1 - static_cast<std::size_t>(k)].phi.norm();
    }
    CHECK(late > early);
  }
}

TEST_CASE("gaussian source moments") {
  GaussianRng rng(123);
  const int n = 1000000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  // 5-sigma bands: sd(mean) = 1/sqrt(n), sd(var) ~ sqrt(2/n).
  CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("support metrics conventions") {
  const std::set<int> truth = {5, 6, 7, 8, 9, 10};
  auto m = support_metrics(truth, truth);
  CHECK(m.precision == 1.0);
  CHECK(m.recall == 1.0);
  CHECK(m.exact_match);

  m = support_metrics({}, truth);
  CHECK(m.precision == 0.0);
  CHECK(m.recall == 0.0);
  CHECK(!m.exact_match);

  m = support_metrics({4, 5, 6, 7, 8, 9, 10}, truth);
  CHECK(m.precision == doctest::Approx(6.0 / 7.0));
  CHECK(m.recall == 1.0);
  CHECK(!m.exact_match);

  m = support_metrics({}, {});
  CHECK(m.precision == 1.0);
  CHECK(m.recall == 1.0);
  CHECK(m.exact_match);
}

TEST_CASE("compensated mean equals the arithmetic mean") {
  std::vector<Eigen::VectorXd> values;
  GaussianRng rng(9);
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXd v(3);
    for (int j = 0; j < 3; ++j) v(j) = rng.normal() * std::pow(10.0, i % 5);
    values.push_back(v);
    expected += v;
  }
  expected /= 10.0;
  CHECK((compensated_mean(values) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("small campaign respects the stream length") {
  auto config = make_example1_config();
  config.replicates = 1;
  config.n = 100;
  const auto result = run_campaign(config);
  CHECK(result.checkpoints == std::vector<int>{100});
  REQUIRE(result.averaged.size() == 1);
  CHECK(result.averaged[0].n == 100);
  CHECK(result.trajectories[0].steps.size() == 100);
}

TEST_CASE("campaign results are reproducible") {
  auto config = make_example1_config();
  config.replicates = 2;
  config.n = 120;
  const auto a = run_campaign(config);
  const auto b = run_campaign(config);
  for (std::size_t ci = 0; ci < a.averaged.size(); ++ci) {
    CHECK(a.averaged[ci].algorithm1 == b.averaged[ci].algorithm1);
    CHECK(a.averaged[ci].least_squares == b.averaged[ci].least_squares);
    CHECK(a.averaged[ci].lasso == b.averaged[ci].lasso);
  }
}

TEST_CASE("excitation ratio trends downward on the benchmark streams") {
  auto config = make_example1_config();
  config.n = 500;
  int improved = 0;
  for (int j = 1; j <= 10; ++j) {
    const auto samples = gen_example1(config, j);
    const auto traj = run_identification(samples, config.schedule, config.theta0,
                                         config.p0_scale);
    if (traj.steps[499].stats.ratio_weakest < traj.steps[99].stats.ratio_weakest)
      ++improved;
  }
  CHECK(improved >= 9);
}

TEST_CASE("sample CSV round-trips through the writer and reader") {
  GaussianRng rng(77);
  std::vector<RegressionSample> samples;
  for (int k = 0; k < 25; ++k) {
    RegressionSample s;
    s.phi.resize(4);
    for (int i = 0; i < 4; ++i) s.phi(i) = rng.normal() * std::pow(10.0, k % 7 - 3);
    s.y = rng.normal();
    samples.push_back(std::move(s));
  }
  std::stringstream buf;
  write_samples_csv(buf, samples);
  const auto back = read_samples_csv(buf);
  REQUIRE(back.size() == samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    CHECK(back[k].phi == samples[k].phi);  // shortest round-trip is exact
    CHECK(back[k].y == samples[k].y);
  }
}

TEST_CASE("malformed CSV rows are reported with their line number") {
  std::stringstream missing_header("nope\n1,2\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(read_samples_csv(missing_header)),
                       doctest::Contains("line 1"), std::invalid_argument);

  std::stringstream bad_row("phi_1,y\n1,2\nx,3\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(read_samples_csv(bad_row)),
                       doctest::Contains("line 3"), std::invalid_argument);

  std::stringstream empty("");
  CHECK_THROWS_AS(static_cast<void>(read_samples_csv(empty)), std::invalid_argument);
}

TEST_CASE("exact zeros serialize as the bare digit") {
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
  CHECK(parse_double(format_double(0.1)) == 0.1);
}
