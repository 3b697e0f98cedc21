#include <doctest.h>

#include <cmath>

#include "sysid/rng.hpp"
#include "sysid/sparsify.hpp"

using namespace sysid;

TEST_CASE("ratio_power schedule evaluates the declared formula") {
  const auto schedule = ThresholdSchedule::ratio_power(0.1, 0.25);
  ExcitationStats stats;
  stats.r_n = 16.0;
  stats.lambda_min = 1.0;
  CHECK(schedule.value(stats, 5) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("epsilon must lie strictly inside (0, 1/2)") {
  CHECK_THROWS_AS(ThresholdSchedule::log_over_n(0.5), std::invalid_argument);
  CHECK_THROWS_AS(ThresholdSchedule::log_over_n(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ThresholdSchedule::ratio_power(0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(ThresholdSchedule::ratio_power(0.0, 0.25), std::invalid_argument);
}

TEST_CASE("log_over_n schedule") {
  const auto schedule = ThresholdSchedule::log_over_n(0.25);
  ExcitationStats stats;
  CHECK(schedule.value(stats, 1) == 1.0);  // raw formula would give 0
  const double expected = std::pow(std::log(8.0) / 8.0, 0.25);
  CHECK(schedule.value(stats, 8) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.7140).epsilon(1e-4));
}

TEST_CASE("fixed sequence schedule") {
  const auto schedule = ThresholdSchedule::fixed_sequence({0.5, 0.25});
  ExcitationStats stats;
  CHECK(schedule.value(stats, 1) == 0.5);
  CHECK(schedule.value(stats, 2) == 0.25);
  CHECK_THROWS_AS(schedule.value(stats, 3), std::invalid_argument);
  CHECK_THROWS_AS(ThresholdSchedule::fixed_sequence({0.5, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("hard thresholding keeps or zeroes entries") {
  Eigen::VectorXd x(2);
  x << 0.8, 0.003;
  const auto est = sparsify(x, 0.01);
  CHECK(est.beta(0) == 0.8);
  CHECK(est.beta(1) == 0.0);
  CHECK(est.support_zero == std::set<int>{2});
}

TEST_CASE("threshold tie is kept, not zeroed") {
  Eigen::VectorXd x(1);
  x << 0.05;
  const auto est = sparsify(x, 0.05);
  CHECK(est.beta(0) == 0.05);
  CHECK(est.support_zero.empty());
}

TEST_CASE("sparsify properties over random inputs") {
  GaussianRng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 1 + static_cast<int>(rng.raw() % 12);
    Eigen::VectorXd x(r);
    for (int i = 0; i < r; ++i) x(i) = rng.normal();
    const double alpha1 = 0.05 + rng.uniform01();
    const double alpha2 = alpha1 + rng.uniform01();

    const auto est1 = sparsify(x, alpha1);
    const auto est2 = sparsify(x, alpha2);

    // Idempotence.
    const auto twice = sparsify(est1.beta, alpha1);
    CHECK(twice.beta == est1.beta);
    CHECK(twice.support_zero == est1.support_zero);

    for (int l = 0; l < r; ++l) {
      // Kept exactly or already below alpha in magnitude.
      CHECK(std::abs(est1.beta(l) - x(l)) < alpha1);
      // Zero set and zero entries coincide.
      CHECK((est1.beta(l) == 0.0) == (est1.support_zero.count(l + 1) == 1));
    }
    // Support grows with alpha.
    for (int l : est1.support_zero) CHECK(est2.support_zero.count(l) == 1);
  }
}

TEST_CASE("support tracking finds the settling point") {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
  auto with_support = [&](std::set<int> s) {
    SparseEstimate est;
    est.beta = x;
    est.support_zero = std::move(s);
    est.alpha_used = 1.0;
    return est;
  };

  const auto constant = track_support({with_support({1}), with_support({1})});
  REQUIRE(constant.settled_index.has_value());
  CHECK(*constant.settled_index == 1);

  const auto settles = track_support(
      {with_support({}), with_support({2}), with_support({2}), with_support({2})});
  REQUIRE(settles.settled_index.has_value());
  CHECK(*settles.settled_index == 2);
  CHECK(settles.final_support == std::set<int>{2});

  const auto unsettled =
      track_support({with_support({1}), with_support({2})});
  CHECK(!unsettled.settled_index.has_value());

  const auto matched = track_support({with_support({2, 3})},
                                     std::set<int>{2, 3});
  REQUIRE(matched.matches_truth.has_value());
  CHECK(*matched.matches_truth);
  CHECK_THROWS_AS(track_support({}), std::invalid_argument);
}

TEST_CASE("validity trace basics") {
  const auto schedule = ThresholdSchedule::ratio_power(1.0, 0.25);

  ExcitationStats fresh;
  fresh.r_n = 1.0;
  fresh.lambda_min = 1.0;
  fresh.ratio_weakest = 0.0;
  CHECK(schedule_validity_trace(schedule, {fresh})[0] == 0.0);

  ExcitationStats constant;
  constant.r_n = 16.0;
  constant.lambda_min = 2.0;
  constant.ratio_weakest = std::log(16.0) / 2.0;
  const auto trace = schedule_validity_trace(schedule, {constant, constant, constant});
  CHECK(trace[0] == doctest::Approx(trace[1]));
  CHECK(trace[1] == doctest::Approx(trace[2]));
}

TEST_CASE("validity trace decays on a well-excited path") {
  GaussianRng rng(3);
  const auto schedule = ThresholdSchedule::log_over_n(0.45);
  std::vector<ExcitationStats> history;
  // Synthetic well-excited path: R_n ~ r*n, lambda_min ~ n.
  for (int n = 1; n <= 400; ++n) {
    ExcitationStats s;
    s.lambda_min = 0.9 * n + rng.uniform01();
    s.r_n = 1.0 + 4.0 * n;
    s.ratio_weakest = std::log(s.r_n) / s.lambda_min;
    history.push_back(s);
  }
  const auto trace = schedule_validity_trace(schedule, history);
  double first_quartile = 0.0, last_quartile = 0.0;
  const std::size_t quarter = trace.size() / 4;
  for (std::size_t i = 0; i < quarter; ++i) {
    first_quartile += trace[i];
    last_quartile += trace[trace.size() - 1 - i];
  }
  CHECK(last_quartile < first_quartile);
}
