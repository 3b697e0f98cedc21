#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "sysid/errors.hpp"
#include "sysid/hammerstein.hpp"
#include "sysid/rng.hpp"

using namespace sysid;

namespace {

HammersteinModel identity_gain_model(double a1, double b1) {
  Eigen::VectorXd a(a1 == 0.0 ? 0 : 1);
  if (a.size() == 1) a << a1;
  Eigen::VectorXd b(1);
  b << b1;
  Eigen::VectorXd c(1);
  c << 1.0;
  return HammersteinModel(a, b, c, {BasisFunction::monomial(1, -10.0, 10.0)});
}

std::vector<BasisFunction> monomial_basis(int m, double lo, double hi) {
  std::vector<BasisFunction> basis;
  for (int j = 1; j <= m; ++j) basis.push_back(BasisFunction::monomial(j, lo, hi));
  return basis;
}

}  // namespace

TEST_CASE("stability gate rejects roots on or inside the unit circle") {
  Eigen::VectorXd b(1), c(1);
  b << 1.0;
  c << 1.0;
  auto basis = monomial_basis(1, -1.0, 1.0);

  Eigen::VectorXd unstable(1);
  unstable << 1.1;
  CHECK_THROWS_AS(HammersteinModel(unstable, b, c, basis), std::invalid_argument);
  Eigen::VectorXd marginal(1);
  marginal << 1.0;
  CHECK_THROWS_AS(HammersteinModel(marginal, b, c, basis), std::invalid_argument);
  Eigen::VectorXd stable(1);
  stable << 0.9;
  CHECK_NOTHROW(HammersteinModel(stable, b, c, basis));

  Eigen::VectorXd zero_b(1);
  zero_b << 0.0;
  CHECK_THROWS_AS(HammersteinModel(stable, zero_b, c, basis), std::invalid_argument);
}

TEST_CASE("zero input and noise give the zero trajectory") {
  Eigen::VectorXd a(2), b(1), c(1);
  a << 0.3, 0.1;
  b << 1.0;
  c << 1.0;
  HammersteinModel model(a, b, c, monomial_basis(1, -1.0, 1.0));
  const auto io = simulate(model, std::vector<double>(50, 0.0),
                           std::vector<double>(50, 0.0), Eigen::VectorXd::Zero(2));
  for (double y : io.y) CHECK(y == 0.0);
}

TEST_CASE("memoryless model passes the input through one lag") {
  const auto model = identity_gain_model(0.0, 1.0);
  std::vector<double> u = {0.5, -0.25, 2.0, 1.5};
  std::vector<double> w = {0.1, 0.2, 0.3, 0.4};
  const auto io = simulate(model, u, w, Eigen::VectorXd());
  CHECK(io.y[0] == doctest::Approx(0.1));  // no u term yet
  for (std::size_t t = 1; t < u.size(); ++t)
    CHECK(io.y[t] == doctest::Approx(u[t - 1] + w[t]));
}

TEST_CASE("constant input drives the AR loop to its fixed point") {
  const auto model = identity_gain_model(0.5, 2.0);
  const auto io = simulate(model, std::vector<double>(200, 1.0),
                           std::vector<double>(200, 0.0), Eigen::VectorXd::Zero(1));
  CHECK(io.y.back() == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("simulate rejects inputs outside the basis domain") {
  Eigen::VectorXd b(1), c(1);
  b << 1.0;
  c << 1.0;
  HammersteinModel model(Eigen::VectorXd(), b, c, monomial_basis(1, -1.0, 1.0));
  CHECK_THROWS_AS(simulate(model, {2.0}, {0.0}, Eigen::VectorXd()),
                  std::invalid_argument);
}

TEST_CASE("regressor layout follows the p + q*m packing") {
  IoRecord io;
  io.u = {0.5, -0.5, 0.25};
  io.y = {1.0, 2.0, 3.0};
  const auto basis = monomial_basis(2, -1.0, 1.0);
  const auto samples = build_regressors(io, 1, 1, basis);
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].phi.size() == 3);  // p + q*m = 1 + 1*2
  // phi_1 = (y_1, u_1, u_1^2), target y_2.
  CHECK(samples[0].phi(0) == 1.0);
  CHECK(samples[0].phi(1) == 0.5);
  CHECK(samples[0].phi(2) == doctest::Approx(0.25));
  CHECK(samples[0].y == 2.0);
  CHECK(samples[1].y == 3.0);

  IoRecord tiny;
  tiny.u = {0.5};
  tiny.y = {1.0};
  CHECK(build_regressors(tiny, 1, 1, basis).empty());
}

TEST_CASE("packed parameters are recovered from simulated data") {
  Eigen::VectorXd a(1), b(2), c(2);
  a << 0.4;
  b << 1.0, 0.5;
  c << 1.0, 0.7;
  HammersteinModel model(a, b, c, monomial_basis(2, -1.0, 1.0));

  const int n = 4000;
  GaussianRng rng(17);
  std::vector<double> u(n), w(n);
  for (int k = 0; k < n; ++k) {
    u[static_cast<std::size_t>(k)] = 2.0 * rng.uniform01() - 1.0;
    w[static_cast<std::size_t>(k)] = 0.1 * rng.normal();
  }
  const auto io = simulate(model, u, w, Eigen::VectorXd::Zero(1));
  const auto samples = build_regressors(io, model.p(), model.q(), model.basis());
  const auto packed = pack_theta(model);
  const auto estimate =
      batch_ls(samples, Eigen::VectorXd::Zero(packed.theta.size()), 100.0);
  CHECK((estimate - packed.theta).norm() < 2.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("theta packing and M extraction round-trip") {
  Eigen::VectorXd a(1), b(2), c(3);
  a << 0.2;
  b << 1.0, 2.0;
  c << 3.0, 0.0, 4.0;
  HammersteinModel model(a, b, c, monomial_basis(3, -1.0, 1.0));
  const auto packed = pack_theta(model);
  CHECK(packed.theta.size() == 7);
  CHECK(packed.theta(0) == 0.2);

  const auto m = unpack_M(packed.theta, 1, 2, 3);
  Eigen::MatrixXd expected(2, 3);
  expected << 3.0, 0.0, 4.0, 6.0, 0.0, 8.0;
  CHECK(m == expected);  // outer product b c^T, exactly
  CHECK_THROWS_AS(unpack_M(packed.theta, 2, 2, 3), std::invalid_argument);
}

TEST_CASE("zero columns of the packed estimate name the dead basis functions") {
  Eigen::VectorXd a(1), b(2), c(3);
  a << 0.2;
  b << 1.0, 2.0;
  c << 3.0, 0.0, 4.0;
  HammersteinModel model(a, b, c, monomial_basis(3, -1.0, 1.0));
  const auto packed = pack_theta(model);

  SparseEstimate est;
  est.beta = packed.theta;
  est.alpha_used = 1.0;
  CHECK(effective_basis_zeros(est, 1, 2, 3) == std::set<int>{2});

  est.beta = Eigen::VectorXd::Zero(7);
  CHECK(effective_basis_zeros(est, 1, 2, 3) == std::set<int>{1, 2, 3});
}

TEST_CASE("rank-1 recovery on an exactly rank-1 matrix") {
  Eigen::MatrixXd m(2, 3);
  m << 3.0, 0.0, 4.0, 6.0, 0.0, 8.0;
  const auto factors = recover_factors(m);
  const double s5 = std::sqrt(5.0);
  CHECK(factors.b_hat(0) == doctest::Approx(1.0 / s5).epsilon(1e-10));
  CHECK(factors.b_hat(1) == doctest::Approx(2.0 / s5).epsilon(1e-10));
  CHECK(factors.c_hat(0) == doctest::Approx(3.0 * s5).epsilon(1e-10));
  CHECK(factors.c_hat(1) == doctest::Approx(0.0));
  CHECK(factors.c_hat(2) == doctest::Approx(4.0 * s5).epsilon(1e-10));
}

TEST_CASE("rank-1 recovery properties over random matrices") {
  GaussianRng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int q = 1 + static_cast<int>(rng.raw() % 6);
    const int m_dim = 1 + static_cast<int>(rng.raw() % 6);
    Eigen::VectorXd b(q), c(m_dim);
    for (int i = 0; i < q; ++i) b(i) = rng.normal();
    for (int i = 0; i < m_dim; ++i) c(i) = rng.normal();
    if (b.norm() < 0.1 || c.norm() < 0.1) continue;

    const Eigen::MatrixXd rank1 = b * c.transpose();
    const auto factors = recover_factors(rank1);
    CHECK((factors.b_hat * factors.c_hat.transpose() - rank1).norm() < 1e-8);
    CHECK(factors.b_hat.norm() == doctest::Approx(1.0).epsilon(1e-12));

    // General matrix: reconstruction error bounded by the second singular
    // value, checked against a dense SVD oracle.
    Eigen::MatrixXd general(q, m_dim);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < m_dim; ++j) general(i, j) = rng.normal();
    Eigen::JacobiSVD<Eigen::MatrixXd> oracle(general);
    const double tail = std::min(q, m_dim) > 1 ? oracle.singularValues()(1) : 0.0;
    const auto approx = recover_factors(general, 1e-13, 100000);
    const double err = (general - approx.b_hat * approx.c_hat.transpose()).norm();
    const double best =
        std::sqrt(oracle.singularValues().tail(std::min(q, m_dim) - 1 >= 0
                                                   ? std::min(q, m_dim) - 1
                                                   : 0)
                      .squaredNorm());
    CHECK(err <= best + 1e-6);
    (void)tail;
  }
}

TEST_CASE("rank-1 recovery degenerate and invalid inputs") {
  CHECK_THROWS_AS(recover_factors(Eigen::MatrixXd::Zero(2, 2)),
                  std::invalid_argument);
  const auto factors = recover_factors(Eigen::MatrixXd::Identity(2, 2));
  CHECK(factors.b_hat.norm() == doctest::Approx(1.0));
  const double err =
      (Eigen::MatrixXd::Identity(2, 2) - factors.b_hat * factors.c_hat.transpose())
          .norm();
  CHECK(err == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("observation bound evaluates the stated maximum") {
  BoundInputs in;  // all constants 1, epsilon 1/4
  const auto res = n0_bound(in);
  CHECK(res.k1 == doctest::Approx(1.0));
  CHECK(res.k2 == doctest::Approx(16.0));
  CHECK(res.n0 == doctest::Approx(32.0 * std::log(16.0)).epsilon(1e-12));
  CHECK(res.n0 == doctest::Approx(88.7228).epsilon(1e-4));
}

TEST_CASE("balancing M equalizes k1 and k2") {
  GaussianRng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    BoundInputs in;
    in.c0 = std::exp(rng.normal());
    in.c2 = std::exp(rng.normal());
    in.c3 = std::exp(rng.normal());
    in.c5 = std::exp(rng.normal());
    in.epsilon = 0.05 + 0.4 * rng.uniform01();
    in.m_const = optimal_m(in.c0, in.c5, in.epsilon);
    const auto res = n0_bound(in);
    const double expected = 4.0 * in.c0 / (in.c5 * in.c5);
    CHECK(res.k1 == doctest::Approx(expected).epsilon(1e-9));
    CHECK(res.k2 == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("closed-form optimal bound") {
  CHECK(n0_optimal(1.0, 1.0, 1.0, 1.0, 0.25) == doctest::Approx(47.0));
  // Shrinking C5 by 10x scales the log term's factor by 100x.
  const double base_factor = 8.0 * 2.0 / (3.0 * 1.0);
  const double shrunk_factor = 8.0 * 2.0 / (3.0 * 0.01);
  CHECK(shrunk_factor == doctest::Approx(100.0 * base_factor));
}

TEST_CASE("bound is monotone in the problem constants") {
  GaussianRng rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    BoundInputs in;
    in.c0 = std::exp(rng.normal());
    in.c2 = std::exp(rng.normal());
    in.c3 = std::exp(rng.normal());
    in.c5 = std::exp(rng.normal());
    in.m_const = std::exp(rng.normal());
    in.epsilon = 0.05 + 0.4 * rng.uniform01();

    BoundInputs harder = in;
    harder.c0 = in.c0 * (1.0 + rng.uniform01());
    CHECK(n0_bound(harder).n0 >= n0_bound(in).n0 - 1e-12);

    BoundInputs easier = in;
    easier.c5 = in.c5 * (1.0 + rng.uniform01());
    CHECK(n0_bound(easier).n0 <= n0_bound(in).n0 + 1e-12);
  }
}

TEST_CASE("basis gram rank flags numerically dependent bases") {
  Eigen::VectorXd b(1), c2(2);
  b << 1.0;
  c2 << 1.0, 1.0;
  HammersteinModel healthy(Eigen::VectorXd(), b, c2, monomial_basis(2, -1.0, 1.0));
  CHECK(healthy.basis_gram_relative_rank() > 1e-8);

  // Duplicate basis function: exactly dependent.
  std::vector<BasisFunction> dup = {BasisFunction::monomial(1, -1.0, 1.0),
                                    BasisFunction::monomial(1, -1.0, 1.0)};
  HammersteinModel degenerate(Eigen::VectorXd(), b, c2, dup);
  CHECK(degenerate.basis_gram_relative_rank() < 1e-8);
}
