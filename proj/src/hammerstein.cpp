#include "sysid/hammerstein.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sysid/errors.hpp"
#include "sysid/jacobi.hpp"

namespace sysid {

namespace {

double legendre_eval(int degree, double t) {
  if (degree == 0) return 1.0;
  double prev = 1.0, cur = t;
  for (int k = 2; k <= degree; ++k) {
    const double next = ((2.0 * k - 1.0) * t * cur - (k - 1.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

BasisFunction BasisFunction::monomial(int degree, double lo, double hi) {
  if (degree < 1)
    throw std::invalid_argument("BasisFunction: monomial degree must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("BasisFunction: empty domain");
  BasisFunction g;
  g.kind_ = "monomial";
  g.degree_ = degree;
  g.lo_ = lo;
  g.hi_ = hi;
  g.name_ = "x^" + std::to_string(degree);
  g.fn_ = [degree](double x) { return std::pow(x, degree); };
  return g;
}

BasisFunction BasisFunction::legendre(int degree, double lo, double hi) {
  if (degree < 1)
    throw std::invalid_argument("BasisFunction: legendre degree must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("BasisFunction: empty domain");
  BasisFunction g;
  g.kind_ = "legendre";
  g.degree_ = degree;
  g.lo_ = lo;
  g.hi_ = hi;
  g.name_ = "P" + std::to_string(degree);
  g.fn_ = [degree, lo, hi](double x) {
    const double t = (2.0 * x - lo - hi) / (hi - lo);
    return legendre_eval(degree, t);
  };
  return g;
}

BasisFunction BasisFunction::custom(std::string name,
                                    std::function<double(double)> fn, double lo,
                                    double hi) {
  if (!fn) throw std::invalid_argument("BasisFunction: null function");
  if (!(lo < hi)) throw std::invalid_argument("BasisFunction: empty domain");
  BasisFunction g;
  g.kind_ = "custom";
  g.name_ = std::move(name);
  g.lo_ = lo;
  g.hi_ = hi;
  g.fn_ = std::move(fn);
  return g;
}

std::vector<std::complex<double>> ar_characteristic_roots(const Eigen::VectorXd& a) {
  const int p = static_cast<int>(a.size());
  std::vector<std::complex<double>> roots;
  if (p == 0) return roots;
  // Companion matrix of lambda^p - a_1 lambda^{p-1} - ... - a_p; its
  // eigenvalues are the reciprocals of the roots of A(z).
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) comp(0, i) = a(i);
  for (int i = 1; i < p; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
  for (int i = 0; i < p; ++i) roots.push_back(solver.eigenvalues()(i));
  return roots;
}

bool ar_polynomial_stable(const Eigen::VectorXd& a, double tol) {
  for (const auto& lambda : ar_characteristic_roots(a))
    if (std::abs(lambda) >= 1.0 - tol) return false;
  return true;
}

HammersteinModel::HammersteinModel(Eigen::VectorXd a, Eigen::VectorXd b,
                                   Eigen::VectorXd c,
                                   std::vector<BasisFunction> basis)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), basis_(std::move(basis)) {
  if (b_.size() < 1)
    throw std::invalid_argument("HammersteinModel: q must be >= 1");
  if (b_.squaredNorm() == 0.0)
    throw std::invalid_argument("HammersteinModel: gain vector b must be nonzero");
  if (c_.size() != static_cast<Eigen::Index>(basis_.size()))
    throw std::invalid_argument("HammersteinModel: c and basis sizes differ");
  if (basis_.empty())
    throw std::invalid_argument("HammersteinModel: at least one basis function");
  if (!ar_polynomial_stable(a_)) {
    std::ostringstream msg;
    msg << "HammersteinModel: A(z) unstable; characteristic roots:";
    for (const auto& r : ar_characteristic_roots(a_))
      msg << " (" << r.real() << (r.imag() < 0 ? "" : "+") << r.imag() << "i)";
    throw std::invalid_argument(msg.str());
  }
}

double HammersteinModel::nonlinearity(double u) const {
  double f = 0.0;
  for (int j = 0; j < m(); ++j) f += c_(j) * basis_[static_cast<std::size_t>(j)](u);
  return f;
}

double HammersteinModel::basis_gram_relative_rank(int grid_points) const {
  const double lo = basis_.front().lo();
  const double hi = basis_.front().hi();
  const int cols = m() + 1;
  Eigen::MatrixXd samples(grid_points, cols);
  for (int i = 0; i < grid_points; ++i) {
    const double x = lo + (hi - lo) * (i + 0.5) / grid_points;
    samples(i, 0) = 1.0;
    for (int j = 0; j < m(); ++j)
      samples(i, j + 1) = basis_[static_cast<std::size_t>(j)](x);
  }
  const Eigen::MatrixXd gram = samples.transpose() * samples / grid_points;
  const auto eig = jacobi_eigensolve(gram);
  return eig.values(0) / eig.values(cols - 1);
}

IoRecord simulate(const HammersteinModel& model, const std::vector<double>& inputs,
                  const std::vector<double>& noise,
                  const Eigen::VectorXd& y_init) {
  if (inputs.size() != noise.size())
    throw std::invalid_argument("simulate: inputs and noise lengths differ");
  if (y_init.size() != model.p())
    throw std::invalid_argument("simulate: y_init must have p entries");
  for (double u : inputs)
    for (const auto& g : model.basis())
      if (!g.contains(u))
        throw std::invalid_argument("simulate: input outside basis domain");

  const int n = static_cast<int>(inputs.size());
  const int p = model.p(), q = model.q();
  IoRecord io;
  io.u = inputs;
  io.y.resize(static_cast<std::size_t>(n));

  // t is the 1-based output index; y_init(i) holds y_{-i}.
  auto y_at = [&](int t) -> double {
    if (t >= 1) return io.y[static_cast<std::size_t>(t) - 1];
    return y_init(-t);
  };
  for (int t = 1; t <= n; ++t) {
    double y = noise[static_cast<std::size_t>(t) - 1];
    for (int i = 1; i <= p; ++i) y += model.a()(i - 1) * y_at(t - i);
    for (int i = 1; i <= q; ++i) {
      const int u_idx = t - i;
      if (u_idx >= 1)
        y += model.b()(i - 1) *
             model.nonlinearity(io.u[static_cast<std::size_t>(u_idx) - 1]);
    }
    io.y[static_cast<std::size_t>(t) - 1] = y;
  }
  return io;
}

std::vector<RegressionSample> build_regressors(
    const IoRecord& io, int p, int q, const std::vector<BasisFunction>& basis) {
  if (io.u.size() != io.y.size())
    throw std::invalid_argument("build_regressors: misaligned io record");
  const int n = static_cast<int>(io.u.size());
  const int m = static_cast<int>(basis.size());
  const int dim = p + q * m;
  std::vector<RegressionSample> samples;

  const int first_k = std::max(std::max(p, q), 1);
  for (int k = first_k; k <= n - 1; ++k) {
    RegressionSample s;
    s.phi.resize(dim);
    int pos = 0;
    for (int i = 0; i < p; ++i)
      s.phi(pos++) = io.y[static_cast<std::size_t>(k - i) - 1];
    for (int i = 0; i < q; ++i) {
      const double u = io.u[static_cast<std::size_t>(k - i) - 1];
      for (int j = 0; j < m; ++j)
        s.phi(pos++) = basis[static_cast<std::size_t>(j)](u);
    }
    s.y = io.y[static_cast<std::size_t>(k)];  // y_{k+1}
    samples.push_back(std::move(s));
  }
  return samples;
}

PackedTheta pack_theta(const HammersteinModel& model) {
  PackedTheta packed;
  packed.p = model.p();
  packed.q = model.q();
  packed.m = model.m();
  packed.theta.resize(packed.p + packed.q * packed.m);
  int pos = 0;
  for (int i = 0; i < packed.p; ++i) packed.theta(pos++) = model.a()(i);
  for (int i = 0; i < packed.q; ++i)
    for (int j = 0; j < packed.m; ++j)
      packed.theta(pos++) = model.b()(i) * model.c()(j);
  return packed;
}

Eigen::MatrixXd unpack_M(const Eigen::VectorXd& beta, int p, int q, int m) {
  if (beta.size() != p + q * m)
    throw std::invalid_argument("unpack_M: beta dimension mismatch");
  Eigen::MatrixXd mat(q, m);
  for (int i = 0; i < q; ++i)
    for (int l = 0; l < m; ++l) mat(i, l) = beta(p + i * m + l);
  return mat;
}

std::set<int> effective_basis_zeros(const SparseEstimate& sparse_beta, int p,
                                    int q, int m) {
  const Eigen::MatrixXd mat = unpack_M(sparse_beta.beta, p, q, m);
  std::set<int> zeros;
  for (int l = 0; l < m; ++l)
    if (mat.col(l).cwiseAbs().maxCoeff() == 0.0) zeros.insert(l + 1);
  return zeros;
}

RankOneFactors recover_factors(const Eigen::MatrixXd& m_matrix, double tol,
                               int max_iters) {
  if (m_matrix.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("recover_factors: all-zero matrix");
  if (!(tol > 0.0))
    throw std::invalid_argument("recover_factors: tol must be positive");

  const Eigen::MatrixXd gram = m_matrix.transpose() * m_matrix;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m_matrix.cols()).normalized();
  bool converged = false;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd next = gram * v;
    const double norm = next.norm();
    if (norm == 0.0) {
      // Started orthogonal to the range; perturb deterministically.
      v(it % v.size()) += 1.0;
      v.normalize();
      continue;
    }
    next /= norm;
    if (next.dot(v) < 0.0) next = -next;
    const double change = (next - v).norm();
    v = next;
    if (change < tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw numeric_failure("recover_factors: power iteration did not converge");

  RankOneFactors out;
  out.b_hat = (m_matrix * v).normalized();
  for (int i = 0; i < out.b_hat.size(); ++i) {
    if (out.b_hat(i) != 0.0) {
      if (out.b_hat(i) < 0.0) out.b_hat = -out.b_hat;
      break;
    }
  }
  out.c_hat = m_matrix.transpose() * out.b_hat;
  return out;
}

BoundResult n0_bound(const BoundInputs& in) {
  if (!(in.c0 > 0.0 && in.c2 > 0.0 && in.c3 > 0.0 && in.c5 > 0.0 && in.m_const > 0.0))
    throw std::invalid_argument("n0_bound: constants must be positive");
  if (!(in.epsilon > 0.0 && in.epsilon < 0.5))
    throw std::invalid_argument("n0_bound: epsilon must lie in (0, 1/2)");

  BoundResult out;
  out.k1 = std::pow(std::sqrt(in.c0) / in.m_const, 2.0 / (1.0 - 2.0 * in.epsilon));
  out.k2 = std::pow(2.0 * in.m_const / in.c5, 1.0 / in.epsilon);
  const double t1 = 47.0 / in.c2;
  const double t2 = (2.0 * out.k1 / in.c3) * std::log(in.c2 * out.k1 / in.c3);
  const double t3 = (2.0 * out.k2 / in.c3) * std::log(in.c2 * out.k2 / in.c3);
  out.n0 = std::max(t1, std::max(t2, t3));
  return out;
}

double optimal_m(double c0, double c5, double epsilon) {
  return std::pow(2.0, 2.0 * epsilon - 1.0) * std::pow(c0, epsilon) *
         std::pow(c5, 1.0 - 2.0 * epsilon);
}

double n0_optimal(double c0, double c2, double c3, double c5, double epsilon) {
  if (!(c0 > 0.0 && c2 > 0.0 && c3 > 0.0 && c5 > 0.0))
    throw std::invalid_argument("n0_optimal: constants must be positive");
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw std::invalid_argument("n0_optimal: epsilon must lie in (0, 1/2)");

  const double ratio = 4.0 * c0 / (c5 * c5);
  const double value =
      std::max(47.0 / c2, (2.0 * ratio / c3) * std::log(c2 * ratio / c3));

  // Cross-check: the closed form must agree with the general bound at the
  // balancing M.
  BoundInputs balanced{c0, c2, c3, c5, optimal_m(c0, c5, epsilon), epsilon};
  const double general = n0_bound(balanced).n0;
  const double scale = std::max(1.0, std::abs(value));
  if (std::abs(general - value) > 1e-9 * scale)
    throw numeric_failure("n0_optimal: closed form disagrees with general bound");
  return value;
}

}  // namespace sysid
