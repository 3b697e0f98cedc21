#pragma once

#include <Eigen/Dense>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "sysid/rls.hpp"
#include "sysid/sparsify.hpp"

namespace sysid {

// Scalar basis function g_j with a declared domain.  Built-in families:
// monomial x^degree and Legendre polynomials mapped onto [lo, hi].
class BasisFunction {
 public:
  static BasisFunction monomial(int degree, double lo = -1.0, double hi = 1.0);
  static BasisFunction legendre(int degree, double lo = -1.0, double hi = 1.0);
  static BasisFunction custom(std::string name, std::function<double(double)> fn,
                              double lo, double hi);

  double operator()(double x) const { return fn_(x); }
  bool contains(double x) const { return x >= lo_ && x <= hi_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::string& name() const { return name_; }
  const std::string& kind() const { return kind_; }
  int degree() const { return degree_; }

 private:
  BasisFunction() = default;
  std::string kind_;
  std::string name_;
  int degree_ = 0;
  double lo_ = -1.0, hi_ = 1.0;
  std::function<double(double)> fn_;
};

// Hammerstein system: static nonlinearity f(u) = sum c_j g_j(u) feeding a
// linear ARX block y_{k+1} = sum a_i y_{k+1-i} + sum b_i f(u_{k+1-i}) + w.
// Construction enforces stability of A(z) = 1 - a_1 z - ... - a_p z^p
// (all roots strictly outside the closed unit disk) and ||b|| > 0.
class HammersteinModel {
 public:
  HammersteinModel(Eigen::VectorXd a, Eigen::VectorXd b, Eigen::VectorXd c,
                   std::vector<BasisFunction> basis);

  int p() const { return static_cast<int>(a_.size()); }
  int q() const { return static_cast<int>(b_.size()); }
  int m() const { return static_cast<int>(basis_.size()); }
  const Eigen::VectorXd& a() const { return a_; }
  const Eigen::VectorXd& b() const { return b_; }
  const Eigen::VectorXd& c() const { return c_; }
  const std::vector<BasisFunction>& basis() const { return basis_; }

  double nonlinearity(double u) const;

  // Smallest relative eigenvalue of the Gram matrix of {1, g_1, .., g_m}
  // sampled on a uniform grid over the basis domain; values below ~1e-8
  // indicate a numerically dependent basis.
  double basis_gram_relative_rank(int grid_points = 256) const;

 private:
  Eigen::VectorXd a_, b_, c_;
  std::vector<BasisFunction> basis_;
};

// Roots of A(z) via the companion matrix of the AR recursion.
std::vector<std::complex<double>> ar_characteristic_roots(const Eigen::VectorXd& a);
bool ar_polynomial_stable(const Eigen::VectorXd& a, double tol = 1e-9);

struct IoRecord {
  std::vector<double> u;  // u_1 .. u_n
  std::vector<double> y;  // y_1 .. y_n
};

// Runs the recursion forward.  y_init holds (y_0, y_{-1}, ..., y_{1-p});
// nonlinearity terms whose input index would be nonpositive are dropped.
IoRecord simulate(const HammersteinModel& model, const std::vector<double>& inputs,
                  const std::vector<double>& noise,
                  const Eigen::VectorXd& y_init);

// phi_k = (y_k .. y_{k+1-p}, g_1(u_k) .. g_m(u_k), ..., g_1(u_{k+1-q}) ..
// g_m(u_{k+1-q})) paired with y_{k+1}; emitted for k = max(p,q) .. n-1 so
// every lag is real data.
std::vector<RegressionSample> build_regressors(const IoRecord& io, int p, int q,
                                               const std::vector<BasisFunction>& basis);

struct PackedTheta {
  Eigen::VectorXd theta;  // (a_1..a_p, b_1 c_1..b_1 c_m, ..., b_q c_1..b_q c_m)
  int p = 0, q = 0, m = 0;
};

PackedTheta pack_theta(const HammersteinModel& model);

// Reads entries p+1 .. p+q*m of beta into the q x m matrix with
// column l = (b_1 c_l, ..., b_q c_l)^T.
Eigen::MatrixXd unpack_M(const Eigen::VectorXd& beta, int p, int q, int m);

// Indices l whose entire column M(l) is zero in the thresholded estimate:
// the identified noneffective basis functions.
std::set<int> effective_basis_zeros(const SparseEstimate& sparse_beta, int p,
                                    int q, int m);

struct RankOneFactors {
  Eigen::VectorXd b_hat;  // ||b_hat|| = 1, first nonzero entry positive
  Eigen::VectorXd c_hat;  // M^T b_hat
};

// Best rank-1 factorization by power iteration on M^T M.
RankOneFactors recover_factors(const Eigen::MatrixXd& m_matrix, double tol = 1e-12,
                               int max_iters = 10000);

// Constants entering the finite-observation support bound.
struct BoundInputs {
  double c0 = 1.0;       // LS error constant
  double c2 = 1.0;       // upper excitation growth constant
  double c3 = 1.0;       // lower eigenvalue growth constant
  double c5 = 1.0;       // min |nonzero theta entry|
  double m_const = 1.0;  // threshold scale M
  double epsilon = 0.25; // threshold exponent, in (0, 1/2)
};

struct BoundResult {
  double k1 = 0.0;
  double k2 = 0.0;
  double n0 = 0.0;
};

// N0 = max{47/C2, (2 k1/C3) log(C2 k1/C3), (2 k2/C3) log(C2 k2/C3)} with
// k1 = (sqrt(C0)/M)^(2/(1-2 eps)) and k2 = (2M/C5)^(1/eps).  Terms whose
// log argument is <= 1 contribute their literal (possibly nonpositive)
// value to the max.
BoundResult n0_bound(const BoundInputs& inputs);

// M chosen to balance k1 and k2: M = 2^(2 eps - 1) C0^eps C5^(1 - 2 eps),
// giving max{47/C2, (8 C0/(C3 C5^2)) log(4 C2 C0/(C3 C5^2))}.
double optimal_m(double c0, double c5, double epsilon);
double n0_optimal(double c0, double c2, double c3, double c5, double epsilon);

}  // namespace sysid
