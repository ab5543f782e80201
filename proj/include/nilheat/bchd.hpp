#pragma once

#include <cstdint>
#include <vector>

#include "nilheat/algebra.hpp"
#include "nilheat/rational.hpp"

namespace nilheat {

/// One term of the Baker-Campbell-Hausdorff-Dynkin series:
/// a^k_{n,m} ad_g^{n_1} ad_h^{m_1} ... ad_g^{n_k} ad_h^{m_k} g
/// with a^k_{n,m} = (-1)^k / ((k+1) m! n! (|n|+1)).
struct BchdTerm {
  int k;
  std::vector<int> n, m;
  Rational coefficient;
};

/// All terms with n_i + m_i > 0 and |n|+|m| <= step-1, ordered by k then
/// lexicographically in n, then in m.  Cached per step; thread-safe.
const std::vector<BchdTerm>& bchd_terms(int step);

/// Coefficients beta_l of the left-translation differential
/// dL_g = sum_l beta_l ad_g^l, derived exactly from the BCHD table
/// (beta_0 = 1, beta_1 = 1/2, beta_2 = 1/12, ...).
std::vector<Rational> left_jacobian_series(int step);

/// Coefficients c_l of the inverse map (left logarithmic derivative):
/// L_{g^{-1}*} v = sum_l c_l ad_g^l v with c_0 = 1.
std::vector<Rational> left_log_derivative_series(int step);

/// BCHD group product on coordinate vectors, truncated by nilpotency.
Vec multiply(const LieAlgebra& alg, const Vec& g, const Vec& h);

/// g^{-1} = -g in exponential coordinates.
inline Vec inverse(const Vec& g) { return -g; }

/// Matrix of the left-translation differential dL_g at the identity.
Mat left_jacobian(const LieAlgebra& alg, const Vec& g);

/// Length of the piecewise-linear path through `knots`, measured in the
/// left-invariant metric:  integral of ||phi' + sum_l c_l ad_phi^l phi'||
/// by Gauss-Legendre quadrature per segment.
double path_length(const LieAlgebra& alg, const std::vector<Vec>& knots, int quad_order = 16);

struct DistanceConfig {
  int interior_knots = 6;
  int iterations = 200;  // coordinate-descent sweeps per restart
  int restarts = 3;
  int quad_order = 8;
  std::uint64_t seed = 0;
};

/// Upper bound on the Riemannian distance d(e,h): the best of ||h|| and an
/// optimized piecewise-linear path length.  Deterministic in cfg.seed.
double distance_upper(const LieAlgebra& alg, const Vec& h, const DistanceConfig& cfg = {});

/// Nodes/weights of n-point Gauss-Legendre quadrature on [0,1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace nilheat
