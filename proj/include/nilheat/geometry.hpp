#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nilheat/algebra.hpp"

namespace nilheat {

/// Multivariate polynomial over the group coordinates (double coefficients);
/// the cylinder functions of the log-Sobolev tests live here.
class Polynomial {
 public:
  explicit Polynomial(int nvars) : m_nvars(nvars) {}
  static Polynomial constant(int nvars, double c);
  static Polynomial coordinate(int nvars, int i);

  int nvars() const { return m_nvars; }
  const std::map<std::vector<int>, double>& terms() const { return m_terms; }

  void add_term(const std::vector<int>& expo, double c);
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(double c) const;

  double evaluate(const Vec& x) const;
  /// Exact partial derivative d/dx_i.
  Polynomial partial(int i) const;
  /// Euclidean gradient at a point.
  Vec euclidean_gradient(const Vec& x) const;

 private:
  int m_nvars;
  std::map<std::vector<int>, double> m_terms;
};

/// The symmetric matrix of the quadratic form
///   X -> <Ric X, X> = 1/4 sum_Y ||ad*_Y X||^2 - 1/2 sum_Y ||ad_Y X||^2
/// over the orthonormal basis, i.e. 1/4 sum B_Y B_Y^T - 1/2 sum B_Y^T B_Y
/// with B_Y = ad_Y.
Mat ricci_matrix(const LieAlgebra& alg);

struct RicciReport {
  Mat ricci;                        // dim x dim symmetric
  double k = 0.0;                   // -1/2 lambda_max(Q), Q = Gram of X -> ||[.,X]||^2
  double lambda_max = 0.0;
  double eigen_residual = 0.0;      // ||Q v - lambda v|| certificate
  double hs_norm_sq = 0.0;          // ||[.,.]||_2^2 (so k >= -hs/2)
  std::vector<double> witness_kpi;  // k_pi of sampled generated subalgebras
};

/// k and its certificate; optionally samples `witnesses` random generated
/// subalgebras and records their k_pi values.
RicciReport ricci_lower_bound(const LieAlgebra& alg, int witnesses = 0, std::uint64_t seed = 0);

/// k_pi of a subalgebra (same eigenvalue computation on its induced bracket).
double k_pi(const LieAlgebra& subalgebra);

/// Left-invariant gradient of a cylinder polynomial:
/// component i = d/de f(g * (e e_i)) at e = 0, computed exactly through the
/// polynomial group law (no finite differences).
Vec cylinder_gradient(const LieAlgebra& alg, const Polynomial& f, const Vec& g);

}  // namespace nilheat
