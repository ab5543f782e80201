#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "nilheat/algebra.hpp"
#include "nilheat/rational.hpp"

namespace nilheat {

/// Permutations are in one-line notation with values 1..n.
bool is_permutation(const std::vector<int>& sigma);

/// Number of descents e(sigma) = #{j < n : sigma(j) > sigma(j+1)}.
int permutation_errors(const std::vector<int>& sigma);

/// All permutations of (1..n) in lexicographic order.
std::vector<std::vector<int>> all_permutations(int n);

/// c_n^sigma = (-1)^{e(sigma)} / (n^2 binomial(n-1, e(sigma))), exact.
Rational strichartz_coefficient(int n, const std::vector<int>& sigma);

/// A multi-index alpha over {1,2} of length m with sum n: slot i consumes one
/// Brownian differential (alpha_i = 1) or one paired Ito-correction time
/// integral (alpha_i = 2).
struct AlphaIndex {
  std::vector<int> alpha;
  int n = 0;  // sum of entries
  int m = 0;  // length
  int p = 0;  // count of 1s
  int q = 0;  // count of 2s
};

AlphaIndex make_alpha(std::vector<int> alpha);

/// J_n^m: all tuples over {1,2} of length m summing to n, lexicographic.
/// Empty when m is outside [ceil(n/2), n].
std::vector<AlphaIndex> multi_index_set(int n, int m);

/// J_n: union of J_n^m over admissible m, ordered by m then lexicographic.
std::vector<AlphaIndex> multi_index_all(int n);

/// Sparse multivariate polynomial with exact rational coefficients.
/// Exponent keys all have the same length (the variable count).
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(int nvars) : m_nvars(nvars) {}
  static RationalPoly constant(int nvars, const Rational& c);

  int nvars() const { return m_nvars; }
  const std::map<std::vector<int>, Rational>& terms() const { return m_terms; }
  bool is_zero() const { return m_terms.empty(); }
  int total_degree() const;

  void add_term(const std::vector<int>& expo, const Rational& c);
  RationalPoly operator+(const RationalPoly& o) const;
  RationalPoly operator-(const RationalPoly& o) const;
  RationalPoly operator*(const RationalPoly& o) const;
  bool operator==(const RationalPoly& o) const { return m_terms == o.m_terms; }

  /// Integrate in variable `var` from `lower` to `upper`, where each bound is
  /// either another variable index or -1 meaning the constant 0.
  RationalPoly integrate(int var, int lower, int upper) const;

  /// Keep only the listed variables (all others must be absent) and reindex.
  RationalPoly reindex(const std::vector<int>& keep, int new_nvars) const;

  double evaluate(const std::vector<double>& x) const;
  std::string str(const std::vector<std::string>& names) const;

 private:
  int m_nvars = 0;
  std::map<std::vector<int>, Rational> m_terms;
};

/// f_alpha: the polynomial in s_1..s_p and t obtained by integrating out the
/// paired time variables over their sub-simplices, reindexed so the surviving
/// variables are s_1..s_p (variable p is t).  Decomposed by powers of t:
/// f = sum_a b_a t^a ftilde_a(s) with b_a = 1 and deg ftilde_a <= q - a.
struct SimplexPolynomial {
  AlphaIndex alpha;
  RationalPoly f;  // nvars = p+1 (s_1..s_p, then t)
  struct TPart {
    int a;
    Rational b;
    RationalPoly ftilde;  // nvars = p (s only)
  };
  std::vector<TPart> parts;
};

SimplexPolynomial f_alpha(const AlphaIndex& alpha);

/// The permutation sigma' with F_n^{sigma'}(rearranged) = F_n^{sigma}(original),
/// where "rearranged" places the p Brownian slots first (order kept) and the
/// q adjacent index pairs after them (order kept).
std::vector<int> sigma_prime(const std::vector<int>& sigma, const AlphaIndex& alpha);

/// The contraction F-hat_n^{sigma,alpha}: tensor power p of the algebra to the
/// algebra, with the q paired orthonormal indices summed out.  Materialized
/// densely when dim^(p+1) fits the budget, else applied lazily.
class ContractionOperator {
 public:
  ContractionOperator() = default;

  int n() const { return m_n; }
  int p() const { return m_p; }
  int q() const { return m_q; }
  bool lazy() const { return m_lazy; }
  bool identically_zero() const { return m_zero; }
  double hs_norm_sq() const { return m_hs_norm_sq; }
  const std::vector<int>& sigma_prime_perm() const { return m_sigma_prime; }

  /// Value on a basis p-tuple (empty tuple allowed when p = 0).
  Vec apply_basis(const LieAlgebra& alg, const std::vector<int>& tuple) const;

  /// Contraction against a dense level-p tensor (size dim^p, row-major).
  Vec contract(const LieAlgebra& alg, const std::vector<double>& tensor) const;

  friend ContractionOperator contraction_operator(const LieAlgebra&, int, const std::vector<int>&,
                                                  const AlphaIndex&, std::size_t);

 private:
  int m_n = 0, m_p = 0, m_q = 0, m_dim = 0;
  bool m_lazy = false, m_zero = true;
  double m_hs_norm_sq = 0.0;
  std::vector<int> m_sigma_prime;
  std::vector<double> m_dense;  // dim^p x dim, tuple-major

  Vec evaluate_raw(const LieAlgebra& alg, const std::vector<int>& tuple) const;
};

/// Builds F-hat for (n, sigma, alpha).  For n > alg.step() the operator is
/// identically zero.  Throws ResourceError when dim^p exceeds `budget`.
ContractionOperator contraction_operator(const LieAlgebra& alg, int n,
                                         const std::vector<int>& sigma, const AlphaIndex& alpha,
                                         std::size_t budget = 10'000'000);

}  // namespace nilheat
