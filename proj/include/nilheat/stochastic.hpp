#pragma once

#include <cstdint>
#include <vector>

#include "nilheat/algebra.hpp"
#include "nilheat/combinatorics.hpp"

namespace nilheat {

/// A Brownian path on the grid j*t_end/steps, stored as its increments.
/// Deterministic in (seed, steps, dim).  For power-of-two step counts the
/// grid values come from a seed-keyed dyadic midpoint tree, so the 2N-step
/// path refines the N-step path exactly (pairwise sums of increments match).
struct BrownianPath {
  double t_end = 1.0;
  int steps = 0;
  int dim = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd increments;  // steps x dim

  Vec endpoint() const { return increments.colwise().sum().transpose(); }
  double grid_time(int j) const { return t_end * static_cast<double>(j) / steps; }
};

BrownianPath sample_path(int dim, double t_end, int steps, std::uint64_t seed);

/// Debug dump of a path: header line (dim, steps, t_end, seed) followed by
/// one text row of increments per step; round-trips bit-exactly.
std::string path_to_text(const BrownianPath& path);
BrownianPath path_from_text(const std::string& text);

/// Orthogonal projection onto the first `ell` coordinates; grid and
/// randomness shared with the input (coupled pair).
BrownianPath project_path(const BrownianPath& path, int ell);

/// Truncated iterated-integral tensors of a path, Ito left-point convention:
/// level l entry (i_1..i_l) approximates the integral over the ordered
/// simplex of dB^{i_1}...dB^{i_l}.  An optional per-level time exponent
/// weights level l by (grid time)^e_l at the moment its increment is consumed.
struct Signature {
  int dim = 0;
  int level = 0;
  std::vector<std::vector<double>> levels;  // levels[l-1] has size dim^l
};

Signature weighted_signature(const BrownianPath& path, int level,
                             const std::vector<int>& time_exponents = {},
                             std::size_t budget = 10'000'000);

/// The full expansion of the group Brownian motion for one algebra: every
/// (n, sigma, m, alpha) with its exact prefactor c_n^sigma / 2^{n-m}, the
/// f_alpha decomposition and the contraction operator.  Terms whose operator
/// is identically zero are flagged and skipped during evaluation.
class TermTable {
 public:
  struct Term {
    int n, m;
    std::vector<int> sigma;
    AlphaIndex alpha;
    Rational prefactor;
    SimplexPolynomial falpha;
    ContractionOperator op;
    bool skip = false;
    // flattened evaluation plan: (profile index, power of t, coefficient)
    struct Monomial {
      int profile;
      int tpow;
      double coef;
    };
    std::vector<Monomial> plan;
  };

  explicit TermTable(const LieAlgebra& alg, std::size_t budget = 10'000'000);

  const LieAlgebra& algebra() const { return *m_alg; }
  const std::vector<Term>& terms() const { return m_terms; }

  /// g_t per Definition of the group Brownian motion: the n=1 term is B_t,
  /// higher terms contract F-hat against f-tilde-weighted signatures.
  Vec group_bm_formula(const BrownianPath& path) const;

 private:
  const LieAlgebra* m_alg;
  std::size_t m_budget;
  std::vector<Term> m_terms;
  std::vector<std::vector<int>> m_profiles;  // distinct time-exponent profiles
};

/// Oracle for the same object: left-to-right BCHD product of the increments,
/// i.e. the exact solution driven by the piecewise-linear interpolation.
Vec group_bm_euler(const LieAlgebra& alg, const BrownianPath& path);

/// Deterministic Strichartz evaluation for a piecewise-linear driver given by
/// its knot values (starting point included).  Exact simplex integration
/// against the piecewise-constant derivative; equals the product of segment
/// exponentials up to roundoff.
Vec strichartz_smooth(const LieAlgebra& alg, const std::vector<Vec>& knots);

/// Tensor-algebra (Chen) product of two truncated signatures.
Signature signature_concat(const Signature& a, const Signature& b);

}  // namespace nilheat
