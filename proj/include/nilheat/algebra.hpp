#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nilheat/errors.hpp"

namespace nilheat {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// One nonzero structure constant: [e_i, e_j] has component `value` on e_k.
struct Triplet {
  int i, j, k;
  double value;
};

/// A finite-dimensional nilpotent Lie algebra with a declared orthonormal
/// basis.  The bracket is stored as a sparse structure-constant tensor
/// together with per-(i,j) slices for the hot contraction loops.  Instances
/// are immutable after construction and safe to share across threads.
class LieAlgebra {
 public:
  LieAlgebra(int dim, int step, std::vector<Triplet> triplets, std::string label);

  int dim() const { return m_dim; }
  int step() const { return m_step; }
  const std::string& label() const { return m_label; }
  /// Nonzero entries sorted by (i,j,k).
  const std::vector<Triplet>& triplets() const { return m_triplets; }

  /// [x, y] = sum_{i,j} x_i y_j C[i][j][.]
  Vec bracket(const Vec& x, const Vec& y) const;
  /// [e_i, e_j]
  Vec bracket_basis(int i, int j) const;
  /// In-place accumulate out += scale * [x, y]; avoids temporaries in loops.
  void bracket_acc(const Vec& x, const Vec& y, double scale, Vec& out) const;

  /// Matrix of y -> [x, y].
  Mat ad(const Vec& x) const;
  /// Matrix of y -> [e_i, y].
  Mat ad_basis(int i) const;

  /// ||[.,.]||_2^2 = sum_{i,j} ||[e_i,e_j]||^2 (recorded at construction).
  double bracket_hs_norm_sq() const { return m_hs_norm_sq; }

  void check_conform(const Vec& x) const {
    if (x.size() != m_dim) throw ConformanceError("vector does not conform to algebra dimension");
  }

 private:
  int m_dim;
  int m_step;
  std::string m_label;
  std::vector<Triplet> m_triplets;
  // nonempty (i,j) slices: list of (k, value) per pair, plus a dense index
  struct Slice {
    int i, j;
    std::vector<std::pair<int, double>> kv;
  };
  std::vector<Slice> m_slices;
  std::vector<int> m_slice_of;  // dim*dim -> index into m_slices, or -1
  double m_hs_norm_sq = 0.0;
};

/// Left-nested bracket [[...[v_1,v_2],...],v_n]; n = 1 returns v_1.
Vec iterated_bracket(const LieAlgebra& alg, const std::vector<Vec>& vectors);

/// ||F_n||_2^2 = sum over basis n-tuples of ||[[...[e_{i1},e_{i2}],...],e_{in}]||^2.
/// Computed by the Gram recursion G_{n+1} = sum_j A_j G_n A_j^T with
/// A_j : x -> [x, e_j]; equals the brute-force enumeration exactly.
double iterated_bracket_hs_norm_sq(const LieAlgebra& alg, int n);

/// Diagnostics from checking the Lie algebra axioms on the stored tensor.
struct ValidationReport {
  double max_antisymmetry = 0.0;  // max |C[i][j][k] + C[j][i][k]|
  double max_jacobi = 0.0;        // max over basis triples of the cyclic sum (max-abs component)
  int detected_step = 1;          // largest n with ||F_n||_2 > 1e-12
  int declared_step = 1;
  double hs_norm_sq = 0.0;
  bool pass = false;

  std::string summary() const;
};

ValidationReport validate(const LieAlgebra& alg);

// ---- constructors ---------------------------------------------------------

LieAlgebra make_abelian(int dim);

/// Central extension [(h1,h2),(h1',h2')] = (0, omega(h1,h1')) on R^{d1} + R^{d2}.
/// omega is a d1 x d1 x d2 coefficient array (index (a,b,c) at a*d1*d2+b*d2+c)
/// and must be antisymmetric in (a,b).
LieAlgebra make_heisenberg_like(int d1, int d2, const std::vector<double>& omega);

/// The classical 3-dimensional Heisenberg algebra: [X,Y] = Z.
LieAlgebra make_heisenberg3();

/// Free nilpotent Lie algebra on `generators` generators of step `step`,
/// realized on a Hall basis declared orthonormal.  The dimension is
/// cross-checked against the Witt formula.
LieAlgebra make_free_nilpotent(int generators, int step);

/// Witt formula: dim of the free nilpotent algebra on d generators, step r.
int witt_dimension(int d, int r);

/// Extension of an abelian H = R^{dH} over `base` through a linear map
/// beta : H -> base (rows of `beta` are the images of the H basis vectors):
/// [(X,V),(Y,U)] = (0, [bX,bY] + [bX,U] - [bY,V] + [V,U]).
LieAlgebra make_beta_extension(const LieAlgebra& base, int dH, const Mat& beta);

/// Seed-deterministic nilpotent algebra with Hilbert-Schmidt decay.  Built
/// inside a fixed infinite strictly (block-)triangular matrix algebra and
/// rescaled by a diagonal change of basis, so antisymmetry, Jacobi and the
/// graded layering hold exactly and instances nest: the dim-D tensor
/// restricted to indices < D' equals the dim-D' instance for the same seed.
LieAlgebra make_random_hs(int dim, int step, double gamma, std::uint64_t seed);

// ---- subalgebras -----------------------------------------------------------

struct Subalgebra {
  LieAlgebra algebra;  // induced bracket on an orthonormal basis of the closure
  Mat embedding;       // dim x subdim; columns are the basis vectors in ambient coords
};

/// Closes the span of `generators` under the bracket (terminates by
/// nilpotency), orthonormalizes, and returns the subalgebra with its
/// embedding.  Throws RankError if the generators are dependent.
Subalgebra generated_subalgebra(const LieAlgebra& alg, const std::vector<Vec>& generators);

// ---- serialization ---------------------------------------------------------

/// Structured text (JSON) document {label, dim, step, triplets:[[i,j,k,value]]}
/// with values printed to 17 significant digits; save(load(doc)) is
/// byte-identical for documents produced by save.
std::string algebra_to_json(const LieAlgebra& alg);
LieAlgebra algebra_from_json(const std::string& text);
void save_algebra(const LieAlgebra& alg, const std::string& path);
LieAlgebra load_algebra(const std::string& path);

}  // namespace nilheat
