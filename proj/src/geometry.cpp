#include "nilheat/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "nilheat/bchd.hpp"
#include "nilheat/rng.hpp"

namespace nilheat {

// ---- Polynomial --------------------------------------------------------------

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(std::vector<int>(nvars, 0), c);
  return p;
}

Polynomial Polynomial::coordinate(int nvars, int i) {
  Polynomial p(nvars);
  std::vector<int> e(nvars, 0);
  e[i] = 1;
  p.add_term(e, 1.0);
  return p;
}

void Polynomial::add_term(const std::vector<int>& expo, double c) {
  if (static_cast<int>(expo.size()) != m_nvars)
    throw ArgumentError("Polynomial: exponent arity mismatch");
  if (c == 0.0) return;
  m_terms[expo] += c;
  if (m_terms[expo] == 0.0) m_terms.erase(expo);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out = *this;
  for (const auto& [e, c] : o.m_terms) out.add_term(e, c);
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial out(m_nvars);
  for (const auto& [ea, ca] : m_terms)
    for (const auto& [eb, cb] : o.m_terms) {
      std::vector<int> e(m_nvars);
      for (int i = 0; i < m_nvars; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

Polynomial Polynomial::scaled(double c) const {
  Polynomial out(m_nvars);
  for (const auto& [e, v] : m_terms) out.add_term(e, v * c);
  return out;
}

double Polynomial::evaluate(const Vec& x) const {
  double acc = 0.0;
  for (const auto& [e, c] : m_terms) {
    double t = c;
    for (int v = 0; v < m_nvars; ++v)
      for (int r = 0; r < e[v]; ++r) t *= x[v];
    acc += t;
  }
  return acc;
}

Polynomial Polynomial::partial(int i) const {
  Polynomial out(m_nvars);
  for (const auto& [e, c] : m_terms) {
    if (e[i] == 0) continue;
    std::vector<int> ne = e;
    ne[i] -= 1;
    out.add_term(ne, c * e[i]);
  }
  return out;
}

Vec Polynomial::euclidean_gradient(const Vec& x) const {
  Vec g = Vec::Zero(m_nvars);
  for (int i = 0; i < m_nvars; ++i) g[i] = partial(i).evaluate(x);
  return g;
}

// ---- Ricci -------------------------------------------------------------------

Mat ricci_matrix(const LieAlgebra& alg) {
  const int d = alg.dim();
  Mat ric = Mat::Zero(d, d);
  for (int y = 0; y < d; ++y) {
    const Mat B = alg.ad_basis(y);
    ric += 0.25 * B * B.transpose() - 0.5 * B.transpose() * B;
  }
  return 0.5 * (ric + ric.transpose());  // kill roundoff asymmetry
}

namespace {
Mat gram_matrix(const LieAlgebra& alg) {
  // Q_{ij} = sum_m <[e_m, e_i], [e_m, e_j]>  (Gram form of X -> ||[.,X]||_HS^2)
  const int d = alg.dim();
  Mat Q = Mat::Zero(d, d);
  for (int m = 0; m < d; ++m) {
    const Mat B = alg.ad_basis(m);
    Q += B.transpose() * B;
  }
  return 0.5 * (Q + Q.transpose());
}

double k_from_gram(const Mat& Q, double* lambda_max, double* residual) {
  Eigen::SelfAdjointEigenSolver<Mat> es(Q);
  if (es.info() != Eigen::Success) throw NumericError("ricci: eigensolver failed to converge");
  const int top = static_cast<int>(Q.rows()) - 1;
  const double lmax = es.eigenvalues()[top];
  if (lambda_max) *lambda_max = lmax;
  if (residual) {
    const Vec v = es.eigenvectors().col(top);
    *residual = (Q * v - lmax * v).norm();
  }
  return -0.5 * lmax;
}
}  // namespace

double k_pi(const LieAlgebra& subalgebra) {
  return k_from_gram(gram_matrix(subalgebra), nullptr, nullptr);
}

RicciReport ricci_lower_bound(const LieAlgebra& alg, int witnesses, std::uint64_t seed) {
  RicciReport rep;
  rep.ricci = ricci_matrix(alg);
  rep.hs_norm_sq = alg.bracket_hs_norm_sq();
  rep.k = k_from_gram(gram_matrix(alg), &rep.lambda_max, &rep.eigen_residual);

  KeyStream rng(key_combine(seed, 0x52696363694b5049ULL));
  const int d = alg.dim();
  for (int w = 0; w < witnesses; ++w) {
    const int count = 1 + static_cast<int>(rng.uniform() * std::max(1, d / 2));
    std::vector<Vec> gens;
    for (int i = 0; i < count; ++i) {
      Vec v(d);
      for (int c = 0; c < d; ++c) v[c] = rng.gaussian();
      gens.push_back(v);
    }
    const Subalgebra sub = generated_subalgebra(alg, gens);
    rep.witness_kpi.push_back(k_pi(sub.algebra));
  }
  return rep;
}

// ---- cylinder gradient --------------------------------------------------------

Vec cylinder_gradient(const LieAlgebra& alg, const Polynomial& f, const Vec& g) {
  alg.check_conform(g);
  if (f.nvars() != alg.dim())
    throw ConformanceError("cylinder_gradient: polynomial arity does not match algebra");
  // <grad f(g), e_i> = f'(g)(L_{g*} e_i); the left-translation differential is
  // polynomial in g, so this is exact.
  const Mat J = left_jacobian(alg, g);
  return J.transpose() * f.euclidean_gradient(g);
}

}  // namespace nilheat
