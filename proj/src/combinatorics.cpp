#include "nilheat/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace nilheat {

bool is_permutation(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  std::vector<bool> seen(n, false);
  for (int v : sigma) {
    if (v < 1 || v > n || seen[v - 1]) return false;
    seen[v - 1] = true;
  }
  return n > 0;
}

int permutation_errors(const std::vector<int>& sigma) {
  if (!is_permutation(sigma)) throw ArgumentError("permutation_errors: not a permutation");
  int e = 0;
  for (std::size_t j = 0; j + 1 < sigma.size(); ++j)
    if (sigma[j] > sigma[j + 1]) ++e;
  return e;
}

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Rational strichartz_coefficient(int n, const std::vector<int>& sigma) {
  if (static_cast<int>(sigma.size()) != n || !is_permutation(sigma))
    throw ArgumentError("strichartz_coefficient: sigma is not a permutation of 1..n");
  const int e = permutation_errors(sigma);
  const std::int64_t sign = (e % 2 == 0) ? 1 : -1;
  return Rational(sign, static_cast<std::int64_t>(n) * n * binomial_i64(n - 1, e));
}

AlphaIndex make_alpha(std::vector<int> alpha) {
  AlphaIndex a;
  a.alpha = std::move(alpha);
  a.m = static_cast<int>(a.alpha.size());
  for (int v : a.alpha) {
    if (v != 1 && v != 2) throw ArgumentError("alpha entries must be 1 or 2");
    a.n += v;
    if (v == 1)
      ++a.p;
    else
      ++a.q;
  }
  return a;
}

std::vector<AlphaIndex> multi_index_set(int n, int m) {
  std::vector<AlphaIndex> out;
  if (m < (n + 1) / 2 || m > n) return out;
  // q = n - m slots equal to 2; enumerate lexicographically
  std::vector<int> alpha(m, 1);
  std::function<void(int, int)> rec = [&](int pos, int remaining2) {
    if (m - pos < remaining2) return;
    if (pos == m) {
      if (remaining2 == 0) out.push_back(make_alpha(alpha));
      return;
    }
    alpha[pos] = 1;
    rec(pos + 1, remaining2);
    if (remaining2 > 0) {
      alpha[pos] = 2;
      rec(pos + 1, remaining2 - 1);
      alpha[pos] = 1;
    }
  };
  rec(0, n - m);
  return out;
}

std::vector<AlphaIndex> multi_index_all(int n) {
  std::vector<AlphaIndex> out;
  for (int m = (n + 1) / 2; m <= n; ++m) {
    auto part = multi_index_set(n, m);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

// ---- RationalPoly ----------------------------------------------------------

RationalPoly RationalPoly::constant(int nvars, const Rational& c) {
  RationalPoly p(nvars);
  p.add_term(std::vector<int>(nvars, 0), c);
  return p;
}

int RationalPoly::total_degree() const {
  int deg = 0;
  for (const auto& [e, c] : m_terms) deg = std::max(deg, std::accumulate(e.begin(), e.end(), 0));
  return deg;
}

void RationalPoly::add_term(const std::vector<int>& expo, const Rational& c) {
  if (static_cast<int>(expo.size()) != m_nvars)
    throw ArgumentError("RationalPoly: exponent arity mismatch");
  if (c.is_zero()) return;
  auto it = m_terms.find(expo);
  if (it == m_terms.end()) {
    m_terms.emplace(expo, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) m_terms.erase(it);
  }
}

RationalPoly RationalPoly::operator+(const RationalPoly& o) const {
  RationalPoly out = *this;
  for (const auto& [e, c] : o.m_terms) out.add_term(e, c);
  return out;
}

RationalPoly RationalPoly::operator-(const RationalPoly& o) const {
  RationalPoly out = *this;
  for (const auto& [e, c] : o.m_terms) out.add_term(e, -c);
  return out;
}

RationalPoly RationalPoly::operator*(const RationalPoly& o) const {
  RationalPoly out(m_nvars);
  for (const auto& [ea, ca] : m_terms)
    for (const auto& [eb, cb] : o.m_terms) {
      std::vector<int> e(m_nvars);
      for (int i = 0; i < m_nvars; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

RationalPoly RationalPoly::integrate(int var, int lower, int upper) const {
  RationalPoly out(m_nvars);
  for (const auto& [e, c] : m_terms) {
    const int deg = e[var] + 1;
    const Rational coef = c / Rational(deg);
    // upper bound substitution
    {
      std::vector<int> eu = e;
      eu[var] = 0;
      if (upper >= 0)
        eu[upper] += deg;
      else
        throw ArgumentError("RationalPoly::integrate: upper bound must be a variable");
      out.add_term(eu, coef);
    }
    // lower bound substitution (lower = -1 means the constant 0)
    if (lower >= 0) {
      std::vector<int> el = e;
      el[var] = 0;
      el[lower] += deg;
      out.add_term(el, -coef);
    }
  }
  return out;
}

RationalPoly RationalPoly::reindex(const std::vector<int>& keep, int new_nvars) const {
  std::vector<int> dest(m_nvars, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) dest[keep[i]] = static_cast<int>(i);
  RationalPoly out(new_nvars);
  for (const auto& [e, c] : m_terms) {
    std::vector<int> ne(new_nvars, 0);
    for (int v = 0; v < m_nvars; ++v) {
      if (e[v] == 0) continue;
      if (dest[v] < 0) throw ArgumentError("RationalPoly::reindex: dropped variable present");
      ne[dest[v]] = e[v];
    }
    out.add_term(ne, c);
  }
  return out;
}

double RationalPoly::evaluate(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != m_nvars)
    throw ArgumentError("RationalPoly::evaluate: arity mismatch");
  double acc = 0.0;
  for (const auto& [e, c] : m_terms) {
    double t = c.to_double();
    for (int v = 0; v < m_nvars; ++v)
      for (int r = 0; r < e[v]; ++r) t *= x[v];
    acc += t;
  }
  return acc;
}

std::string RationalPoly::str(const std::vector<std::string>& names) const {
  if (m_terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : m_terms) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    for (int v = 0; v < m_nvars; ++v) {
      if (e[v] == 0) continue;
      os << "*" << names[v];
      if (e[v] > 1) os << "^" << e[v];
    }
  }
  return os.str();
}

// ---- f_alpha ----------------------------------------------------------------

SimplexPolynomial f_alpha(const AlphaIndex& alpha) {
  const int m = alpha.m;
  // variables: s_1..s_m are 0..m-1, t is m
  const int nv = m + 1;
  RationalPoly f = RationalPoly::constant(nv, Rational(1));
  // integrate the paired slots left to right; at the moment slot i is
  // integrated every paired slot to its left is gone, so the lower bound is
  // the nearest surviving slot (or 0), the upper bound the immediate
  // right neighbour (still alive) or t.
  for (int i = 0; i < m; ++i) {
    if (alpha.alpha[i] != 2) continue;
    int lower = -1;  // constant 0
    for (int l = i - 1; l >= 0; --l) {
      if (alpha.alpha[l] == 1) {
        lower = l;
        break;
      }
    }
    const int upper = (i + 1 < m) ? i + 1 : m;  // next slot or t
    f = f.integrate(i, lower, upper);
  }
  // reindex surviving variables (the 1-slots, in order) + t
  std::vector<int> keep;
  for (int i = 0; i < m; ++i)
    if (alpha.alpha[i] == 1) keep.push_back(i);
  keep.push_back(m);
  SimplexPolynomial out{alpha, f.reindex(keep, alpha.p + 1), {}};

  // decompose by powers of t (variable index p)
  const int p = alpha.p;
  std::map<int, RationalPoly> by_a;
  for (const auto& [e, c] : out.f.terms()) {
    const int a = e[p];
    auto it = by_a.find(a);
    if (it == by_a.end()) it = by_a.emplace(a, RationalPoly(p)).first;
    std::vector<int> se(e.begin(), e.begin() + p);
    it->second.add_term(se, c);
  }
  for (auto& [a, poly] : by_a) out.parts.push_back({a, Rational(1), poly});
  return out;
}

// ---- sigma' ------------------------------------------------------------------

std::vector<int> sigma_prime(const std::vector<int>& sigma, const AlphaIndex& alpha) {
  const int n = alpha.n;
  if (static_cast<int>(sigma.size()) != n || !is_permutation(sigma))
    throw ArgumentError("sigma_prime: sigma inconsistent with alpha");
  // rho maps expanded tensor positions (slot layout) to the rearranged layout
  // with the p Brownian factors first and the q pairs after, orders kept.
  std::vector<int> rho(n + 1, 0);
  int pos = 1, brownian = 0, pair = 0;
  for (int i = 0; i < alpha.m; ++i) {
    if (alpha.alpha[i] == 1) {
      rho[pos++] = ++brownian;
    } else {
      rho[pos++] = alpha.p + 2 * pair + 1;
      rho[pos++] = alpha.p + 2 * pair + 2;
      ++pair;
    }
  }
  std::vector<int> sp(n);
  for (int j = 0; j < n; ++j) sp[j] = rho[sigma[j]];
  return sp;
}

// ---- contraction operator ----------------------------------------------------

Vec ContractionOperator::evaluate_raw(const LieAlgebra& alg, const std::vector<int>& tuple) const {
  const int d = alg.dim();
  Vec out = Vec::Zero(d);
  if (m_n > alg.step()) return out;
  // sum over the q paired orthonormal indices
  std::vector<int> pair_idx(m_q, 0);
  std::vector<Vec> args(m_n);
  while (true) {
    // rearranged layout: k_1..k_p, then h_{j1},h_{j1},...,h_{jq},h_{jq}
    for (int b = 0; b < m_n; ++b) {
      const int src = m_sigma_prime[b];  // 1-based position in the rearranged tensor
      int basis;
      if (src <= m_p)
        basis = tuple[src - 1];
      else
        basis = pair_idx[(src - m_p - 1) / 2];
      args[b] = Vec::Unit(d, basis);
    }
    Vec acc = alg.bracket(args[0], args[1]);
    for (int b = 2; b < m_n; ++b) {
      if (acc.isZero(0.0)) break;
      acc = alg.bracket(acc, args[b]);
    }
    out += acc;
    // advance the pair multi-index
    int c = 0;
    while (c < m_q && ++pair_idx[c] == d) pair_idx[c++] = 0;
    if (c == m_q) break;
  }
  return out;
}

Vec ContractionOperator::apply_basis(const LieAlgebra& alg, const std::vector<int>& tuple) const {
  if (static_cast<int>(tuple.size()) != m_p)
    throw ArgumentError("ContractionOperator::apply_basis: tuple arity mismatch");
  if (m_zero) return Vec::Zero(alg.dim());
  if (m_lazy) return evaluate_raw(alg, tuple);
  std::size_t flat = 0;
  for (int v : tuple) flat = flat * m_dim + static_cast<std::size_t>(v);
  Vec out(m_dim);
  for (int k = 0; k < m_dim; ++k) out[k] = m_dense[flat * m_dim + k];
  return out;
}

Vec ContractionOperator::contract(const LieAlgebra& alg, const std::vector<double>& tensor) const {
  const int d = alg.dim();
  std::size_t want = 1;
  for (int i = 0; i < m_p; ++i) want *= d;
  if (tensor.size() != want) throw ConformanceError("ContractionOperator::contract: tensor size");
  Vec out = Vec::Zero(d);
  if (m_zero) return out;
  if (!m_lazy) {
    for (std::size_t tpl = 0; tpl < want; ++tpl) {
      const double c = tensor[tpl];
      if (c == 0.0) continue;
      const double* row = m_dense.data() + tpl * m_dim;
      for (int k = 0; k < d; ++k) out[k] += c * row[k];
    }
    return out;
  }
  std::vector<int> tuple(m_p, 0);
  for (std::size_t tpl = 0; tpl < want; ++tpl) {
    const double c = tensor[tpl];
    if (c != 0.0) out += c * evaluate_raw(alg, tuple);
    int pos = m_p - 1;
    while (pos >= 0 && ++tuple[pos] == d) tuple[pos--] = 0;
  }
  return out;
}

ContractionOperator contraction_operator(const LieAlgebra& alg, int n,
                                         const std::vector<int>& sigma, const AlphaIndex& alpha,
                                         std::size_t budget) {
  if (alpha.n != n) throw ArgumentError("contraction_operator: alpha does not sum to n");
  if (n < 2) throw ArgumentError("contraction_operator: n must be >= 2");
  ContractionOperator op;
  op.m_n = n;
  op.m_p = alpha.p;
  op.m_q = alpha.q;
  op.m_dim = alg.dim();
  op.m_sigma_prime = sigma_prime(sigma, alpha);

  if (n > alg.step()) {
    op.m_zero = true;
    op.m_hs_norm_sq = 0.0;
    return op;
  }

  const int d = alg.dim();
  std::size_t tuples = 1;
  bool overflow = false;
  for (int i = 0; i < op.m_p; ++i) {
    tuples *= d;
    if (tuples > budget) overflow = true;
  }
  if (overflow) throw ResourceError("contraction_operator: dim^p exceeds budget");

  if (tuples * d > budget) {
    // too big to materialize: stay lazy; HS norm not aggregated
    op.m_lazy = true;
    op.m_zero = false;
    op.m_hs_norm_sq = std::numeric_limits<double>::quiet_NaN();
    return op;
  }

  op.m_dense.assign(tuples * d, 0.0);
  double hs = 0.0;
  double maxabs = 0.0;
  std::vector<int> tuple(op.m_p, 0);
  for (std::size_t tpl = 0; tpl < tuples; ++tpl) {
    const Vec v = op.evaluate_raw(alg, tuple);
    for (int k = 0; k < d; ++k) {
      op.m_dense[tpl * d + k] = v[k];
      maxabs = std::max(maxabs, std::abs(v[k]));
    }
    hs += v.squaredNorm();
    int pos = op.m_p - 1;
    while (pos >= 0 && ++tuple[pos] == d) tuple[pos--] = 0;
  }
  op.m_hs_norm_sq = hs;
  op.m_zero = (maxabs == 0.0);
  return op;
}

}  // namespace nilheat
