#include "nilheat/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "nilheat/bchd.hpp"
#include "nilheat/rng.hpp"

namespace nilheat {

namespace {

// Bridge-bisection grid: start from the odd number m = steps / 2^v of base
// intervals with independent endpoint increments, then bisect v times with
// midpoint deviates keyed by (seed, m, level, node, coord).  Grid values at
// a fixed dyadic refinement of the m-grid do not depend on v, so the 2N-step
// path refines the N-step path exactly for every N.
void bridge_grid(int dim, double t_end, int base, int levels, std::uint64_t seed,
                 Eigen::MatrixXd& values) {
  const int n_final = base << levels;
  values.setZero(n_final + 1, dim);
  const double base_sd = std::sqrt(t_end / base);
  for (int i = 1; i <= base; ++i)
    for (int c = 0; c < dim; ++c)
      values(i * (1 << levels), c) =
          values((i - 1) * (1 << levels), c) +
          base_sd * key_gaussian(key_combine(seed, base, 0x62617365ULL + i, c));
  for (int level = 1; level <= levels; ++level) {
    const int stride = 1 << (levels - level);
    const double half_dt = t_end * static_cast<double>(stride) / n_final;
    for (int node = 0; node < base * (1 << (level - 1)); ++node) {
      const int left = node * 2 * stride;
      const int mid = left + stride;
      const int right = left + 2 * stride;
      for (int c = 0; c < dim; ++c) {
        const double bridge =
            std::sqrt(0.5 * half_dt) *
            key_gaussian(key_combine(key_combine(seed, base), level, node, c));
        values(mid, c) = 0.5 * (values(left, c) + values(right, c)) + bridge;
      }
    }
  }
}

}  // namespace

BrownianPath sample_path(int dim, double t_end, int steps, std::uint64_t seed) {
  if (dim < 1) throw ArgumentError("sample_path: dim must be positive");
  if (steps < 1) throw ArgumentError("sample_path: steps must be >= 1");
  if (!(t_end > 0.0)) throw ArgumentError("sample_path: t_end must be positive");

  BrownianPath p;
  p.t_end = t_end;
  p.steps = steps;
  p.dim = dim;
  p.seed = seed;
  p.increments.resize(steps, dim);

  int base = steps, levels = 0;
  while (base % 2 == 0) {
    base /= 2;
    ++levels;
  }
  Eigen::MatrixXd values;
  bridge_grid(dim, t_end, base, levels, seed, values);
  for (int j = 0; j < steps; ++j) p.increments.row(j) = values.row(j + 1) - values.row(j);
  return p;
}

std::string path_to_text(const BrownianPath& path) {
  std::ostringstream os;
  os << "# dim=" << path.dim << " steps=" << path.steps << " t_end=";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", path.t_end);
  os << buf << " seed=" << path.seed << "\n";
  for (int j = 0; j < path.steps; ++j) {
    for (int c = 0; c < path.dim; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", path.increments(j, c));
      os << (c ? " " : "") << buf;
    }
    os << "\n";
  }
  return os.str();
}

BrownianPath path_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string hash;
  BrownianPath p;
  std::string key;
  in >> hash;
  if (hash != "#") throw ValidationError("path_from_text: missing header");
  auto expect = [&](const char* name) -> std::string {
    in >> key;
    const std::string prefix = std::string(name) + "=";
    if (key.rfind(prefix, 0) != 0)
      throw ValidationError(std::string("path_from_text: expected ") + name);
    return key.substr(prefix.size());
  };
  p.dim = std::stoi(expect("dim"));
  p.steps = std::stoi(expect("steps"));
  p.t_end = std::stod(expect("t_end"));
  p.seed = std::stoull(expect("seed"));
  if (p.dim < 1 || p.steps < 1) throw ValidationError("path_from_text: bad header");
  p.increments.resize(p.steps, p.dim);
  for (int j = 0; j < p.steps; ++j)
    for (int c = 0; c < p.dim; ++c)
      if (!(in >> p.increments(j, c))) throw ValidationError("path_from_text: truncated rows");
  return p;
}

BrownianPath project_path(const BrownianPath& path, int ell) {
  if (ell < 1 || ell > path.dim) throw ArgumentError("project_path: ell out of range");
  BrownianPath out = path;
  for (int c = ell; c < path.dim; ++c) out.increments.col(c).setZero();
  return out;
}

Signature weighted_signature(const BrownianPath& path, int level,
                             const std::vector<int>& time_exponents, std::size_t budget) {
  if (level < 0) throw ArgumentError("weighted_signature: level must be >= 0");
  if (!time_exponents.empty() && static_cast<int>(time_exponents.size()) != level)
    throw ArgumentError("weighted_signature: exponent profile arity mismatch");
  const int d = path.dim;

  Signature sig;
  sig.dim = d;
  sig.level = level;
  std::size_t size = 1;
  for (int l = 1; l <= level; ++l) {
    size *= d;
    if (size > budget) throw ResourceError("weighted_signature: dim^level exceeds budget");
    sig.levels.emplace_back(size, 0.0);
  }
  if (level == 0) return sig;

  int max_e = 0;
  for (int e : time_exponents) max_e = std::max(max_e, e);
  std::vector<double> tpow(max_e + 1, 1.0);

  for (int j = 0; j < path.steps; ++j) {
    const double tj = path.grid_time(j);
    for (int e = 1; e <= max_e; ++e) tpow[e] = tpow[e - 1] * tj;
    // top-down so each level reads the previous level's value before update
    for (int l = level; l >= 1; --l) {
      const double w =
          time_exponents.empty() ? 1.0 : tpow[static_cast<std::size_t>(time_exponents[l - 1])];
      std::vector<double>& cur = sig.levels[l - 1];
      if (l == 1) {
        for (int c = 0; c < d; ++c) cur[c] += w * path.increments(j, c);
      } else {
        const std::vector<double>& prev = sig.levels[l - 2];
        std::size_t idx = 0;
        for (std::size_t r = 0; r < prev.size(); ++r) {
          const double pv = w * prev[r];
          if (pv != 0.0) {
            for (int c = 0; c < d; ++c) cur[idx + c] += pv * path.increments(j, c);
          }
          idx += d;
        }
      }
    }
  }
  return sig;
}

Signature signature_concat(const Signature& a, const Signature& b) {
  if (a.dim != b.dim || a.level != b.level)
    throw ConformanceError("signature_concat: mismatched signatures");
  Signature out;
  out.dim = a.dim;
  out.level = a.level;
  out.levels = a.levels;
  for (int l = 1; l <= out.level; ++l) {
    std::vector<double>& dest = out.levels[l - 1];
    // contributions a_{l-k} (x) b_k, k = 1..l (k = 0 handled by the copy)
    for (int k = 1; k <= l; ++k) {
      const std::vector<double>* left = nullptr;
      std::size_t left_size = 1;
      if (l - k > 0) {
        left = &a.levels[l - k - 1];
        left_size = left->size();
      }
      const std::vector<double>& right = b.levels[k - 1];
      for (std::size_t i = 0; i < left_size; ++i) {
        const double lv = left ? (*left)[i] : 1.0;
        if (lv == 0.0) continue;
        for (std::size_t r = 0; r < right.size(); ++r)
          dest[i * right.size() + r] += lv * right[r];
      }
    }
  }
  return out;
}

// ---- TermTable ---------------------------------------------------------------

TermTable::TermTable(const LieAlgebra& alg, std::size_t budget) : m_alg(&alg), m_budget(budget) {
  const int r = alg.step();
  for (int n = 2; n <= r; ++n) {
    for (const std::vector<int>& sigma : all_permutations(n)) {
      const Rational c = strichartz_coefficient(n, sigma);
      for (const AlphaIndex& alpha : multi_index_all(n)) {
        Term t;
        t.n = n;
        t.m = alpha.m;
        t.sigma = sigma;
        t.alpha = alpha;
        t.prefactor = c / Rational(std::int64_t(1) << (n - alpha.m));
        t.falpha = f_alpha(alpha);
        t.op = contraction_operator(alg, n, sigma, alpha, budget);
        t.skip = t.op.identically_zero();
        m_terms.push_back(std::move(t));
      }
    }
  }
  // collect the distinct time-exponent profiles needed by live terms and
  // flatten each term's f_alpha decomposition into an evaluation plan
  for (Term& t : m_terms) {
    if (t.skip) continue;
    const int p = t.alpha.p;
    for (const auto& part : t.falpha.parts) {
      for (const auto& [expo, coef] : part.ftilde.terms()) {
        std::vector<int> profile(expo.begin(), expo.begin() + p);
        auto it = std::find(m_profiles.begin(), m_profiles.end(), profile);
        if (it == m_profiles.end()) {
          m_profiles.push_back(profile);
          it = std::prev(m_profiles.end());
        }
        t.plan.push_back({static_cast<int>(it - m_profiles.begin()), part.a,
                          (part.b * coef).to_double()});
      }
    }
  }
}

Vec TermTable::group_bm_formula(const BrownianPath& path) const {
  const LieAlgebra& alg = *m_alg;
  if (path.dim != alg.dim())
    throw ConformanceError("group_bm_formula: path does not conform to algebra");

  Vec g = path.endpoint();  // the n = 1 term
  if (m_terms.empty()) return g;

  // weighted signatures per distinct profile (length = level of that profile)
  std::vector<Signature> sigs(m_profiles.size());
  for (std::size_t i = 0; i < m_profiles.size(); ++i)
    sigs[i] = weighted_signature(path, static_cast<int>(m_profiles[i].size()), m_profiles[i],
                                 m_budget);

  const double t = path.t_end;
  static const std::vector<double> kUnitTensor{1.0};
  for (const Term& term : m_terms) {
    if (term.skip) continue;
    const int p = term.alpha.p;
    Vec acc = Vec::Zero(alg.dim());
    for (const Term::Monomial& mono : term.plan) {
      double tpow = 1.0;
      for (int a = 0; a < mono.tpow; ++a) tpow *= t;
      const std::vector<double>& tensor =
          (p == 0) ? kUnitTensor : sigs[mono.profile].levels[p - 1];
      acc += mono.coef * tpow * term.op.contract(alg, tensor);
    }
    g += term.prefactor.to_double() * acc;
  }
  return g;
}

// ---- oracles -----------------------------------------------------------------

Vec group_bm_euler(const LieAlgebra& alg, const BrownianPath& path) {
  if (path.dim != alg.dim())
    throw ConformanceError("group_bm_euler: path does not conform to algebra");
  Vec g = Vec::Zero(alg.dim());
  for (int j = 0; j < path.steps; ++j) g = multiply(alg, g, path.increments.row(j).transpose());
  return g;
}

Vec strichartz_smooth(const LieAlgebra& alg, const std::vector<Vec>& knots) {
  const int d = alg.dim();
  if (knots.empty()) return Vec::Zero(d);
  for (const Vec& k : knots) alg.check_conform(k);
  const int K = static_cast<int>(knots.size()) - 1;  // number of segments
  if (K == 0) return Vec::Zero(d);

  // piecewise-constant derivative over uniform segments of length 1/K
  std::vector<Vec> v(K);
  for (int s = 0; s < K; ++s) v[s] = (knots[s + 1] - knots[s]) * static_cast<double>(K);
  const double seg_len = 1.0 / static_cast<double>(K);

  Vec g = Vec::Zero(d);
  const int r = alg.step();
  for (int n = 1; n <= r; ++n) {
    // non-decreasing segment assignments a_1 <= ... <= a_n with their
    // ordered-simplex volumes prod_j (L^{c_j} / c_j!)
    std::vector<int> assign(n, 0);
    std::vector<std::vector<int>> assignments;
    std::function<void(int, int)> rec = [&](int pos, int minseg) {
      if (pos == n) {
        assignments.push_back(assign);
        return;
      }
      for (int s = minseg; s < K; ++s) {
        assign[pos] = s;
        rec(pos + 1, s);
      }
    };
    rec(0, 0);

    const auto& sigmas = all_permutations(n);
    std::vector<Rational> coeffs(sigmas.size());
    for (std::size_t si = 0; si < sigmas.size(); ++si)
      coeffs[si] = strichartz_coefficient(n, sigmas[si]);

    for (const std::vector<int>& a : assignments) {
      double vol = 1.0;
      int run = 1;
      for (int i = 1; i <= n; ++i) {
        if (i < n && a[i] == a[i - 1]) {
          ++run;
        } else {
          for (int rI = 1; rI <= run; ++rI) vol *= seg_len / rI;
          run = 1;
        }
      }
      Vec term = Vec::Zero(d);
      std::vector<Vec> args(n);
      for (std::size_t si = 0; si < sigmas.size(); ++si) {
        for (int i = 0; i < n; ++i) args[i] = v[a[sigmas[si][i] - 1]];
        Vec br = args[0];
        for (int i = 1; i < n; ++i) br = alg.bracket(br, args[i]);
        term += coeffs[si].to_double() * br;
      }
      g += vol * term;
    }
  }
  return g;
}

}  // namespace nilheat
