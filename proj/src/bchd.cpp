#include "nilheat/bchd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include "nilheat/rng.hpp"

namespace nilheat {

namespace {

// enumerate multi-indices v in Z_+^k with |v| <= maxsum, lexicographic order
void enumerate_multi(int k, int maxsum, std::vector<int>& cur,
                     const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(cur.size()) == k) {
    emit(cur);
    return;
  }
  for (int v = 0; v <= maxsum; ++v) {
    cur.push_back(v);
    enumerate_multi(k, maxsum - v, cur, emit);
    cur.pop_back();
  }
}

std::vector<BchdTerm> build_terms(int step) {
  std::vector<BchdTerm> terms;
  const int maxdeg = step - 1;  // |n| + |m| bound
  for (int k = 1; k <= maxdeg; ++k) {
    std::vector<std::vector<int>> ns;
    std::vector<int> cur;
    enumerate_multi(k, maxdeg, cur, [&](const std::vector<int>& v) { ns.push_back(v); });
    for (const std::vector<int>& n : ns) {
      int absn = 0;
      for (int v : n) absn += v;
      for (const std::vector<int>& m : ns) {
        int absm = 0;
        for (int v : m) absm += v;
        if (absn + absm > maxdeg) continue;
        bool slots_ok = true;
        for (int i = 0; i < k; ++i)
          if (n[i] + m[i] == 0) slots_ok = false;
        if (!slots_ok) continue;
        std::int64_t nfact = 1, mfact = 1;
        for (int v : n) nfact *= factorial_i64(v);
        for (int v : m) mfact *= factorial_i64(v);
        const std::int64_t sign = (k % 2 == 0) ? 1 : -1;
        BchdTerm t;
        t.k = k;
        t.n = n;
        t.m = m;
        t.coefficient = Rational(sign, (k + 1) * mfact * nfact * (absn + 1));
        terms.push_back(std::move(t));
      }
    }
  }
  return terms;
}

const std::vector<BchdTerm>& cached_terms(int step) {
  // map nodes are stable, so handing out references and caching the last
  // lookup per thread is safe
  thread_local int last_step = -1;
  thread_local const std::vector<BchdTerm>* last = nullptr;
  if (last_step == step && last) return *last;
  static std::mutex mu;
  static std::map<int, std::vector<BchdTerm>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(step);
  if (it == cache.end()) it = cache.emplace(step, build_terms(step)).first;
  last_step = step;
  last = &it->second;
  return it->second;
}

}  // namespace

const std::vector<BchdTerm>& bchd_terms(int step) {
  if (step < 1) throw ArgumentError("bchd_terms: step must be positive");
  return cached_terms(step);
}

std::vector<Rational> left_jacobian_series(int step) {
  std::vector<Rational> beta(step, Rational(0));
  beta[0] = Rational(1);
  // terms of the group law linear in h: the single ad_h must sit in the last
  // slot (otherwise trailing ad_g powers annihilate g), and ad_h g = -ad_g h.
  for (const BchdTerm& t : bchd_terms(step)) {
    int absm = 0;
    for (int v : t.m) absm += v;
    if (absm != 1 || t.m[t.k - 1] != 1) continue;
    int absn = 0;
    for (int v : t.n) absn += v;
    if (absn + 1 < step) beta[absn + 1] -= t.coefficient;
  }
  return beta;
}

std::vector<Rational> left_log_derivative_series(int step) {
  // inverse of the beta series as a power series in ad_g, truncated at step-1
  const std::vector<Rational> beta = left_jacobian_series(step);
  std::vector<Rational> c(step, Rational(0));
  c[0] = Rational(1);
  for (int l = 1; l < step; ++l) {
    Rational s(0);
    for (int j = 1; j <= l; ++j) s += beta[j] * c[l - j];
    c[l] = -s;
  }
  return c;
}

Vec multiply(const LieAlgebra& alg, const Vec& g, const Vec& h) {
  alg.check_conform(g);
  alg.check_conform(h);
  Vec out = g + h;
  for (const BchdTerm& t : bchd_terms(alg.step())) {
    if (t.m[t.k - 1] == 0) continue;  // trailing ad_g^{n_k} g = 0
    Vec v = g;
    bool dead = false;
    for (int slot = t.k - 1; slot >= 0 && !dead; --slot) {
      for (int rep = 0; rep < t.m[slot]; ++rep) {
        v = alg.bracket(h, v);
        if (v.isZero(0.0)) {
          dead = true;
          break;
        }
      }
      for (int rep = 0; rep < t.n[slot] && !dead; ++rep) {
        v = alg.bracket(g, v);
        if (v.isZero(0.0)) {
          dead = true;
          break;
        }
      }
    }
    if (!dead) out += t.coefficient.to_double() * v;
  }
  return out;
}

Mat left_jacobian(const LieAlgebra& alg, const Vec& g) {
  alg.check_conform(g);
  const std::vector<Rational> beta = left_jacobian_series(alg.step());
  const Mat adg = alg.ad(g);
  Mat J = Mat::Identity(alg.dim(), alg.dim());
  Mat p = Mat::Identity(alg.dim(), alg.dim());
  for (std::size_t l = 1; l < beta.size(); ++l) {
    p = adg * p;
    if (!beta[l].is_zero()) J += beta[l].to_double() * p;
  }
  return J;
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw ArgumentError("gauss_legendre_01: order must be positive");
  nodes.resize(n);
  weights.resize(n);
  // Newton iteration on P_n over [-1,1], then map to [0,1]
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = 0.5 * (1.0 + x);
    weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);  // = w/2 on [0,1]
  }
}

double path_length(const LieAlgebra& alg, const std::vector<Vec>& knots, int quad_order) {
  if (knots.size() < 2) throw ArgumentError("path_length: need at least two knots");
  for (const Vec& k : knots) alg.check_conform(k);
  const std::vector<Rational> cr = left_log_derivative_series(alg.step());
  std::vector<double> c(cr.size());
  for (std::size_t i = 0; i < cr.size(); ++i) c[i] = cr[i].to_double();

  std::vector<double> xs, ws;
  gauss_legendre_01(quad_order, xs, ws);

  double total = 0.0;
  const double seg_dt = 1.0 / static_cast<double>(knots.size() - 1);
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const Vec dphi = (knots[s + 1] - knots[s]) / seg_dt;
    double acc = 0.0;
    for (int qn = 0; qn < quad_order; ++qn) {
      const Vec phi = knots[s] + xs[qn] * (knots[s + 1] - knots[s]);
      Vec term = dphi;
      Vec pow = dphi;
      for (std::size_t l = 1; l < c.size(); ++l) {
        pow = alg.bracket(phi, pow);
        if (c[l] != 0.0) term += c[l] * pow;
      }
      acc += ws[qn] * term.norm();
    }
    total += acc * seg_dt;
  }
  return total;
}

double distance_upper(const LieAlgebra& alg, const Vec& h, const DistanceConfig& cfg) {
  alg.check_conform(h);
  const double hn = h.norm();
  if (hn == 0.0) return 0.0;

  const int K = cfg.interior_knots;
  const int d = alg.dim();
  auto objective = [&](const std::vector<Vec>& interior) {
    std::vector<Vec> knots;
    knots.reserve(K + 2);
    knots.push_back(Vec::Zero(d));
    for (const Vec& v : interior) knots.push_back(v);
    knots.push_back(h);
    return path_length(alg, knots, cfg.quad_order);
  };

  double best = hn;  // straight line evaluates to ||h|| exactly
  KeyStream rng(key_combine(cfg.seed, 0x9d2c5680ca876ccdULL));
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::vector<Vec> interior(K);
    for (int i = 0; i < K; ++i) {
      interior[i] = (double(i + 1) / double(K + 1)) * h;
      if (restart > 0)
        for (int cidx = 0; cidx < d; ++cidx)
          interior[i][cidx] += 0.3 * std::max(hn, 1.0) * rng.gaussian();
    }
    double cur = objective(interior);
    double stepsz = 0.25 * std::max(hn, 1.0);
    for (int sweep = 0; sweep < cfg.iterations && stepsz > 1e-5; ++sweep) {
      bool improved = false;
      for (int i = 0; i < K; ++i) {
        for (int cidx = 0; cidx < d; ++cidx) {
          for (const double delta : {stepsz, -stepsz}) {
            interior[i][cidx] += delta;
            const double trial = objective(interior);
            if (trial < cur - 1e-14) {
              cur = trial;
              improved = true;
            } else {
              interior[i][cidx] -= delta;
            }
          }
        }
      }
      if (!improved) stepsz *= 0.5;
    }
    best = std::min(best, cur);
  }
  return std::min(best, hn);
}

}  // namespace nilheat
