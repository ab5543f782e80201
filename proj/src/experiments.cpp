#include "nilheat/experiments.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "nilheat/bchd.hpp"
#include "nilheat/parallel.hpp"
#include "nilheat/rng.hpp"
#include "nilheat/stochastic.hpp"

namespace nilheat {

double c_function(double x) {
  if (std::abs(x) < 1e-5) return 1.0 - x / 2.0 + x * x / 12.0;  // removable singularity
  return x / std::expm1(x);
}

double one_minus_exp_over(double x) {
  if (std::abs(x) < 1e-5) return 1.0 - x / 2.0 + x * x / 6.0;
  return -std::expm1(-x) / x;
}

// ---- algebra descriptors -------------------------------------------------------

namespace {
std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}
}  // namespace

LieAlgebra resolve_algebra(const std::string& descriptor) {
  try {
    if (descriptor == "heis3") return make_heisenberg3();
    if (descriptor.rfind("abelian:", 0) == 0)
      return make_abelian(std::stoi(descriptor.substr(8)));
    if (descriptor.rfind("free:", 0) == 0) {
      const auto parts = split(descriptor.substr(5), ',');
      if (parts.size() != 2) throw ArgumentError("free:d,r expects two fields");
      return make_free_nilpotent(std::stoi(parts[0]), std::stoi(parts[1]));
    }
    if (descriptor.rfind("random:", 0) == 0) {
      const auto parts = split(descriptor.substr(7), ',');
      if (parts.size() != 4) throw ArgumentError("random:dim,step,gamma,seed expects four fields");
      return make_random_hs(std::stoi(parts[0]), std::stoi(parts[1]), std::stod(parts[2]),
                            static_cast<std::uint64_t>(std::stoull(parts[3])));
    }
  } catch (const std::invalid_argument&) {
    throw ArgumentError("resolve_algebra: malformed descriptor '" + descriptor + "'");
  }
  return load_algebra(descriptor);
}

// ---- suites (suite-v1) ----------------------------------------------------------

Vec cosine_direction(int dim) {
  Vec u(dim);
  for (int i = 0; i < dim; ++i) u[i] = 1.0 / (i + 1.0);
  u.normalize();
  return u;
}

std::vector<BoundedFunction> harnack_suite(const LieAlgebra& alg) {
  const int d = alg.dim();
  const Vec u = cosine_direction(d);
  const int p2 = std::min(2, d);
  std::vector<BoundedFunction> fs;
  fs.push_back({"f1", [u](const Vec& g) { return 2.0 + std::cos(u.dot(g)); }});
  fs.push_back({"f2", [p2](const Vec& g) {
                  double s = 0.0;
                  for (int i = 0; i < p2; ++i) s += g[i] * g[i];
                  return std::exp(-s);
                }});
  fs.push_back({"f3", [d](const Vec& g) {
                  // low-degree cylinder polynomial made positive by a constant
                  const double lin = 0.5 * g[0] - (d >= 2 ? 0.25 * g[1] : 0.0);
                  return 0.5 + lin * lin;
                }});
  return fs;
}

std::vector<std::pair<std::string, Polynomial>> logsob_suite(const LieAlgebra& alg) {
  const int d = alg.dim();
  std::vector<std::pair<std::string, Polynomial>> out;
  // P1 = 2 + x1: linear with a non-perturbative slope
  out.emplace_back("P1", Polynomial::constant(d, 2.0) + Polynomial::coordinate(d, 0));
  if (d >= 2) {
    // P2 = 2 + x1/2 - x2/4 + x1 x2 / 8
    Polynomial p = Polynomial::constant(d, 2.0) + Polynomial::coordinate(d, 0).scaled(0.5) +
                   Polynomial::coordinate(d, 1).scaled(-0.25) +
                   (Polynomial::coordinate(d, 0) * Polynomial::coordinate(d, 1)).scaled(0.125);
    out.emplace_back("P2", p);
  }
  if (d >= 3) {
    // P3 = 1 + x1 x2 / 4 + x_last
    Polynomial p = Polynomial::constant(d, 1.0) +
                   (Polynomial::coordinate(d, 0) * Polynomial::coordinate(d, 1)).scaled(0.25) +
                   Polynomial::coordinate(d, d - 1);
    out.emplace_back("P3", p);
  }
  return out;
}

std::vector<Vec> translation_suite(const LieAlgebra& alg) {
  const int d = alg.dim();
  std::vector<Vec> hs;
  hs.push_back(Vec::Zero(d));
  hs.push_back(Vec::Unit(d, 0));
  Vec ones = Vec::Ones(d);
  ones.normalize();
  hs.push_back(0.75 * ones);
  hs.push_back(0.5 * Vec::Unit(d, d - 1));
  return hs;
}

namespace {
void check_suite(const ExperimentConfig& config) {
  if (config.suite != "suite-v1")
    throw ValidationError("unknown test-function suite '" + config.suite + "'");
}

std::vector<Vec> resolve_translations(const ExperimentConfig& config, const LieAlgebra& alg) {
  if (config.translations.empty()) return translation_suite(alg);
  std::vector<Vec> hs;
  for (const auto& row : config.translations) {
    if (static_cast<int>(row.size()) != alg.dim())
      throw ValidationError("translation element does not conform to the algebra dimension");
    Vec h(alg.dim());
    for (int i = 0; i < alg.dim(); ++i) h[i] = row[i];
    hs.push_back(h);
  }
  return hs;
}
}  // namespace

// ---- statistics helpers ----------------------------------------------------------

namespace {

struct MeanSE {
  double mean = 0.0;
  double se = 0.0;
};

MeanSE mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v = (xs.size() > 1) ? v / (n - 1.0) : 0.0;
  return {m, std::sqrt(v / n)};
}

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

/// E[phi(X)] for X ~ N(0, t), Gauss-Hermite quadrature (Golub-Welsch).
double gauss_hermite_expectation(const std::function<double(double)>& phi, double t, int n = 80) {
  Mat J = Mat::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = std::sqrt(i / 2.0);
    J(i, i - 1) = b;
    J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double node = es.eigenvalues()[i];
    const double w = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);  // weights sum to 1
    acc += w * phi(std::sqrt(2.0 * t) * node);
  }
  return acc;
}

std::string case_name(double t, const std::string& rest) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "t=%g/", t);
  return buf + rest;
}

}  // namespace

// ---- harnack ---------------------------------------------------------------------

ExperimentReport run_harnack(const ExperimentConfig& config) {
  const double t0 = now_seconds();
  ExperimentReport rep;
  rep.config = config;
  rep.config.experiment = "harnack";
  rep.config_hash = rep.config.hash();

  if (config.q <= 1.0) throw ArgumentError("run_harnack: q must exceed 1");
  if (config.paths < 1000) throw ArgumentError("run_harnack: need at least 10^3 paths");
  check_suite(config);
  const double qprime = config.q / (config.q - 1.0);

  const LieAlgebra alg = resolve_algebra(config.algebra);
  const TermTable table(alg);
  const double k = ricci_lower_bound(alg).k;
  const auto fs = harnack_suite(alg);
  const auto hs = resolve_translations(config, alg);
  const int workers = resolve_workers(config.workers);
  const bool abelian = (alg.step() == 1);
  const Vec u = cosine_direction(alg.dim());

  // distance upper bounds, one per translation element
  std::vector<double> dists(hs.size());
  for (std::size_t hi = 0; hi < hs.size(); ++hi) {
    DistanceConfig dc;
    dc.seed = key_combine(config.seed, 0xd15700ULL, hi);
    dists[hi] = distance_upper(alg, hs[hi], dc);
  }

  const long P = config.paths;
  for (std::size_t ti = 0; ti < config.horizons().size(); ++ti) {
    const double t = config.horizons()[ti];
    // exponent form identity: c(kt)(q-1)/(2t) vs k(q-1)/(2(e^{kt}-1))
    const double coef = c_function(k * t) * (config.q - 1.0) / (2.0 * t);
    {
      const double direct = (std::abs(k * t) < 1e-12)
                                ? (config.q - 1.0) / (2.0 * t)
                                : k * (config.q - 1.0) / (2.0 * std::expm1(k * t));
      CaseResult c;
      c.name = case_name(t, "exponent-identity");
      c.kind = "identity";
      c.lhs = coef;
      c.rhs = direct;
      c.margin = direct - coef;
      c.verdict = std::abs(direct - coef) <= 1e-12 * std::max(1.0, std::abs(coef))
                      ? "pass"
                      : "fail";
      rep.cases.push_back(c);
    }

    // per-path values: norm integrand per f, translated |f| per (f,h,side)
    const std::size_t F = fs.size(), H = hs.size();
    std::vector<std::vector<double>> norm_vals(F, std::vector<double>(P));
    std::vector<std::vector<double>> lhs_vals(F * H * 2, std::vector<double>(P));
    auto slot = [&](std::size_t f, std::size_t h, int side) { return (f * H + h) * 2 + side; };

    parallel_for_range(P, workers, [&](long begin, long end) {
      for (long i = begin; i < end; ++i) {
        const BrownianPath path =
            sample_path(alg.dim(), t, config.steps, key_combine(config.seed, ti, i));
        const Vec g = table.group_bm_formula(path);
        for (std::size_t f = 0; f < F; ++f)
          norm_vals[f][i] = std::pow(std::abs(fs[f].eval(g)), qprime);
        for (std::size_t h = 0; h < H; ++h) {
          const Vec right = multiply(alg, g, hs[h]);
          const Vec left = multiply(alg, hs[h], g);
          for (std::size_t f = 0; f < F; ++f) {
            lhs_vals[slot(f, h, 0)][i] = std::abs(fs[f].eval(right));
            lhs_vals[slot(f, h, 1)][i] = std::abs(fs[f].eval(left));
          }
        }
      }
    });

    for (std::size_t f = 0; f < F; ++f) {
      const MeanSE nm = mean_se(norm_vals[f]);
      const double norm_est = std::pow(nm.mean, 1.0 / qprime);
      const double norm_se =
          (nm.mean > 0.0) ? std::pow(nm.mean, 1.0 / qprime - 1.0) / qprime * nm.se : 0.0;

      if (abelian && fs[f].name == "f1" && config.q == 2.0) {
        // closed form for the L^2 norm of 2 + cos<.,u>
        const double e1 = std::exp(-t * u.squaredNorm() / 2.0);
        const double e2 = std::exp(-2.0 * t * u.squaredNorm());
        const double exact = std::sqrt(4.0 + 4.0 * e1 + 0.5 * (1.0 + e2));
        CaseResult c;
        c.name = case_name(t, "closedform/norm-f1");
        c.kind = "closedform";
        c.lhs = norm_est;
        c.lhs_se = norm_se;
        c.rhs = exact;
        c.margin = exact - norm_est;
        c.verdict = closedform_verdict(norm_est - exact, norm_se);
        rep.cases.push_back(c);
      }

      for (std::size_t h = 0; h < H; ++h) {
        const double factor = std::exp(coef * dists[h] * dists[h]);
        for (int side = 0; side < 2; ++side) {
          const MeanSE lm = mean_se(lhs_vals[slot(f, h, side)]);
          CaseResult c;
          c.name = case_name(t, fs[f].name + "/h" + std::to_string(h) +
                                    (side == 0 ? "/right" : "/left"));
          c.kind = "inequality";
          c.lhs = lm.mean;
          c.lhs_se = lm.se;
          if (factor > 1e6) {
            c.rhs = std::numeric_limits<double>::infinity();
            c.margin = std::numeric_limits<double>::infinity();
            c.verdict = "pass";
            c.flagged = true;  // divergent bound factor auto-passes
          } else {
            c.rhs = factor * norm_est;
            c.rhs_se = factor * norm_se;
            c.margin = c.rhs - c.lhs;
            c.verdict =
                inequality_verdict(c.margin, std::hypot(c.lhs_se, c.rhs_se));
          }
          rep.cases.push_back(c);

          if (abelian && fs[f].name == "f1" && side == 0) {
            // E f(B_t + h) = 2 + cos<h,u> e^{-t ||u||^2 / 2}
            const double exact =
                2.0 + std::cos(hs[h].dot(u)) * std::exp(-t * u.squaredNorm() / 2.0);
            CaseResult cc;
            cc.name = case_name(t, "closedform/f1/h" + std::to_string(h));
            cc.kind = "closedform";
            cc.lhs = lm.mean;
            cc.lhs_se = lm.se;
            cc.rhs = exact;
            cc.margin = exact - lm.mean;
            cc.verdict = closedform_verdict(lm.mean - exact, lm.se);
            rep.cases.push_back(cc);
          }
        }
      }
    }
  }

  rep.runtime_seconds = now_seconds() - t0;
  return rep;
}

// ---- log-Sobolev -------------------------------------------------------------------

ExperimentReport run_logsob(const ExperimentConfig& config) {
  const double t0 = now_seconds();
  ExperimentReport rep;
  rep.config = config;
  rep.config.experiment = "logsob";
  rep.config_hash = rep.config.hash();
  if (config.paths < 1000) throw ArgumentError("run_logsob: need at least 10^3 paths");
  check_suite(config);

  const LieAlgebra alg = resolve_algebra(config.algebra);
  const TermTable table(alg);
  const double k = ricci_lower_bound(alg).k;
  const auto suite = logsob_suite(alg);
  const int workers = resolve_workers(config.workers);
  const long P = config.paths;
  const bool abelian1 = (alg.step() == 1 && alg.dim() == 1);

  for (std::size_t ti = 0; ti < config.horizons().size(); ++ti) {
    const double t = config.horizons()[ti];
    const double rate = 2.0 * t * one_minus_exp_over(k * t);

    const std::size_t F = suite.size() + (abelian1 ? 1 : 0);
    std::vector<Polynomial> polys;
    std::vector<std::string> names;
    for (const auto& [name, p] : suite) {
      polys.push_back(p);
      names.push_back(name);
    }
    if (abelian1) {
      // the classical perturbative case 1 + 0.1 x, checked against quadrature
      polys.push_back(Polynomial::constant(1, 1.0) + Polynomial::coordinate(1, 0).scaled(0.1));
      names.push_back("Ceps");
    }

    std::vector<std::vector<double>> fvals(F, std::vector<double>(P));
    std::vector<std::vector<double>> grad2(F, std::vector<double>(P));
    parallel_for_range(P, workers, [&](long begin, long end) {
      for (long i = begin; i < end; ++i) {
        const BrownianPath path =
            sample_path(alg.dim(), t, config.steps, key_combine(config.seed, ti, i));
        const Vec g = table.group_bm_formula(path);
        for (std::size_t f = 0; f < F; ++f) {
          fvals[f][i] = polys[f].evaluate(g);
          grad2[f][i] = cylinder_gradient(alg, polys[f], g).squaredNorm();
        }
      }
    });

    for (std::size_t f = 0; f < F; ++f) {
      // shift guard: the entropy integrand needs f^2 bounded away from 0
      double minf = fvals[f][0];
      for (double v : fvals[f]) minf = std::min(minf, v);
      double shift = 0.0;
      if (minf * minf < 1e-6 && minf < 1e-3) shift = 1e-3 - minf;

      double m2 = 0.0;
      for (double v : fvals[f]) {
        const double fv = v + shift;
        m2 += fv * fv;
      }
      m2 /= static_cast<double>(P);

      std::vector<double> diff(P), ent(P);
      for (long i = 0; i < P; ++i) {
        const double fv = fvals[f][i] + shift;
        const double f2 = fv * fv;
        ent[i] = f2 * std::log(f2 / m2);
        diff[i] = rate * grad2[f][i] - ent[i];
      }
      const MeanSE em = mean_se(ent);
      const MeanSE gm = mean_se(grad2[f]);
      const MeanSE dm = mean_se(diff);

      // the perturbative abelian case saturates the inequality to O(eps^2);
      // its margin sits inside the Monte Carlo noise by construction, so it
      // is checked against the quadrature oracle below instead of the
      // one-sided gate
      if (names[f] != "Ceps") {
        CaseResult c;
        c.name = case_name(t, names[f]);
        c.kind = "inequality";
        c.lhs = em.mean;
        c.lhs_se = em.se;
        c.rhs = rate * gm.mean;
        c.rhs_se = rate * gm.se;
        c.margin = dm.mean;
        c.verdict = inequality_verdict(dm.mean, dm.se);
        c.flagged = (shift != 0.0);
        rep.cases.push_back(c);
      }

      if (abelian1 && names[f] == "Ceps" && shift == 0.0) {
        // quadrature oracle for Ent(f^2), f = 1 + 0.1 x under N(0, t)
        const auto f2ln = [](double fv) {
          const double f2 = fv * fv;
          return (f2 > 0.0) ? f2 * std::log(f2) : 0.0;
        };
        const double Ef2 =
            gauss_hermite_expectation([](double x) { return (1 + 0.1 * x) * (1 + 0.1 * x); }, t);
        const double Ef2ln =
            gauss_hermite_expectation([&](double x) { return f2ln(1 + 0.1 * x); }, t);
        const double ent_exact = Ef2ln - Ef2 * std::log(Ef2);
        CaseResult cc;
        cc.name = case_name(t, "closedform/Ceps-entropy");
        cc.kind = "closedform";
        cc.lhs = em.mean;
        cc.lhs_se = em.se;
        cc.rhs = ent_exact;
        cc.margin = ent_exact - em.mean;
        cc.verdict = closedform_verdict(em.mean - ent_exact, em.se);
        rep.cases.push_back(cc);

        const double rhs_exact = 2.0 * t * 0.01;  // 2t eps^2
        CaseResult cr;
        cr.name = case_name(t, "closedform/Ceps-rhs");
        cr.kind = "closedform";
        cr.lhs = rate * gm.mean;
        cr.lhs_se = rate * gm.se;
        cr.rhs = rhs_exact;
        cr.margin = rhs_exact - cr.lhs;
        // the gradient is constant, so the only deviation is summation
        // roundoff; floor the tolerance above it
        cr.verdict = closedform_verdict(cr.lhs - rhs_exact, std::max(rate * gm.se, 1e-9));
        rep.cases.push_back(cr);
      }
    }
  }

  rep.runtime_seconds = now_seconds() - t0;
  return rep;
}

// ---- projection convergence ----------------------------------------------------------

ExperimentReport run_convergence(const ExperimentConfig& config) {
  const double t0 = now_seconds();
  ExperimentReport rep;
  rep.config = config;
  rep.config.experiment = "converge";
  rep.config_hash = rep.config.hash();
  if (config.paths < 1000) throw ArgumentError("run_convergence: need at least 10^3 paths");

  const LieAlgebra alg = resolve_algebra(config.algebra);
  const int D = alg.dim();
  std::vector<int> ladder = config.ladder;
  if (ladder.empty()) ladder = {std::min(2, D), std::min(4, D), std::min(8, D), D};
  std::sort(ladder.begin(), ladder.end());
  ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
  for (int l : ladder)
    if (l < 1 || l > D) throw ArgumentError("run_convergence: ladder entry out of range");

  const TermTable table(alg);
  const int workers = resolve_workers(config.workers);
  const long P = config.paths;
  const double t = config.t;
  const bool abelian = alg.step() == 1;

  std::vector<std::vector<double>> diff2(ladder.size(), std::vector<double>(P));
  parallel_for_range(P, workers, [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      const BrownianPath path = sample_path(D, t, config.steps, key_combine(config.seed, 0, i));
      const Vec g_full = table.group_bm_formula(path);
      for (std::size_t li = 0; li < ladder.size(); ++li) {
        const Vec g_l = table.group_bm_formula(project_path(path, ladder[li]));
        diff2[li][i] = (g_l - g_full).squaredNorm();
      }
    }
  });

  std::vector<double> means(ladder.size());
  for (std::size_t li = 0; li < ladder.size(); ++li) {
    const MeanSE m = mean_se(diff2[li]);
    means[li] = m.mean;
    CaseResult c;
    c.name = "mse/ell=" + std::to_string(ladder[li]);
    c.kind = abelian ? "closedform" : "estimate";
    c.lhs = m.mean;
    c.lhs_se = m.se;
    if (abelian) {
      c.rhs = (D - ladder[li]) * t;
      c.margin = c.rhs - c.lhs;
      c.verdict = closedform_verdict(c.lhs - c.rhs, std::max(m.se, 1e-15));
    } else {
      c.rhs = 0.0;
      c.verdict = "pass";
    }
    rep.cases.push_back(c);
  }

  int inversions = 0;
  for (std::size_t li = 0; li + 1 < ladder.size(); ++li)
    if (means[li + 1] > means[li]) ++inversions;
  CaseResult mono;
  mono.name = "monotone-decrease";
  mono.kind = "inequality";
  mono.lhs = inversions;
  mono.rhs = 1.0;  // at most one noise inversion allowed
  mono.margin = 1.0 - inversions;
  mono.verdict = inequality_verdict(mono.margin, 0.0);
  rep.cases.push_back(mono);

  if (ladder.back() == D) {
    CaseResult z;
    z.name = "exact-zero-at-full";
    z.kind = "identity";
    z.lhs = means.back();
    z.rhs = 0.0;
    z.margin = -means.back();
    z.verdict = (means.back() == 0.0) ? "pass" : "fail";
    rep.cases.push_back(z);
  }

  rep.runtime_seconds = now_seconds() - t0;
  return rep;
}

// ---- moments ----------------------------------------------------------------------------

ExperimentReport run_moments(const ExperimentConfig& config) {
  const double t0 = now_seconds();
  ExperimentReport rep;
  rep.config = config;
  rep.config.experiment = "moments";
  rep.config_hash = rep.config.hash();
  if (config.paths < 1000) throw ArgumentError("run_moments: need at least 10^3 paths");

  const LieAlgebra alg = resolve_algebra(config.algebra);
  const bool heis = (alg.label() == "heisenberg3");
  if (!heis && alg.step() != 1)
    throw ArgumentError("run_moments: expects heis3 or an abelian algebra");
  const TermTable table(alg);
  const int workers = resolve_workers(config.workers);
  const long P = config.paths;
  const double t = config.t;
  const int d = alg.dim();

  std::vector<std::vector<double>> coords(d, std::vector<double>(P));
  std::vector<double> norm2(P);
  parallel_for_range(P, workers, [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      BrownianPath path = sample_path(d, t, config.steps, key_combine(config.seed, 0, i));
      // the Heisenberg closed forms (central variance t^2/4, mean square norm
      // 2t + t^2/4) are for horizontal driving noise: the center carries the
      // area integral only
      if (heis) path = project_path(path, 2);
      const Vec g = table.group_bm_formula(path);
      for (int c = 0; c < d; ++c) coords[c][i] = g[c];
      norm2[i] = g.squaredNorm();
    }
  });

  for (int c = 0; c < d; ++c) {
    const MeanSE m = mean_se(coords[c]);
    CaseResult cr;
    cr.name = "mean/g" + std::to_string(c + 1);
    cr.kind = "closedform";
    cr.lhs = m.mean;
    cr.lhs_se = m.se;
    cr.rhs = 0.0;
    cr.margin = -m.mean;
    cr.verdict = closedform_verdict(m.mean, m.se);
    rep.cases.push_back(cr);
  }

  if (heis) {
    std::vector<double> central_sq(P);
    for (long i = 0; i < P; ++i) central_sq[i] = coords[2][i] * coords[2][i];
    const MeanSE cm = mean_se(coords[2]);
    const MeanSE c2 = mean_se(central_sq);
    CaseResult cv;
    cv.name = "central-variance";
    cv.kind = "closedform";
    cv.lhs = c2.mean - cm.mean * cm.mean;
    cv.lhs_se = c2.se;
    cv.rhs = t * t / 4.0;
    cv.margin = cv.rhs - cv.lhs;
    cv.verdict = closedform_verdict(cv.lhs - cv.rhs, c2.se);
    rep.cases.push_back(cv);
  }

  const MeanSE nm = mean_se(norm2);
  CaseResult cn;
  cn.name = "mean-square-norm";
  cn.kind = "closedform";
  cn.lhs = nm.mean;
  cn.lhs_se = nm.se;
  cn.rhs = heis ? 2.0 * t + t * t / 4.0 : d * t;
  cn.margin = cn.rhs - cn.lhs;
  cn.verdict = closedform_verdict(nm.mean - cn.rhs, nm.se);
  rep.cases.push_back(cn);

  rep.runtime_seconds = now_seconds() - t0;
  return rep;
}

// ---- simulate ---------------------------------------------------------------------------

ExperimentReport run_simulate(const ExperimentConfig& config, std::ostream* dump) {
  const double t0 = now_seconds();
  ExperimentReport rep;
  rep.config = config;
  rep.config.experiment = "simulate";
  rep.config_hash = rep.config.hash();

  const LieAlgebra alg = resolve_algebra(config.algebra);
  const TermTable table(alg);
  const int workers = resolve_workers(config.workers);
  const long P = config.paths;
  const int d = alg.dim();
  const double t = config.t;

  std::vector<std::vector<double>> coords(d, std::vector<double>(P));
  parallel_for_range(P, workers, [&](long begin, long end) {
    for (long i = begin; i < end; ++i) {
      const BrownianPath path = sample_path(d, t, config.steps, key_combine(config.seed, 0, i));
      const Vec g = table.group_bm_formula(path);
      for (int c = 0; c < d; ++c) coords[c][i] = g[c];
    }
  });

  if (dump) {
    (*dump) << "# configHash=" << rep.config_hash << "\n";
    (*dump) << "path";
    for (int c = 0; c < d; ++c) (*dump) << ",g" << (c + 1);
    (*dump) << "\n";
    char buf[64];
    for (long i = 0; i < P; ++i) {
      (*dump) << i;
      for (int c = 0; c < d; ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", coords[c][i]);
        (*dump) << "," << buf;
      }
      (*dump) << "\n";
    }
  }

  for (int c = 0; c < d; ++c) {
    const MeanSE m = mean_se(coords[c]);
    CaseResult cr;
    cr.name = "mean/g" + std::to_string(c + 1);
    cr.kind = "estimate";
    cr.lhs = m.mean;
    cr.lhs_se = m.se;
    cr.verdict = "pass";
    rep.cases.push_back(cr);
  }

  rep.runtime_seconds = now_seconds() - t0;
  return rep;
}

}  // namespace nilheat
