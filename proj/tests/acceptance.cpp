// Acceptance suite: one line per criterion, nonzero exit if any fails.
// An optional argv[1] selects a single criterion by number.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "nilheat/bchd.hpp"
#include "nilheat/combinatorics.hpp"
#include "nilheat/experiments.hpp"
#include "nilheat/geometry.hpp"
#include "nilheat/parallel.hpp"
#include "nilheat/rng.hpp"
#include "nilheat/stochastic.hpp"

using namespace nilheat;

namespace {

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<bool(std::string&)> run;
};

Vec random_vec(int d, std::uint64_t key) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = key_gaussian(key_combine(key, i));
  return v;
}

LieAlgebra make_filiform5() {
  std::vector<Triplet> ts;
  for (int i = 1; i <= 3; ++i) {
    ts.push_back({0, i, i + 1, 1.0});
    ts.push_back({i, 0, i + 1, -1.0});
  }
  return LieAlgebra(5, 4, ts, "filiform5");
}

bool report_margins_ok(const ExperimentReport& rep, std::string& note) {
  // the acceptance contract: inequality margins >= -3 SE, closed forms and
  // identities pass
  int checked = 0;
  for (const CaseResult& c : rep.cases) {
    ++checked;
    if (c.kind == "inequality") {
      if (c.flagged && c.verdict == "pass") continue;
      const double se = std::hypot(c.lhs_se, c.rhs_se);
      if (!(c.margin >= -3.0 * se)) {
        note += " violated: " + c.name;
        return false;
      }
    } else if (c.verdict != "pass") {
      note += " failed: " + c.name;
      return false;
    }
  }
  note += " (" + std::to_string(checked) + " cases)";
  return true;
}

// ---- criteria -----------------------------------------------------------------

bool c1_coefficient_tables(std::string& note) {
  // brute force from e(sigma) + exact binomials, n <= 4
  for (int n = 1; n <= 4; ++n) {
    for (const auto& sigma : all_permutations(n)) {
      int e = 0;
      for (int j = 0; j + 1 < n; ++j)
        if (sigma[j] > sigma[j + 1]) ++e;
      Rational binom(1);
      for (int i = 0; i < e; ++i) binom *= Rational(n - 1 - i, i + 1);
      const Rational expected =
          Rational((e % 2 == 0) ? 1 : -1) / (Rational(n) * Rational(n) * binom);
      if (!(strichartz_coefficient(n, sigma) == expected)) return false;
    }
  }
  if (!(strichartz_coefficient(2, {1, 2}) == Rational(1, 4))) return false;
  if (!(strichartz_coefficient(2, {2, 1}) == Rational(-1, 4))) return false;
  if (!(strichartz_coefficient(3, {2, 1, 3}) == Rational(-1, 18))) return false;
  note = " spot values and n<=4 brute force agree";
  return true;
}

bool c2_falpha(std::string& note) {
  const SimplexPolynomial golden = f_alpha(make_alpha({1, 2, 1, 2}));
  RationalPoly expected(3);
  expected.add_term({0, 1, 1}, Rational(1));
  expected.add_term({1, 0, 1}, Rational(-1));
  expected.add_term({0, 2, 0}, Rational(-1));
  expected.add_term({1, 1, 0}, Rational(1));
  if (!(golden.f == expected)) return false;

  int count = 0;
  for (int n = 1; n <= 6; ++n) {
    for (const AlphaIndex& alpha : multi_index_all(n)) {
      const SimplexPolynomial sp = f_alpha(alpha);
      RationalPoly rebuilt(alpha.p + 1);
      for (const auto& part : sp.parts)
        for (const auto& [se, c] : part.ftilde.terms()) {
          std::vector<int> e(se.begin(), se.end());
          e.push_back(part.a);
          rebuilt.add_term(e, part.b * c);
        }
      if (!(rebuilt == sp.f)) return false;
      ++count;
    }
  }
  note = " golden case + " + std::to_string(count) + " exact decompositions";
  return true;
}

bool c3_bchd(std::string& note) {
  Mat beta(2, 3);
  beta << 0.4, -0.8, 0.3, 1.0, 0.2, -0.6;
  const std::vector<LieAlgebra> algs = {make_heisenberg3(), make_free_nilpotent(2, 3),
                                        make_free_nilpotent(3, 2),
                                        make_beta_extension(make_heisenberg3(), 2, beta),
                                        make_random_hs(10, 3, 1.0, 2024)};
  for (const LieAlgebra& alg : algs) {
    const int d = alg.dim();
    for (int trial = 0; trial < 1000; ++trial) {
      const Vec a = random_vec(d, key_combine(101, alg.dim(), trial, 0));
      const Vec b = random_vec(d, key_combine(101, alg.dim(), trial, 1));
      const Vec c = random_vec(d, key_combine(101, alg.dim(), trial, 2));
      const Vec lhs = multiply(alg, multiply(alg, a, b), c);
      const Vec rhs = multiply(alg, a, multiply(alg, b, c));
      if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-10) return false;
    }
  }
  const Vec p = multiply(make_heisenberg3(), Vec(Vec::Unit(3, 0)), Vec(Vec::Unit(3, 1)));
  if (!(p[0] == 1.0 && p[1] == 1.0 && p[2] == 0.5)) return false;
  note = " associativity on 5 algebras x 1000 triples; Heisenberg product exact";
  return true;
}

bool c4_strichartz(std::string& note) {
  const LieAlgebra alg = make_free_nilpotent(2, 3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec> knots{Vec(Vec::Zero(alg.dim()))};
    for (int seg = 0; seg < 3; ++seg)
      knots.push_back(knots.back() + random_vec(alg.dim(), key_combine(202, trial, seg)));
    Vec product = Vec::Zero(alg.dim());
    for (int seg = 0; seg < 3; ++seg)
      product = multiply(alg, product, Vec(knots[seg + 1] - knots[seg]));
    worst = std::max(
        worst, (strichartz_smooth(alg, knots) - product).cwiseAbs().maxCoeff());
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, " max deviation %.2e over 100 drivers", worst);
  note = buf;
  return worst < 1e-8;
}

bool c5_step2_equivalence(std::string& note) {
  const LieAlgebra heis = make_heisenberg3();
  const TermTable table(heis);
  double worst = 0.0;
  std::vector<double> worst_per(1000, 0.0);
  parallel_for_range(1000, resolve_workers(0), [&](long b, long e) {
    for (long i = b; i < e; ++i) {
      const BrownianPath path = sample_path(3, 1.0, 1024, key_combine(303, i));
      worst_per[i] =
          (table.group_bm_formula(path) - group_bm_euler(heis, path)).cwiseAbs().maxCoeff();
    }
  });
  for (double w : worst_per) worst = std::max(worst, w);
  char buf[64];
  std::snprintf(buf, sizeof buf, " max |formula - euler| = %.2e", worst);
  note = buf;
  return worst < 1e-12;
}

bool c6_step3_slope(std::string& note) {
  const LieAlgebra alg = make_free_nilpotent(2, 3);
  const TermTable table(alg);
  const int P = 1500;
  std::vector<double> ns, mses;
  for (int N = 64; N <= 4096; N *= 2) {
    std::vector<double> acc(P, 0.0);
    parallel_for_range(P, resolve_workers(0), [&](long b, long e) {
      for (long i = b; i < e; ++i) {
        const BrownianPath path = sample_path(alg.dim(), 1.0, N, key_combine(404, i));
        acc[i] = (table.group_bm_formula(path) - group_bm_euler(alg, path)).squaredNorm();
      }
    });
    double mse = 0.0;
    for (double a : acc) mse += a;
    mse /= P;
    ns.push_back(std::log2(static_cast<double>(N)));
    mses.push_back(std::log2(mse));
  }
  // least-squares slope
  const int K = static_cast<int>(ns.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < K; ++i) {
    sx += ns[i];
    sy += mses[i];
    sxx += ns[i] * ns[i];
    sxy += ns[i] * mses[i];
  }
  const double slope = (K * sxy - sx * sy) / (K * sxx - sx * sx);
  char buf[64];
  std::snprintf(buf, sizeof buf, " slope %.3f (target -1.0 +/- 0.35)", slope);
  note = buf;
  return std::abs(slope + 1.0) <= 0.35;
}

bool c7_moments(std::string& note) {
  ExperimentConfig cfg;
  cfg.algebra = "heis3";
  cfg.t = 1.0;
  cfg.steps = 1024;
  cfg.paths = 100000;
  cfg.seed = 707;
  const ExperimentReport rep = run_moments(cfg);
  return report_margins_ok(rep, note);
}

bool c8_ricci(std::string& note) {
  const RicciReport heis = ricci_lower_bound(make_heisenberg3());
  Mat expected = Mat::Zero(3, 3);
  expected.diagonal() << -0.5, -0.5, 0.5;
  if ((heis.ricci - expected).cwiseAbs().maxCoeff() > 1e-12) return false;
  if (std::abs(heis.k + 0.5) > 1e-12) return false;

  const LieAlgebra alg = make_random_hs(12, 3, 1.0, 808);
  const RicciReport rep = ricci_lower_bound(alg, 20, 909);
  if (rep.witness_kpi.size() != 20) return false;
  for (const double kpi : rep.witness_kpi) {
    if (!(rep.k <= kpi + 1e-10)) return false;
    if (!(kpi <= 1e-12)) return false;
    if (!(-0.5 * alg.bracket_hs_norm_sq() - 1e-12 <= rep.k)) return false;
  }
  note = " Heisenberg exact; chain -hs^2/2 <= k <= k_pi <= 0 on 20 subalgebras";
  return true;
}

bool c9_harnack(std::string& note) {
  for (const std::string& a : {std::string("abelian:4"), std::string("heis3"),
                               std::string("free:2,3")}) {
    ExperimentConfig cfg;
    cfg.algebra = a;
    cfg.ts = {0.5, 1.0};
    cfg.steps = 256;
    cfg.paths = 100000;
    cfg.seed = 1009;
    cfg.q = 2.0;
    const ExperimentReport rep = run_harnack(cfg);
    std::string sub;
    if (!report_margins_ok(rep, sub)) {
      note = " " + a + sub;
      return false;
    }
    note += " " + a + " ok";
  }
  return true;
}

bool c10_logsob(std::string& note) {
  for (const std::string& a : {std::string("abelian:1"), std::string("abelian:4"),
                               std::string("heis3"), std::string("free:2,3")}) {
    ExperimentConfig cfg;
    cfg.algebra = a;
    cfg.ts = {0.5, 1.0};
    cfg.steps = 256;
    cfg.paths = 100000;
    cfg.seed = 1010;
    const ExperimentReport rep = run_logsob(cfg);
    std::string sub;
    if (!report_margins_ok(rep, sub)) {
      note = " " + a + sub;
      return false;
    }
    note += " " + a + " ok";
  }
  return true;
}

bool c11_convergence(std::string& note) {
  ExperimentConfig cfg;
  cfg.algebra = "random:12,3,1.0,11";
  cfg.t = 1.0;
  cfg.steps = 256;
  cfg.paths = 2000;
  cfg.seed = 1111;
  cfg.ladder = {2, 4, 8, 12};
  const ExperimentReport rep = run_convergence(cfg);
  std::string sub;
  if (!report_margins_ok(rep, sub)) {
    note = " random-hs" + sub;
    return false;
  }
  note = " random-hs" + sub;

  ExperimentConfig ab = cfg;
  ab.algebra = "abelian:12";
  const ExperimentReport arep = run_convergence(ab);
  std::string absub;
  if (!report_margins_ok(arep, absub)) {
    note += " abelian" + absub;
    return false;
  }
  note += " abelian control ok";
  return true;
}

bool c12_hs_bounds(std::string& note) {
  const std::vector<LieAlgebra> algs = {make_heisenberg3(), make_free_nilpotent(2, 3),
                                        make_filiform5(), make_random_hs(6, 2, 1.0, 1212)};
  for (const LieAlgebra& alg : algs) {
    const double b = std::sqrt(alg.bracket_hs_norm_sq());
    for (int n = 2; n <= std::min(4, alg.step()); ++n) {
      // the iterated-bracket norm chain
      if (std::sqrt(iterated_bracket_hs_norm_sq(alg, n)) > std::pow(b, n - 1) + 1e-9)
        return false;
      for (const auto& sigma : all_permutations(n)) {
        for (const AlphaIndex& alpha : multi_index_all(n)) {
          const auto op = contraction_operator(alg, n, sigma, alpha);
          if (!std::isfinite(op.hs_norm_sq())) return false;
          // brute-force contraction equivalence on explicit tuples
          const int d = alg.dim();
          std::vector<int> tuple;
          std::vector<Vec> ks;
          for (int i = 0; i < alpha.p; ++i) {
            tuple.push_back((2 * i + n + alpha.m) % d);
            ks.push_back(Vec::Unit(d, tuple.back()));
          }
          // expanded-tensor evaluation with sigma directly
          Vec brute = Vec::Zero(d);
          if (n <= alg.step()) {
            std::vector<int> pair_idx(alpha.q, 0);
            while (true) {
              std::vector<Vec> slots;
              int kslot = 0, pair = 0;
              for (int i = 0; i < alpha.m; ++i) {
                if (alpha.alpha[i] == 1) {
                  slots.push_back(ks[kslot++]);
                } else {
                  slots.push_back(Vec::Unit(d, pair_idx[pair]));
                  slots.push_back(Vec::Unit(d, pair_idx[pair]));
                  ++pair;
                }
              }
              Vec acc = alg.bracket(slots[sigma[0] - 1], slots[sigma[1] - 1]);
              for (int bb = 2; bb < n; ++bb) acc = alg.bracket(acc, slots[sigma[bb] - 1]);
              brute += acc;
              int cc = 0;
              while (cc < alpha.q && ++pair_idx[cc] == d) pair_idx[cc++] = 0;
              if (cc == alpha.q) break;
            }
          }
          if ((op.apply_basis(alg, tuple) - brute).cwiseAbs().maxCoeff() > 1e-12) return false;
        }
      }
    }
  }
  note = " norm chain + finite HS norms + contraction equivalence (n<=4, dim<=6)";
  return true;
}

bool c13_reproducibility(std::string& note) {
  ExperimentConfig cfg;
  cfg.algebra = "heis3";
  cfg.t = 1.0;
  cfg.steps = 128;
  cfg.paths = 3000;
  cfg.seed = 1313;
  cfg.q = 2.0;
  const ExperimentReport a = run_harnack(cfg);
  const ExperimentReport b = run_harnack(cfg);
  if (scrub_volatile(a.to_json()) != scrub_volatile(b.to_json())) return false;
  if (scrub_volatile(a.to_csv()) != scrub_volatile(b.to_csv())) return false;
  ExperimentConfig w1 = cfg, w2 = cfg;
  w1.workers = 1;
  w2.workers = 2;
  if (scrub_volatile(run_moments(w1).to_json()) != scrub_volatile(run_moments(w2).to_json()))
    return false;
  note = " byte-identical reports (json+csv, reruns and worker counts)";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> cs = {
      {1, "coefficient tables c_n^sigma", 1.0, c1_coefficient_tables},
      {2, "f_alpha golden case and exact decomposition", 1.0, c2_falpha},
      {3, "BCHD associativity and Heisenberg product", 10.0, c3_bchd},
      {4, "smooth-path Strichartz vs product of exponentials", 30.0, c4_strichartz},
      {5, "step-2 exact formula/euler equivalence", 30.0, c5_step2_equivalence},
      {6, "step-3 strong convergence slope", 300.0, c6_step3_slope},
      {7, "Heisenberg moments at t=1", 120.0, c7_moments},
      {8, "Ricci closed form and k_pi chain", 10.0, c8_ricci},
      {9, "integrated Harnack inequality", 600.0, c9_harnack},
      {10, "log-Sobolev inequality", 600.0, c10_logsob},
      {11, "projection convergence", 300.0, c11_convergence},
      {12, "Hilbert-Schmidt bounds and contraction equivalence", 120.0, c12_hs_bounds},
      {13, "report reproducibility", 120.0, c13_reproducibility},
  };

  const int only = (argc > 1) ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (const Criterion& c : cs) {
    if (only > 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    std::string notes;
    bool ok = false;
    try {
      ok = c.run(notes);
    } catch (const std::exception& e) {
      notes = std::string(" exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed < c.budget_seconds;
    if (!in_budget) notes += " [over budget]";
    const bool pass = ok && in_budget;
    std::printf("[%s] C%-2d %-50s %7.2fs%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                elapsed, notes.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  if (only == 0)
    std::printf("%s: %d/13 criteria passed\n", failures ? "FAILURE" : "SUCCESS", 13 - failures);
  return failures ? 1 : 0;
}
