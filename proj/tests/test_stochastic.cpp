#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "nilheat/bchd.hpp"
#include "nilheat/rng.hpp"
#include "nilheat/stochastic.hpp"

using namespace nilheat;

namespace {

double levy_area_half(const BrownianPath& p) {
  // (1/2)(S2_{12} - S2_{21}) computed directly from the increments
  double b1 = 0.0, b2 = 0.0, s12 = 0.0, s21 = 0.0;
  for (int j = 0; j < p.steps; ++j) {
    s12 += b1 * p.increments(j, 1);
    s21 += b2 * p.increments(j, 0);
    b1 += p.increments(j, 0);
    b2 += p.increments(j, 1);
  }
  return 0.5 * (s12 - s21);
}

}  // namespace

TEST_CASE("sample path: determinism, variance, shapes") {
  const BrownianPath a = sample_path(3, 2.0, 16, 99);
  const BrownianPath b = sample_path(3, 2.0, 16, 99);
  CHECK((a.increments - b.increments).norm() == 0.0);
  CHECK(a.increments.rows() == 16);
  CHECK(a.increments.cols() == 3);

  // single step: one increment with variance t_end per coordinate
  const BrownianPath s = sample_path(2, 0.7, 1, 5);
  CHECK(s.increments.rows() == 1);

  // empirical variance of the endpoint over many seeds
  const int trials = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < trials; ++i) {
    const double x = sample_path(1, 1.5, 4, key_combine(1000, i)).endpoint()[0];
    sum += x;
    sumsq += x * x;
  }
  const double var = sumsq / trials - (sum / trials) * (sum / trials);
  const double se = 1.5 * std::sqrt(2.0 / trials);  // SE of a Gaussian variance estimate
  CHECK(std::abs(var - 1.5) < 3.0 * se);

  CHECK_THROWS_AS(sample_path(0, 1.0, 4, 1), ArgumentError);
  CHECK_THROWS_AS(sample_path(2, 1.0, 0, 1), ArgumentError);
}

TEST_CASE("dyadic refinement consistency is exact (any step count)") {
  for (const int n : {4, 16, 64, 3, 10, 96}) {
    const BrownianPath coarse = sample_path(3, 1.3, n, 4242);
    const BrownianPath fine = sample_path(3, 1.3, 2 * n, 4242);
    for (int j = 0; j < n; ++j) {
      const Eigen::RowVectorXd paired =
          fine.increments.row(2 * j) + fine.increments.row(2 * j + 1);
      CHECK((paired - coarse.increments.row(j)).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("path dump round trip") {
  const BrownianPath p = sample_path(3, 0.75, 12, 99);
  const std::string text = path_to_text(p);
  const BrownianPath back = path_from_text(text);
  CHECK(back.dim == p.dim);
  CHECK(back.steps == p.steps);
  CHECK(back.t_end == p.t_end);
  CHECK(back.seed == p.seed);
  CHECK((back.increments - p.increments).norm() == 0.0);  // bit-exact
  CHECK(path_to_text(back) == text);
  CHECK_THROWS_AS(path_from_text("bogus"), ValidationError);
}

TEST_CASE("project path") {
  const BrownianPath p = sample_path(4, 1.0, 8, 7);
  const BrownianPath full = project_path(p, 4);
  CHECK((full.increments - p.increments).norm() == 0.0);
  const BrownianPath one = project_path(p, 1);
  CHECK(one.increments.col(0) == p.increments.col(0));
  CHECK(one.increments.rightCols(3).norm() == 0.0);
  CHECK_THROWS_AS(project_path(p, 0), ArgumentError);
  CHECK_THROWS_AS(project_path(p, 5), ArgumentError);
}

TEST_CASE("signature level 1 is the endpoint; level guard") {
  const BrownianPath p = sample_path(3, 1.0, 32, 11);
  const Signature sig = weighted_signature(p, 1);
  for (int c = 0; c < 3; ++c) CHECK(sig.levels[0][c] == doctest::Approx(p.endpoint()[c]));
  CHECK_THROWS_AS(weighted_signature(p, 9, {}, 1000), ResourceError);
}

TEST_CASE("weighted signature matches a nested-loop oracle") {
  const BrownianPath p = sample_path(2, 1.0, 8, 3);
  const std::vector<int> expo{2, 1};
  const Signature sig = weighted_signature(p, 2, expo);
  // oracle: sum over j1 < j2 of t1^2 t2 dB_{j1} (x) dB_{j2}
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double acc = 0.0;
      for (int j2 = 0; j2 < 8; ++j2)
        for (int j1 = 0; j1 < j2; ++j1)
          acc += std::pow(p.grid_time(j1), 2) * p.grid_time(j2) * p.increments(j1, a) *
                 p.increments(j2, b);
      CHECK(sig.levels[1][a * 2 + b] == doctest::Approx(acc).epsilon(1e-12));
    }
}

TEST_CASE("chen identity: signature concatenation") {
  const int N = 64;
  const BrownianPath p = sample_path(3, 1.0, N, 21);
  BrownianPath first = p, second = p;
  first.steps = second.steps = N / 2;
  first.t_end = second.t_end = 0.5;
  first.increments = p.increments.topRows(N / 2).eval();
  second.increments = p.increments.bottomRows(N / 2).eval();
  const Signature whole = weighted_signature(p, 3);
  const Signature glued =
      signature_concat(weighted_signature(first, 3), weighted_signature(second, 3));
  for (int l = 0; l < 3; ++l)
    for (std::size_t i = 0; i < whole.levels[l].size(); ++i)
      CHECK(glued.levels[l][i] == doctest::Approx(whole.levels[l][i]).epsilon(1e-10));
}

TEST_CASE("ito convention: level-2 diagonal mean and levy area variance") {
  const int P = 40000, N = 256;
  const double t = 1.0;
  double sum_diag = 0.0, sumsq_diag = 0.0;
  double sum_a2 = 0.0, sumsq_a2 = 0.0;
  for (int i = 0; i < P; ++i) {
    const BrownianPath p = sample_path(2, t, N, key_combine(777, i));
    const Signature sig = weighted_signature(p, 2);
    const double d11 = sig.levels[1][0];
    sum_diag += d11;
    sumsq_diag += d11 * d11;
    const double a = 0.5 * (sig.levels[1][1] - sig.levels[1][2]);
    sum_a2 += a * a;
    sumsq_a2 += a * a * a * a;
  }
  const double mean_diag = sum_diag / P;
  const double se_diag = std::sqrt((sumsq_diag / P - mean_diag * mean_diag) / P);
  CHECK(std::abs(mean_diag) < 3.0 * se_diag);  // no Stratonovich correction

  const double var_a = sum_a2 / P;
  const double se_a = std::sqrt((sumsq_a2 / P - var_a * var_a) / P);
  CHECK(std::abs(var_a - t * t / 4.0) < 3.0 * se_a + t * t / (4.0 * N));
}

TEST_CASE("term table: step-2 algebras skip all paired terms") {
  const LieAlgebra heis = make_heisenberg3();
  const TermTable table(heis);
  int live = 0;
  for (const auto& term : table.terms()) {
    if (term.alpha.q >= 1) CHECK(term.skip);
    if (!term.skip) ++live;
  }
  CHECK(live == 2);  // the two sigma in S_2 with alpha = (1,1)
}

TEST_CASE("group bm formula: abelian reduces to B_t; zero increments give identity") {
  const LieAlgebra ab = make_abelian(4);
  const TermTable table(ab);
  const BrownianPath p = sample_path(4, 1.0, 64, 9);
  CHECK((table.group_bm_formula(p) - p.endpoint()).norm() == 0.0);

  BrownianPath zero = p;
  zero.increments.setZero();
  CHECK(table.group_bm_formula(zero).norm() == 0.0);
}

TEST_CASE("group bm formula on heisenberg: exact discrete levy area and euler match") {
  const LieAlgebra heis = make_heisenberg3();
  const TermTable table(heis);
  for (int trial = 0; trial < 25; ++trial) {
    const BrownianPath p = sample_path(3, 1.0, 128, key_combine(31, trial));
    const Vec g = table.group_bm_formula(p);
    // horizontal coordinates are the endpoint
    CHECK(g[0] == doctest::Approx(p.endpoint()[0]).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(p.endpoint()[1]).epsilon(1e-14));
    // central coordinate adds half the antisymmetrized level-2 entry of the
    // horizontal pair on top of the endpoint's own third coordinate
    CHECK(g[2] - p.endpoint()[2] == doctest::Approx(levy_area_half(p)).epsilon(1e-12));
    // exact agreement with the BCHD product of increments at step 2
    const Vec ge = group_bm_euler(heis, p);
    CHECK((g - ge).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("step-2 mean vanishes (ito corrections cancel by antisymmetry)") {
  const LieAlgebra heis = make_heisenberg3();
  const TermTable table(heis);
  const int P = 20000;
  Vec sum = Vec::Zero(3), sumsq = Vec::Zero(3);
  for (int i = 0; i < P; ++i) {
    const Vec g = table.group_bm_formula(sample_path(3, 1.0, 64, key_combine(55, i)));
    sum += g;
    sumsq += g.cwiseProduct(g).eval();
  }
  for (int c = 0; c < 3; ++c) {
    const double mean = sum[c] / P;
    const double se = std::sqrt((sumsq[c] / P - mean * mean) / P);
    CHECK(std::abs(mean) < 3.0 * se);
  }
}

TEST_CASE("group bm euler: abelian sums increments; formula/euler converge at step 3") {
  const LieAlgebra ab = make_abelian(3);
  const BrownianPath p = sample_path(3, 1.0, 32, 3);
  CHECK((group_bm_euler(ab, p) - p.endpoint()).cwiseAbs().maxCoeff() < 1e-13);

  const LieAlgebra alg = make_free_nilpotent(2, 3);
  const TermTable table(alg);
  const int P = 400;
  std::vector<double> mse;
  for (const int N : {64, 256, 1024}) {
    double acc = 0.0;
    for (int i = 0; i < P; ++i) {
      const BrownianPath path = sample_path(alg.dim(), 1.0, N, key_combine(666, i));
      acc += (table.group_bm_formula(path) - group_bm_euler(alg, path)).squaredNorm();
    }
    mse.push_back(acc / P);
  }
  // strong error shrinks under refinement (matched seeds)
  CHECK(mse[1] < mse[0]);
  CHECK(mse[2] < mse[1]);
  CHECK(mse[2] < 0.1 * mse[0]);
}

TEST_CASE("formula/euler strong error shrinks on every algebra family up to r = 4") {
  Mat beta(2, 3);
  beta << 0.6, -0.3, 0.8, 0.2, -0.9, 0.4;
  std::vector<LieAlgebra> algs;
  algs.push_back(make_beta_extension(make_heisenberg3(), 2, beta));
  algs.push_back(make_random_hs(10, 3, 1.0, 404));
  algs.push_back(make_free_nilpotent(2, 4));
  for (const LieAlgebra& alg : algs) {
    const TermTable table(alg);
    const int P = 120;
    std::vector<double> mse;
    for (const int N : {32, 128, 512}) {
      double acc = 0.0;
      for (int i = 0; i < P; ++i) {
        const BrownianPath path = sample_path(alg.dim(), 1.0, N, key_combine(667, i));
        acc += (table.group_bm_formula(path) - group_bm_euler(alg, path)).squaredNorm();
      }
      mse.push_back(acc / P);
    }
    INFO(alg.label(), " mse: ", mse[0], " ", mse[1], " ", mse[2]);
    if (mse[0] < 1e-20) {
      // step-2 members agree exactly; the residual is roundoff
      CHECK(mse[2] < 1e-20);
      continue;
    }
    // decreasing with at most one noise inversion
    int inversions = 0;
    if (mse[1] > mse[0]) ++inversions;
    if (mse[2] > mse[1]) ++inversions;
    CHECK(inversions <= 1);
    CHECK(mse[2] < mse[0]);
  }
}

TEST_CASE("equivariance: rotating horizontal coordinates and path together") {
  const LieAlgebra heis = make_heisenberg3();
  const TermTable table(heis);
  const double theta = 0.73;
  const double c = std::cos(theta), s = std::sin(theta);
  for (int trial = 0; trial < 10; ++trial) {
    const BrownianPath p = sample_path(3, 1.0, 128, key_combine(81, trial));
    BrownianPath rotated = p;
    for (int j = 0; j < p.steps; ++j) {
      rotated.increments(j, 0) = c * p.increments(j, 0) - s * p.increments(j, 1);
      rotated.increments(j, 1) = s * p.increments(j, 0) + c * p.increments(j, 1);
    }
    const Vec g0 = table.group_bm_formula(p);
    const Vec g1 = table.group_bm_formula(rotated);
    CHECK(g1[2] == doctest::Approx(g0[2]).epsilon(1e-10));
  }
}

TEST_CASE("strichartz smooth path evaluation") {
  const LieAlgebra heis = make_heisenberg3();
  // single segment: driver t*v solves to v
  Vec v(3);
  v << 0.3, -0.8, 0.5;
  const Vec single = strichartz_smooth(heis, {Vec(Vec::Zero(3)), v});
  CHECK((single - v).cwiseAbs().maxCoeff() < 1e-12);

  // two segments X then Y: the group product (1,0,0)*(0,1,0) = (1,1,1/2)
  std::vector<Vec> knots{Vec(Vec::Zero(3)), Vec(Vec::Unit(3, 0)),
                         Vec(Vec::Unit(3, 0) + Vec::Unit(3, 1))};
  const Vec two = strichartz_smooth(heis, knots);
  CHECK(two[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(two[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(two[2] == doctest::Approx(0.5).epsilon(1e-10));

  // random 3-segment drivers on free nilpotent (2,3) vs the product oracle
  const LieAlgebra alg = make_free_nilpotent(2, 3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vec> ks{Vec(Vec::Zero(alg.dim()))};
    for (int seg = 0; seg < 3; ++seg) {
      Vec step(alg.dim());
      for (int i = 0; i < alg.dim(); ++i) step[i] = key_gaussian(key_combine(91, trial, seg, i));
      ks.push_back(ks.back() + step);
    }
    Vec product = Vec::Zero(alg.dim());
    for (int seg = 0; seg < 3; ++seg)
      product = multiply(alg, product, Vec(ks[seg + 1] - ks[seg]));
    const Vec viaformula = strichartz_smooth(alg, ks);
    CHECK((viaformula - product).cwiseAbs().maxCoeff() < 1e-8);
  }

  CHECK(strichartz_smooth(heis, {}).norm() == 0.0);
  CHECK(strichartz_smooth(heis, {v}).norm() == 0.0);  // K = 0 segments
}
