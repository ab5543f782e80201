// Free nilpotent Lie algebras on a Hall basis.
//
// The Hall set is generated with the order "degree first, then creation
// order", where within degree one the generators are ordered e_1 > e_2 > ...
// (reversed index order).  A pair [u,v] is admitted when u > v and either u
// is a generator or u = [x,y] with y <= v.  With this convention the basis
// contains [e_1,e_2], [[e_1,e_2],e_1], [[e_1,e_2],e_2], ... and iterated
// brackets of low-index generators expand with coefficient +1.
//
// Structure constants are obtained exactly: each Hall element is expanded in
// the free associative algebra (integer word coefficients), the commutator of
// two basis elements is again a word polynomial, and its Hall coordinates are
// recovered by exact rational elimination.

#include <algorithm>
#include <map>
#include <vector>

#include "nilheat/algebra.hpp"
#include "nilheat/rational.hpp"

namespace nilheat {

namespace {

struct HallElement {
  int degree;
  int gen = -1;           // generator index for degree 1
  int left = -1, right = -1;  // children for degree >= 2
  int order_in_degree = 0;    // tiebreak within a degree
};

struct HallSet {
  int generators;
  std::vector<HallElement> elems;

  // total order: degree, then reversed index for generators, creation order above
  bool less(int a, int b) const {
    const HallElement& A = elems[a];
    const HallElement& B = elems[b];
    if (A.degree != B.degree) return A.degree < B.degree;
    return A.order_in_degree < B.order_in_degree;
  }
  bool leq(int a, int b) const { return a == b || less(a, b); }
};

HallSet build_hall_set(int d, int r) {
  HallSet H;
  H.generators = d;
  for (int i = 0; i < d; ++i) {
    HallElement e;
    e.degree = 1;
    e.gen = i;
    e.order_in_degree = d - 1 - i;  // e_1 is the largest generator
    H.elems.push_back(e);
  }
  for (int n = 2; n <= r; ++n) {
    int created = 0;
    const int existing = static_cast<int>(H.elems.size());
    for (int u = 0; u < existing; ++u) {
      for (int v = 0; v < existing; ++v) {
        if (H.elems[u].degree + H.elems[v].degree != n) continue;
        if (!H.less(v, u)) continue;
        if (H.elems[u].degree > 1 && !H.leq(H.elems[u].right, v)) continue;
        HallElement e;
        e.degree = n;
        e.left = u;
        e.right = v;
        e.order_in_degree = created++;
        H.elems.push_back(e);
      }
    }
  }
  return H;
}

// word polynomial: map from generator word to integer coefficient
using WordPoly = std::map<std::vector<int>, std::int64_t>;

WordPoly word_mul(const WordPoly& a, const WordPoly& b) {
  WordPoly out;
  for (const auto& [wa, ca] : a)
    for (const auto& [wb, cb] : b) {
      std::vector<int> w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out[w] += ca * cb;
    }
  return out;
}

WordPoly word_commutator(const WordPoly& a, const WordPoly& b) {
  WordPoly out = word_mul(a, b);
  for (const auto& [w, c] : word_mul(b, a)) out[w] -= c;
  for (auto it = out.begin(); it != out.end();)
    it = (it->second == 0) ? out.erase(it) : std::next(it);
  return out;
}

std::vector<WordPoly> expand_in_words(const HallSet& H) {
  std::vector<WordPoly> rho(H.elems.size());
  for (std::size_t i = 0; i < H.elems.size(); ++i) {
    const HallElement& e = H.elems[i];
    if (e.degree == 1)
      rho[i][{e.gen}] = 1;
    else
      rho[i] = word_commutator(rho[e.left], rho[e.right]);
  }
  return rho;
}

// Solve sum_c x_c rho(h_c) = W exactly for the Hall elements h_c of one degree.
std::vector<Rational> solve_in_degree(const std::vector<const WordPoly*>& basis,
                                      const WordPoly& W) {
  std::map<std::vector<int>, int> row_of;
  for (const WordPoly* bp : basis)
    for (const auto& [w, c] : *bp)
      row_of.emplace(w, static_cast<int>(row_of.size()));
  for (const auto& [w, c] : W) row_of.emplace(w, static_cast<int>(row_of.size()));

  const int rows = static_cast<int>(row_of.size());
  const int cols = static_cast<int>(basis.size());
  std::vector<std::vector<Rational>> A(rows, std::vector<Rational>(cols + 1, Rational(0)));
  for (int c = 0; c < cols; ++c)
    for (const auto& [w, coef] : *basis[c]) A[row_of[w]][c] = Rational(coef);
  for (const auto& [w, coef] : W) A[row_of[w]][cols] = Rational(coef);

  // exact Gaussian elimination
  int pivot_row = 0;
  std::vector<int> pivot_of_col(cols, -1);
  for (int c = 0; c < cols && pivot_row < rows; ++c) {
    int pr = -1;
    for (int rI = pivot_row; rI < rows; ++rI)
      if (!A[rI][c].is_zero()) {
        pr = rI;
        break;
      }
    if (pr < 0) continue;
    std::swap(A[pivot_row], A[pr]);
    const Rational inv = Rational(1) / A[pivot_row][c];
    for (int cc = c; cc <= cols; ++cc) A[pivot_row][cc] *= inv;
    for (int rI = 0; rI < rows; ++rI) {
      if (rI == pivot_row || A[rI][c].is_zero()) continue;
      const Rational f = A[rI][c];
      for (int cc = c; cc <= cols; ++cc) A[rI][cc] -= f * A[pivot_row][cc];
    }
    pivot_of_col[c] = pivot_row;
    ++pivot_row;
  }
  // consistency: every non-pivot row must have zero RHS
  for (int rI = pivot_row; rI < rows; ++rI)
    if (!A[rI][cols].is_zero())
      throw NumericError("hall: commutator not in the Hall span (internal error)");
  std::vector<Rational> x(cols, Rational(0));
  for (int c = 0; c < cols; ++c)
    if (pivot_of_col[c] >= 0) x[c] = A[pivot_of_col[c]][cols];
  return x;
}

}  // namespace

int witt_dimension(int d, int r) {
  // sum over m <= r of (1/m) sum_{e|m} mu(e) d^{m/e}
  auto mobius = [](int n) {
    int m = 1;
    for (int p = 2; p * p <= n; ++p) {
      if (n % p == 0) {
        n /= p;
        if (n % p == 0) return 0;
        m = -m;
      }
    }
    if (n > 1) m = -m;
    return m;
  };
  std::int64_t total = 0;
  for (int m = 1; m <= r; ++m) {
    std::int64_t s = 0;
    for (int e = 1; e <= m; ++e) {
      if (m % e != 0) continue;
      std::int64_t p = 1;
      for (int i = 0; i < m / e; ++i) p *= d;
      s += mobius(e) * p;
    }
    total += s / m;
  }
  return static_cast<int>(total);
}

LieAlgebra make_free_nilpotent(int generators, int step) {
  if (generators < 1) throw ArgumentError("make_free_nilpotent: need at least one generator");
  if (step < 1) throw ArgumentError("make_free_nilpotent: step must be positive");

  const HallSet H = build_hall_set(generators, step);
  const int dim = static_cast<int>(H.elems.size());
  if (dim != witt_dimension(generators, step))
    throw NumericError("make_free_nilpotent: Hall enumeration disagrees with the Witt formula");

  const std::vector<WordPoly> rho = expand_in_words(H);

  // group basis elements by degree for the per-degree solves
  std::vector<std::vector<int>> by_degree(step + 1);
  for (int i = 0; i < dim; ++i) by_degree[H.elems[i].degree].push_back(i);

  std::vector<Triplet> ts;
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      const int deg = H.elems[a].degree + H.elems[b].degree;
      if (deg > step) continue;
      const WordPoly W = word_commutator(rho[a], rho[b]);
      if (W.empty()) continue;
      std::vector<const WordPoly*> basis;
      for (int c : by_degree[deg]) basis.push_back(&rho[c]);
      const std::vector<Rational> x = solve_in_degree(basis, W);
      for (std::size_t ci = 0; ci < basis.size(); ++ci) {
        if (x[ci].is_zero()) continue;
        const double v = x[ci].to_double();
        ts.push_back({a, b, by_degree[deg][ci], v});
        ts.push_back({b, a, by_degree[deg][ci], -v});
      }
    }
  }

  const int declared = (dim == generators) ? 1 : step;  // d=1 or r=1 gives an abelian algebra
  return LieAlgebra(dim, declared, std::move(ts), "free-nilpotent");
}

}  // namespace nilheat
