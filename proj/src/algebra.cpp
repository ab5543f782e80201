#include "nilheat/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "nilheat/rng.hpp"
#include "json.hpp"

namespace nilheat {

namespace {
constexpr double kAxiomTol = 1e-12;

void sort_triplets(std::vector<Triplet>& ts) {
  std::sort(ts.begin(), ts.end(), [](const Triplet& a, const Triplet& b) {
    if (a.i != b.i) return a.i < b.i;
    if (a.j != b.j) return a.j < b.j;
    return a.k < b.k;
  });
}
}  // namespace

LieAlgebra::LieAlgebra(int dim, int step, std::vector<Triplet> triplets, std::string label)
    : m_dim(dim), m_step(step), m_label(std::move(label)) {
  if (dim < 1) throw ArgumentError("LieAlgebra: dim must be positive");
  if (step < 1) throw ArgumentError("LieAlgebra: step must be positive");

  // merge duplicates, drop exact zeros
  std::map<std::tuple<int, int, int>, double> merged;
  for (const Triplet& t : triplets) {
    if (t.i < 0 || t.i >= dim || t.j < 0 || t.j >= dim || t.k < 0 || t.k >= dim)
      throw ArgumentError("LieAlgebra: triplet index out of range");
    merged[{t.i, t.j, t.k}] += t.value;
  }
  m_triplets.clear();
  for (const auto& [idx, v] : merged)
    if (v != 0.0) m_triplets.push_back({std::get<0>(idx), std::get<1>(idx), std::get<2>(idx), v});
  sort_triplets(m_triplets);

  m_slice_of.assign(static_cast<std::size_t>(dim) * dim, -1);
  for (const Triplet& t : m_triplets) {
    const std::size_t flat = static_cast<std::size_t>(t.i) * dim + t.j;
    if (m_slice_of[flat] < 0) {
      m_slice_of[flat] = static_cast<int>(m_slices.size());
      m_slices.push_back({t.i, t.j, {}});
    }
    m_slices[m_slice_of[flat]].kv.emplace_back(t.k, t.value);
  }

  for (const Slice& s : m_slices) {
    double norm2 = 0.0;
    for (const auto& [k, v] : s.kv) norm2 += v * v;
    m_hs_norm_sq += norm2;
  }
}

Vec LieAlgebra::bracket(const Vec& x, const Vec& y) const {
  check_conform(x);
  check_conform(y);
  Vec out = Vec::Zero(m_dim);
  bracket_acc(x, y, 1.0, out);
  return out;
}

void LieAlgebra::bracket_acc(const Vec& x, const Vec& y, double scale, Vec& out) const {
  for (const Slice& s : m_slices) {
    const double c = scale * x[s.i] * y[s.j];
    if (c == 0.0) continue;
    for (const auto& [k, v] : s.kv) out[k] += c * v;
  }
}

Vec LieAlgebra::bracket_basis(int i, int j) const {
  Vec out = Vec::Zero(m_dim);
  const int si = m_slice_of[static_cast<std::size_t>(i) * m_dim + j];
  if (si >= 0)
    for (const auto& [k, v] : m_slices[si].kv) out[k] += v;
  return out;
}

Mat LieAlgebra::ad(const Vec& x) const {
  check_conform(x);
  Mat A = Mat::Zero(m_dim, m_dim);
  for (const Slice& s : m_slices) {
    const double c = x[s.i];
    if (c == 0.0) continue;
    for (const auto& [k, v] : s.kv) A(k, s.j) += c * v;
  }
  return A;
}

Mat LieAlgebra::ad_basis(int i) const {
  Mat A = Mat::Zero(m_dim, m_dim);
  for (const Slice& s : m_slices) {
    if (s.i != i) continue;
    for (const auto& [k, v] : s.kv) A(k, s.j) += v;
  }
  return A;
}

Vec iterated_bracket(const LieAlgebra& alg, const std::vector<Vec>& vectors) {
  if (vectors.empty()) throw ArgumentError("iterated_bracket: empty list");
  Vec acc = vectors.front();
  alg.check_conform(acc);
  for (std::size_t i = 1; i < vectors.size(); ++i) acc = alg.bracket(acc, vectors[i]);
  return acc;
}

double iterated_bracket_hs_norm_sq(const LieAlgebra& alg, int n) {
  if (n < 2) throw ArgumentError("iterated_bracket_hs_norm_sq: n must be >= 2");
  const int d = alg.dim();
  // A_j : x -> [x, e_j] = -ad(e_j)
  std::vector<Mat> A(d);
  for (int j = 0; j < d; ++j) A[j] = -alg.ad_basis(j);
  Mat G = Mat::Identity(d, d);  // G_1
  for (int level = 2; level <= n; ++level) {
    Mat next = Mat::Zero(d, d);
    for (int j = 0; j < d; ++j) next += A[j] * G * A[j].transpose();
    G = next;
    if (G.trace() == 0.0) break;  // deeper levels stay zero
  }
  return G.trace();
}

std::string ValidationReport::summary() const {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "%s  step=%d (declared %d)  hs2=%.12g  antisym=%.3g  jacobi=%.3g",
                pass ? "pass" : "fail", detected_step, declared_step, hs_norm_sq,
                max_antisymmetry, max_jacobi);
  return buf;
}

ValidationReport validate(const LieAlgebra& alg) {
  ValidationReport rep;
  rep.declared_step = alg.step();
  rep.hs_norm_sq = alg.bracket_hs_norm_sq();

  const int d = alg.dim();
  // antisymmetry on the stored tensor
  std::map<std::tuple<int, int, int>, double> entry;
  for (const Triplet& t : alg.triplets()) entry[{t.i, t.j, t.k}] = t.value;
  for (const Triplet& t : alg.triplets()) {
    double mirror = 0.0;
    auto it = entry.find({t.j, t.i, t.k});
    if (it != entry.end()) mirror = it->second;
    rep.max_antisymmetry = std::max(rep.max_antisymmetry, std::abs(t.value + mirror));
  }

  // Jacobi on all basis triples
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Vec bij = alg.bracket_basis(i, j);
      for (int k = 0; k < d; ++k) {
        Vec cyc = alg.bracket(bij, Vec(Vec::Unit(d, k)));
        cyc += alg.bracket(alg.bracket_basis(j, k), Vec(Vec::Unit(d, i)));
        cyc += alg.bracket(alg.bracket_basis(k, i), Vec(Vec::Unit(d, j)));
        rep.max_jacobi = std::max(rep.max_jacobi, cyc.cwiseAbs().maxCoeff());
      }
    }
  }

  rep.detected_step = 1;
  for (int n = 2; n <= alg.step() + 1; ++n) {
    if (std::sqrt(iterated_bracket_hs_norm_sq(alg, n)) > kAxiomTol) rep.detected_step = n;
  }

  rep.pass = rep.max_antisymmetry <= kAxiomTol && rep.max_jacobi <= kAxiomTol &&
             rep.detected_step == rep.declared_step;
  return rep;
}

// ---- constructors ----------------------------------------------------------

LieAlgebra make_abelian(int dim) { return LieAlgebra(dim, 1, {}, "abelian"); }

LieAlgebra make_heisenberg_like(int d1, int d2, const std::vector<double>& omega) {
  if (d1 < 1 || d2 < 1) throw ArgumentError("make_heisenberg_like: dims must be positive");
  if (omega.size() != static_cast<std::size_t>(d1) * d1 * d2)
    throw ConformanceError("make_heisenberg_like: omega has wrong shape");
  auto w = [&](int a, int b, int c) {
    return omega[(static_cast<std::size_t>(a) * d1 + b) * d2 + c];
  };
  bool any = false;
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d1; ++b)
      for (int c = 0; c < d2; ++c) {
        if (std::abs(w(a, b, c) + w(b, a, c)) > kAxiomTol)
          throw ValidationError("make_heisenberg_like: omega is not antisymmetric");
        if (w(a, b, c) != 0.0) any = true;
      }
  std::vector<Triplet> ts;
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d1; ++b)
      for (int c = 0; c < d2; ++c)
        if (w(a, b, c) != 0.0) ts.push_back({a, b, d1 + c, w(a, b, c)});
  return LieAlgebra(d1 + d2, any ? 2 : 1, std::move(ts), "heisenberg-like");
}

LieAlgebra make_heisenberg3() {
  std::vector<double> omega(4, 0.0);
  omega[0 * 2 + 1] = 1.0;   // omega(h1,h2) = +Z
  omega[1 * 2 + 0] = -1.0;  // omega index layout: (a*d1+b)*d2+c with d2=1
  LieAlgebra alg = make_heisenberg_like(2, 1, omega);
  return LieAlgebra(alg.dim(), alg.step(), alg.triplets(), "heisenberg3");
}

LieAlgebra make_beta_extension(const LieAlgebra& base, int dH, const Mat& beta) {
  if (dH < 1) throw ArgumentError("make_beta_extension: dH must be positive");
  if (beta.rows() != dH || beta.cols() != base.dim())
    throw ConformanceError("make_beta_extension: beta must be dH x dim(base)");
  const int dv = base.dim();
  const int dim = dH + dv;
  std::vector<Triplet> ts;
  auto add = [&](int i, int j, const Vec& img) {
    for (int k = 0; k < dv; ++k)
      if (img[k] != 0.0) ts.push_back({i, j, dH + k, img[k]});
  };
  // images of the H basis under beta, as base vectors
  std::vector<Vec> b(dH);
  for (int a = 0; a < dH; ++a) b[a] = beta.row(a).transpose();
  // H x H -> [bX, bY]
  for (int a = 0; a < dH; ++a)
    for (int c = 0; c < dH; ++c)
      if (a != c) add(a, c, base.bracket(b[a], b[c]));
  // H x V -> [bX, U]  and  V x H -> -[bY, V] = [V, bY]
  for (int a = 0; a < dH; ++a)
    for (int u = 0; u < dv; ++u) {
      const Vec img = base.bracket(b[a], Vec(Vec::Unit(dv, u)));
      add(a, dH + u, img);
      add(dH + u, a, -img);
    }
  // V x V -> base bracket
  for (const Triplet& t : base.triplets()) ts.push_back({dH + t.i, dH + t.j, dH + t.k, t.value});
  return LieAlgebra(dim, base.step(), std::move(ts), base.label() + "+beta-ext");
}

// make_random_hs: the ambient algebra is the strictly upper-triangular part of
// an infinite matrix whose scalar indices carry levels 0..step cyclically.
// Basis position n is the n-th pair (p,q), p<q with level(p)<level(q),
// enumerated by column then row; with this order the bracket of two positions
// lands on a strictly earlier position, so every prefix is closed.  Structure
// constants come from the matrix commutator rescaled by a diagonal change of
// basis, which preserves Jacobi exactly.
namespace {
struct MatrixPos {
  int p, q;
};

std::vector<MatrixPos> enumerate_positions(int count, int step) {
  std::vector<MatrixPos> pos;
  const int levels = step + 1;
  for (int q = 1; static_cast<int>(pos.size()) < count; ++q) {
    for (int p = 0; p < q && static_cast<int>(pos.size()) < count; ++p) {
      if (p % levels < q % levels) pos.push_back({p, q});
    }
    if (q > 8 * (count + levels)) throw ConstructionError("make_random_hs: enumeration stalled");
  }
  return pos;
}
}  // namespace

LieAlgebra make_random_hs(int dim, int step, double gamma, std::uint64_t seed) {
  if (dim < 2) throw ArgumentError("make_random_hs: dim must be >= 2");
  if (step < 1) throw ArgumentError("make_random_hs: step must be positive");
  if (gamma <= 0.0) throw ArgumentError("make_random_hs: gamma must be positive");
  if (step > 1 && dim < step * (step + 1) / 2)
    throw ConstructionError("make_random_hs: dim too small to realize the requested step");

  const std::vector<MatrixPos> pos = enumerate_positions(dim, step);
  std::map<std::pair<int, int>, int> index_of;
  for (int n = 0; n < dim; ++n) index_of[{pos[n].p, pos[n].q}] = n;

  // per-basis-element jitter in [2^-1/2, 2^1/2], independent of dim
  std::vector<double> jitter(dim);
  for (int n = 0; n < dim; ++n)
    jitter[n] = std::exp2(key_uniform(key_combine(seed, 0x6a09e667f3bcc908ULL, n)) - 0.5);

  // shared-index decay: C ~ (1+b)^{-2*gamma} * exp(-2*gap*gap'), see notes in header
  auto shared_scale = [&](int b) { return std::pow(1.0 + b, -2.0 * gamma); };

  std::vector<Triplet> ts;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (i == j) continue;
      const auto [a, bcol] = pos[i];
      const auto [c, dcol] = pos[j];
      // [E_{a,b}, E_{c,d}] = delta_{bc} E_{a,d} - delta_{da} E_{c,b}
      if (bcol == c) {
        auto it = index_of.find({a, dcol});
        if (it != index_of.end()) {
          const int k = it->second;
          const double gapfac = std::exp(-2.0 * double(bcol - a) * double(dcol - bcol));
          const double v = shared_scale(bcol) * gapfac * jitter[i] * jitter[j] / jitter[k];
          ts.push_back({i, j, k, v});
        }
      }
      if (dcol == a) {
        auto it = index_of.find({c, bcol});
        if (it != index_of.end()) {
          const int k = it->second;
          const double gapfac = std::exp(-2.0 * double(a - c) * double(bcol - a));
          const double v = shared_scale(a) * gapfac * jitter[i] * jitter[j] / jitter[k];
          ts.push_back({i, j, k, -v});
        }
      }
    }
  }
  return LieAlgebra(dim, step, std::move(ts), "random-hs");
}

// ---- subalgebras -----------------------------------------------------------

Subalgebra generated_subalgebra(const LieAlgebra& alg, const std::vector<Vec>& generators) {
  if (generators.empty()) throw ArgumentError("generated_subalgebra: empty generator list");
  const int d = alg.dim();
  constexpr double kRankTol = 1e-10;

  std::vector<Vec> basis;
  auto insert = [&](Vec v) -> bool {
    for (const Vec& u : basis) v -= u.dot(v) * u;
    const double nrm = v.norm();
    if (nrm <= kRankTol) return false;
    // second orthogonalization pass for numerical hygiene
    v /= nrm;
    for (const Vec& u : basis) v -= u.dot(v) * u;
    v.normalize();
    basis.push_back(v);
    return true;
  };

  for (const Vec& g : generators) {
    alg.check_conform(g);
    if (!insert(g)) throw RankError("generated_subalgebra: generators are linearly dependent");
  }

  // close under bracket; terminates by nilpotency
  std::size_t frontier_begin = 0;
  while (frontier_begin < basis.size()) {
    const std::size_t frontier_end = basis.size();
    for (std::size_t a = 0; a < frontier_end; ++a)
      for (std::size_t b = std::max(a + 1, frontier_begin); b < frontier_end; ++b)
        insert(alg.bracket(basis[a], basis[b]));
    frontier_begin = frontier_end;
  }

  const int sd = static_cast<int>(basis.size());
  Mat E(d, sd);
  for (int a = 0; a < sd; ++a) E.col(a) = basis[a];

  std::vector<Triplet> ts;
  for (int a = 0; a < sd; ++a)
    for (int b = 0; b < sd; ++b) {
      if (a == b) continue;
      const Vec br = alg.bracket(basis[a], basis[b]);
      for (int c = 0; c < sd; ++c) {
        const double coef = basis[c].dot(br);
        if (std::abs(coef) > 1e-14) ts.push_back({a, b, c, coef});
      }
    }
  LieAlgebra probe(sd, alg.step(), ts, alg.label() + "-sub");
  int detected = 1;
  for (int n = 2; n <= alg.step(); ++n)
    if (std::sqrt(iterated_bracket_hs_norm_sq(probe, n)) > kAxiomTol) detected = n;
  return Subalgebra{LieAlgebra(sd, detected, std::move(ts), alg.label() + "-sub"), E};
}

// ---- serialization ---------------------------------------------------------

std::string algebra_to_json(const LieAlgebra& alg) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"label\": " << nlohmann::json(alg.label()).dump() << ",\n";
  os << "  \"dim\": " << alg.dim() << ",\n";
  os << "  \"step\": " << alg.step() << ",\n";
  os << "  \"triplets\": [";
  char buf[64];
  bool first = true;
  for (const Triplet& t : alg.triplets()) {
    os << (first ? "\n" : ",\n");
    first = false;
    std::snprintf(buf, sizeof buf, "%.17g", t.value);
    os << "    [" << t.i << ", " << t.j << ", " << t.k << ", " << buf << "]";
  }
  os << (first ? "]\n" : "\n  ]\n");
  os << "}\n";
  return os.str();
}

LieAlgebra algebra_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("algebra document is not valid JSON: ") + e.what());
  }
  if (!j.contains("dim") || !j.contains("step") || !j.contains("triplets"))
    throw ValidationError("algebra document missing required fields");
  std::vector<Triplet> ts;
  for (const auto& row : j["triplets"]) {
    if (!row.is_array() || row.size() != 4)
      throw ValidationError("algebra triplet rows must be [i,j,k,value]");
    ts.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<int>(), row[3].get<double>()});
  }
  return LieAlgebra(j["dim"].get<int>(), j["step"].get<int>(), std::move(ts),
                    j.value("label", std::string("unnamed")));
}

void save_algebra(const LieAlgebra& alg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("save_algebra: cannot open " + path);
  out << algebra_to_json(alg);
}

LieAlgebra load_algebra(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("load_algebra: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return algebra_from_json(ss.str());
}

}  // namespace nilheat
