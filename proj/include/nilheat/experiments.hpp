#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nilheat/algebra.hpp"
#include "nilheat/geometry.hpp"

namespace nilheat {

/// c(x) = x / (e^x - 1) with the removable singularity at 0 (c(0) = 1).
double c_function(double x);

/// (1 - e^{-x}) / x with the same convention; the log-Sobolev rate factor.
double one_minus_exp_over(double x);

/// Resolve an algebra descriptor: "heis3", "abelian:N", "free:d,r",
/// "random:dim,step,gamma,seed", or a path to a serialized algebra document.
LieAlgebra resolve_algebra(const std::string& descriptor);

struct ExperimentConfig {
  std::string experiment;  // harnack | logsob | converge | moments | simulate
  std::string algebra = "heis3";
  double t = 1.0;
  std::vector<double> ts;  // when non-empty, overrides t with several horizons
  int steps = 256;
  long paths = 100000;
  std::uint64_t seed = 1;
  double q = 2.0;           // harnack exponent
  std::vector<int> ladder;  // converge projection ladder
  std::string suite = "suite-v1";
  // optional custom translation elements (rows in algebra coordinates);
  // empty means the suite's built-in list
  std::vector<std::vector<double>> translations;
  // non-science fields (excluded from the config hash)
  int workers = 0;
  std::string out;
  std::string format = "json";

  std::vector<double> horizons() const { return ts.empty() ? std::vector<double>{t} : ts; }
  /// Canonical serialization of the science fields, used for hashing.
  std::string canonical() const;
  std::string hash() const;  // 16 hex digits, FNV-1a over canonical()
};

struct CaseResult {
  std::string name;
  std::string kind;     // "inequality" | "closedform" | "identity"
  double lhs = 0.0, lhs_se = 0.0;
  double rhs = 0.0, rhs_se = 0.0;
  double margin = 0.0;  // rhs - lhs (inequality) or -(|diff| - 3se) style per kind
  std::string verdict;  // pass | fail | inconclusive
  bool flagged = false; // e.g. auto-passed divergent bound factor
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string config_hash;
  std::vector<CaseResult> cases;
  double runtime_seconds = 0.0;

  /// 0 all pass, 2 any fail, 3 any inconclusive (and no fail).
  int exit_code() const;
  std::string to_json() const;
  std::string to_csv() const;
  std::string summary_lines() const;
};

/// Drop volatile lines (runtimeSeconds, timestamp) for byte-comparison.
std::string scrub_volatile(const std::string& report_text);

/// One-sided inequality verdict at the 3-standard-error contract.
std::string inequality_verdict(double margin, double se);
/// Two-sided consistency verdict: |diff| <= 3 se.
std::string closedform_verdict(double diff, double se);

// ---- versioned test suites (suite-v1) ----------------------------------------

struct BoundedFunction {
  std::string name;
  std::function<double(const Vec&)> eval;
};

std::vector<BoundedFunction> harnack_suite(const LieAlgebra& alg);
std::vector<std::pair<std::string, Polynomial>> logsob_suite(const LieAlgebra& alg);
std::vector<Vec> translation_suite(const LieAlgebra& alg);
/// The fixed direction u of the cosine test function.
Vec cosine_direction(int dim);

// ---- experiment drivers --------------------------------------------------------

ExperimentReport run_harnack(const ExperimentConfig& config);
ExperimentReport run_logsob(const ExperimentConfig& config);
ExperimentReport run_convergence(const ExperimentConfig& config);
ExperimentReport run_moments(const ExperimentConfig& config);

/// Draws `paths` samples of g_t and writes one row per path; returns the
/// summary report (per-coordinate mean and variance cases, no verdicts).
ExperimentReport run_simulate(const ExperimentConfig& config, std::ostream* dump);

}  // namespace nilheat
