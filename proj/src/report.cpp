// Report serialization, config hashing, verdict rules.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "nilheat/experiments.hpp"

namespace nilheat {

namespace {
std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}
}  // namespace

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "experiment=" << experiment << ";algebra=" << algebra << ";t=" << fmt_double(t) << ";ts=";
  for (double v : ts) os << fmt_double(v) << ",";
  os << ";steps=" << steps << ";paths=" << paths << ";seed=" << seed << ";q=" << fmt_double(q)
     << ";ladder=";
  for (int v : ladder) os << v << ",";
  os << ";suite=" << suite << ";translations=";
  for (const auto& h : translations) {
    for (double v : h) os << fmt_double(v) << " ";
    os << ",";
  }
  return os.str();
}

std::string ExperimentConfig::hash() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

int ExperimentReport::exit_code() const {
  bool any_fail = false, any_inconclusive = false;
  for (const CaseResult& c : cases) {
    if (c.verdict == "fail") any_fail = true;
    if (c.verdict == "inconclusive") any_inconclusive = true;
  }
  if (any_fail) return 2;
  if (any_inconclusive) return 3;
  return 0;
}

std::string ExperimentReport::to_json() const {
  std::ostringstream os;
  os << "{\n";
  os << "  \"config\": {\n";
  os << "    \"experiment\": \"" << json_escape(config.experiment) << "\",\n";
  os << "    \"algebra\": \"" << json_escape(config.algebra) << "\",\n";
  os << "    \"t\": " << fmt_double(config.t) << ",\n";
  os << "    \"ts\": [";
  for (std::size_t i = 0; i < config.ts.size(); ++i)
    os << (i ? ", " : "") << fmt_double(config.ts[i]);
  os << "],\n";
  os << "    \"steps\": " << config.steps << ",\n";
  os << "    \"paths\": " << config.paths << ",\n";
  os << "    \"seed\": " << config.seed << ",\n";
  os << "    \"q\": " << fmt_double(config.q) << ",\n";
  os << "    \"ladder\": [";
  for (std::size_t i = 0; i < config.ladder.size(); ++i)
    os << (i ? ", " : "") << config.ladder[i];
  os << "],\n";
  os << "    \"suite\": \"" << json_escape(config.suite) << "\"\n";
  os << "  },\n";
  os << "  \"configHash\": \"" << config_hash << "\",\n";
  os << "  \"cases\": [\n";
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const CaseResult& c = cases[i];
    os << "    {\"name\": \"" << json_escape(c.name) << "\", \"kind\": \"" << c.kind
       << "\", \"lhs\": " << fmt_double(c.lhs) << ", \"lhsSE\": " << fmt_double(c.lhs_se)
       << ", \"rhs\": " << fmt_double(c.rhs) << ", \"rhsSE\": " << fmt_double(c.rhs_se)
       << ", \"margin\": " << fmt_double(c.margin) << ", \"verdict\": \"" << c.verdict
       << "\", \"flagged\": " << (c.flagged ? "true" : "false") << "}"
       << (i + 1 < cases.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  os << "  \"runtimeSeconds\": " << fmt_double(runtime_seconds) << "\n";
  os << "}\n";
  return os.str();
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os << "# configHash=" << config_hash << "\n";
  os << "name,kind,lhs,lhsSE,rhs,rhsSE,margin,verdict,flagged\n";
  for (const CaseResult& c : cases) {
    os << c.name << "," << c.kind << "," << fmt_double(c.lhs) << "," << fmt_double(c.lhs_se)
       << "," << fmt_double(c.rhs) << "," << fmt_double(c.rhs_se) << "," << fmt_double(c.margin)
       << "," << c.verdict << "," << (c.flagged ? 1 : 0) << "\n";
  }
  os << "# runtimeSeconds=" << fmt_double(runtime_seconds) << "\n";
  return os.str();
}

std::string ExperimentReport::summary_lines() const {
  std::ostringstream os;
  for (const CaseResult& c : cases) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "[%s] %-40s lhs=%.6g rhs=%.6g margin=%.3g (se %.2g)%s",
                  c.verdict == "pass" ? "PASS" : (c.verdict == "fail" ? "FAIL" : "INCO"),
                  c.name.c_str(), c.lhs, c.rhs, c.margin,
                  std::sqrt(c.lhs_se * c.lhs_se + c.rhs_se * c.rhs_se),
                  c.flagged ? " [flagged]" : "");
    os << buf << "\n";
  }
  return os.str();
}

std::string scrub_volatile(const std::string& report_text) {
  std::istringstream in(report_text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("runtimeSeconds") != std::string::npos) continue;
    if (line.find("timestamp") != std::string::npos) continue;
    out << line << "\n";
  }
  return out.str();
}

std::string inequality_verdict(double margin, double se) {
  if (margin < -3.0 * se) return "fail";
  if (margin >= 0.0) return "pass";
  return "inconclusive";  // negative point estimate inside the noise band
}

std::string closedform_verdict(double diff, double se) {
  return std::abs(diff) <= 3.0 * se ? "pass" : "fail";
}

}  // namespace nilheat
