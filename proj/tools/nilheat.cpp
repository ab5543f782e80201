// nilheat: stochastic calculus on nilpotent Lie groups.
//
// Subcommands: bchd-table, coef-table, falpha-table, ricci, simulate,
// harnack, logsob, converge, moments, validate-algebra.
//
// Exit codes: 0 ok / all pass, 2 any fail, 3 any inconclusive,
// 64 usage error, 65 config error, 70 resource guard.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nilheat/bchd.hpp"
#include "nilheat/combinatorics.hpp"
#include "nilheat/experiments.hpp"
#include "nilheat/geometry.hpp"
#include "nilheat/rng.hpp"

namespace {

using namespace nilheat;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open output file " + path);
  out << content;
}

std::string join_ints(const std::vector<int>& v, char sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? std::string(1, sep) : "") << v[i];
  return os.str();
}

int emit_report(const ExperimentReport& rep, const ExperimentConfig& cfg) {
  std::cout << rep.summary_lines();
  if (!cfg.out.empty()) {
    write_or_print(cfg.out, cfg.format == "csv" ? rep.to_csv() : rep.to_json());
    std::cout << "report written to " << cfg.out << " (configHash " << rep.config_hash << ")\n";
  }
  return rep.exit_code();
}

// config file + flag precedence: flags > file > defaults
void apply_config_file(const std::string& path, ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ValidationError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (j.contains("algebra")) cfg.algebra = j["algebra"].get<std::string>();
  if (j.contains("t")) cfg.t = j["t"].get<double>();
  if (j.contains("ts")) cfg.ts = j["ts"].get<std::vector<double>>();
  if (j.contains("steps")) cfg.steps = j["steps"].get<int>();
  if (j.contains("paths")) cfg.paths = j["paths"].get<long>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("q")) cfg.q = j["q"].get<double>();
  if (j.contains("ladder")) cfg.ladder = j["ladder"].get<std::vector<int>>();
  if (j.contains("suite")) cfg.suite = j["suite"].get<std::string>();
  if (j.contains("translations"))
    cfg.translations = j["translations"].get<std::vector<std::vector<double>>>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic calculus on nilpotent Lie groups"};
  app.require_subcommand(1);

  // shared experiment options
  ExperimentConfig cfg;
  std::string config_file;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "JSON config file (flags override it)");
    sub->add_option("--algebra", cfg.algebra,
                    "algebra descriptor (heis3, abelian:N, free:d,r, "
                    "random:dim,step,gamma,seed) or file path");
    sub->add_option("--t", cfg.t, "time horizon");
    sub->add_option("--ts", cfg.ts, "several time horizons");
    sub->add_option("--steps", cfg.steps, "grid steps per path");
    sub->add_option("--paths", cfg.paths, "Monte Carlo paths");
    sub->add_option("--seed", cfg.seed, "master seed");
    sub->add_option("--q", cfg.q, "Harnack exponent q > 1");
    sub->add_option("--ladder", cfg.ladder, "projection ladder");
    sub->add_option("--workers", cfg.workers, "worker threads (0 = auto/NILHEAT_WORKERS)");
    sub->add_option("--out", cfg.out, "output file");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* bchd_cmd = app.add_subcommand("bchd-table", "emit the BCHD coefficient table");
  int bchd_step = 3;
  std::string bchd_out;
  bchd_cmd->add_option("--step", bchd_step, "nilpotency step")->required();
  bchd_cmd->add_option("--out", bchd_out, "output file");

  CLI::App* coef_cmd = app.add_subcommand("coef-table", "emit c_n^sigma coefficients");
  int coef_n = 2;
  std::string coef_out;
  coef_cmd->add_option("--n", coef_n, "bracket order n")->required();
  coef_cmd->add_option("--out", coef_out, "output file");

  CLI::App* falpha_cmd = app.add_subcommand("falpha-table", "emit f_alpha decompositions");
  int falpha_n = 3;
  std::string falpha_out;
  falpha_cmd->add_option("--n", falpha_n, "integral order n")->required();
  falpha_cmd->add_option("--out", falpha_out, "output file");

  CLI::App* ricci_cmd = app.add_subcommand("ricci", "Ricci matrix and lower bound");
  int ricci_subsamples = 20;
  ricci_cmd->add_option("--subsamples", ricci_subsamples, "random witness subalgebras");
  add_common(ricci_cmd);

  CLI::App* validate_cmd = app.add_subcommand("validate-algebra", "check algebra axioms");
  std::string validate_in;
  validate_cmd->add_option("--in,--algebra", validate_in, "algebra file or descriptor")
      ->required();

  CLI::App* sim_cmd = app.add_subcommand("simulate", "sample g_t and dump per-path rows");
  add_common(sim_cmd);

  CLI::App* harnack_cmd = app.add_subcommand("harnack", "integrated Harnack inequality test");
  add_common(harnack_cmd);
  CLI::App* logsob_cmd = app.add_subcommand("logsob", "log-Sobolev inequality test");
  add_common(logsob_cmd);
  CLI::App* converge_cmd = app.add_subcommand("converge", "projection convergence test");
  add_common(converge_cmd);
  CLI::App* moments_cmd = app.add_subcommand("moments", "closed-form moment checks");
  add_common(moments_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    // file values first, then re-apply flags so they win
    if (!config_file.empty()) {
      ExperimentConfig file_cfg;
      apply_config_file(config_file, file_cfg);
      ExperimentConfig flag_cfg = cfg;
      cfg = file_cfg;
      for (CLI::App* sub :
           {ricci_cmd, sim_cmd, harnack_cmd, logsob_cmd, converge_cmd, moments_cmd}) {
        if (!sub->parsed()) continue;
        if (sub->count("--algebra")) cfg.algebra = flag_cfg.algebra;
        if (sub->count("--t")) cfg.t = flag_cfg.t;
        if (sub->count("--ts")) cfg.ts = flag_cfg.ts;
        if (sub->count("--steps")) cfg.steps = flag_cfg.steps;
        if (sub->count("--paths")) cfg.paths = flag_cfg.paths;
        if (sub->count("--seed")) cfg.seed = flag_cfg.seed;
        if (sub->count("--q")) cfg.q = flag_cfg.q;
        if (sub->count("--ladder")) cfg.ladder = flag_cfg.ladder;
        if (sub->count("--workers")) cfg.workers = flag_cfg.workers;
        if (sub->count("--out")) cfg.out = flag_cfg.out;
        if (sub->count("--format")) cfg.format = flag_cfg.format;
      }
    }

    if (bchd_cmd->parsed()) {
      ExperimentConfig hc;
      hc.experiment = "bchd-table";
      hc.algebra = "";
      hc.t = bchd_step;
      std::ostringstream os;
      os << "# configHash=" << hc.hash() << "\n";
      os << "k,n,m,num,den\n";
      for (const BchdTerm& t : bchd_terms(bchd_step))
        os << t.k << "," << join_ints(t.n, ';') << "," << join_ints(t.m, ';') << ","
           << t.coefficient.num << "," << t.coefficient.den << "\n";
      write_or_print(bchd_out, os.str());
      return 0;
    }

    if (coef_cmd->parsed()) {
      ExperimentConfig hc;
      hc.experiment = "coef-table";
      hc.algebra = "";
      hc.t = coef_n;
      std::ostringstream os;
      os << "# configHash=" << hc.hash() << "\n";
      os << "sigma,errors,num,den\n";
      for (const auto& sigma : all_permutations(coef_n)) {
        const Rational c = strichartz_coefficient(coef_n, sigma);
        os << join_ints(sigma, ';') << "," << permutation_errors(sigma) << "," << c.num << ","
           << c.den << "\n";
      }
      write_or_print(coef_out, os.str());
      return 0;
    }

    if (falpha_cmd->parsed()) {
      ExperimentConfig hc;
      hc.experiment = "falpha-table";
      hc.algebra = "";
      hc.t = falpha_n;
      std::ostringstream os;
      os << "# configHash=" << hc.hash() << "\n";
      for (const AlphaIndex& alpha : multi_index_all(falpha_n)) {
        const SimplexPolynomial sp = f_alpha(alpha);
        std::vector<std::string> names;
        for (int i = 1; i <= alpha.p; ++i) names.push_back("s" + std::to_string(i));
        names.push_back("t");
        os << "alpha=(" << join_ints(alpha.alpha, ',') << ") p=" << alpha.p << " q=" << alpha.q
           << "  f = " << sp.f.str(names) << "\n";
        std::vector<std::string> snames(names.begin(), names.end() - 1);
        for (const auto& part : sp.parts)
          os << "  a=" << part.a << "  b=" << part.b.str()
             << "  ftilde = " << part.ftilde.str(snames) << "\n";
      }
      write_or_print(falpha_out, os.str());
      return 0;
    }

    if (validate_cmd->parsed()) {
      const LieAlgebra alg = resolve_algebra(validate_in);
      const ValidationReport vr = validate(alg);
      std::cout << alg.label() << ": " << vr.summary() << "\n";
      return vr.pass ? 0 : 2;
    }

    if (ricci_cmd->parsed()) {
      const LieAlgebra alg = resolve_algebra(cfg.algebra);
      const RicciReport rr = ricci_lower_bound(alg, ricci_subsamples, cfg.seed);
      ExperimentConfig hc = cfg;
      hc.experiment = "ricci";
      std::ostringstream os;
      os << "{\n  \"configHash\": \"" << hc.hash() << "\",\n";
      os << "  \"algebra\": \"" << alg.label() << "\",\n  \"dim\": " << alg.dim() << ",\n";
      os << "  \"k\": " << fmt17(rr.k) << ",\n";
      os << "  \"lambdaMax\": " << fmt17(rr.lambda_max) << ",\n";
      os << "  \"eigenResidual\": " << fmt17(rr.eigen_residual) << ",\n";
      os << "  \"hsNormSq\": " << fmt17(rr.hs_norm_sq) << ",\n";
      os << "  \"ricci\": [";
      for (int i = 0; i < alg.dim(); ++i) {
        os << (i ? ",\n            [" : "\n            [");
        for (int j = 0; j < alg.dim(); ++j) os << (j ? ", " : "") << fmt17(rr.ricci(i, j));
        os << "]";
      }
      os << "\n  ],\n  \"witnessKpi\": [";
      for (std::size_t i = 0; i < rr.witness_kpi.size(); ++i)
        os << (i ? ", " : "") << fmt17(rr.witness_kpi[i]);
      os << "]\n}\n";
      write_or_print(cfg.out, os.str());
      char line[160];
      std::snprintf(line, sizeof line, "%s: k=%.12g (lambdaMax %.12g, residual %.2g), hs2=%.12g",
                    alg.label().c_str(), rr.k, rr.lambda_max, rr.eigen_residual, rr.hs_norm_sq);
      std::cout << line << "\n";
      return 0;
    }

    if (sim_cmd->parsed()) {
      cfg.experiment = "simulate";
      std::ostringstream dump;
      const ExperimentReport rep = run_simulate(cfg, cfg.out.empty() ? nullptr : &dump);
      std::cout << rep.summary_lines();
      if (!cfg.out.empty()) {
        write_or_print(cfg.out, dump.str());
        std::cout << "samples written to " << cfg.out << " (configHash " << rep.config_hash
                  << ")\n";
      }
      return 0;
    }

    if (harnack_cmd->parsed()) {
      cfg.experiment = "harnack";
      return emit_report(run_harnack(cfg), cfg);
    }
    if (logsob_cmd->parsed()) {
      cfg.experiment = "logsob";
      return emit_report(run_logsob(cfg), cfg);
    }
    if (converge_cmd->parsed()) {
      cfg.experiment = "converge";
      return emit_report(run_convergence(cfg), cfg);
    }
    if (moments_cmd->parsed()) {
      cfg.experiment = "moments";
      return emit_report(run_moments(cfg), cfg);
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 70;
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 65;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 65;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
  return 64;
}
