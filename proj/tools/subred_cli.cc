#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "subred/config.h"
#include "subred/pairs.h"
#include "subred/reduction.h"
#include "subred/sampler.h"
#include "subred/sweep.h"
#include "subred/verify.h"

namespace {

using namespace subred;

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  const auto results = run_verify_suite(suite, seed);
  int failures = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << suite << ": " << r.name;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << '\n';
    failures += r.passed ? 0 : 1;
  }
  std::cout << results.size() - failures << "/" << results.size() << " checks passed\n";
  return failures == 0 ? 0 : 1;
}

int cmd_sweep(SweepSpec spec, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    run_sweep(spec, std::cout);
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  run_sweep(spec, out);
  return 0;
}

int cmd_reduce(const std::string& config_path, const std::string& input, const std::string& sample,
               const std::string& out_path, std::uint64_t seed) {
  const KeyValues kv = KeyValues::load(config_path);
  const ReductionConfig cfg = ReductionConfig::from_config(kv);
  cfg.validate();
  Rng rng(seed);
  GraphSample g;
  if (!input.empty()) {
    g = load_graph_dump(input);
  } else if (sample == "planted") {
    g = sample_pds(cfg.n, cfg.k, cfg.p, cfg.q, rng);
  } else if (sample == "null") {
    g = sample_er(cfg.n, cfg.q, rng);
  } else {
    throw std::invalid_argument("reduce: give --input or --sample planted|null");
  }
  ReductionTrace trace;
  const MatrixSample m = to_submatrix(g, cfg, rng, &trace);
  save_dump(out_path, m);

  const TvGuarantee tv = tv_guarantee(cfg.n, cfg.k, cfg.N, cfg.q_mid(), cfg.effective_epsilon(),
                                      trace.max_block_delta);
  std::ofstream report(out_path + ".report.txt");
  if (!report) throw std::runtime_error("cannot write " + out_path + ".report.txt");
  report << "output_dim=" << m.d << "\n"
         << "Q=" << format_real(cfg.q_mid()) << "\n"
         << "epsilon=" << format_real(cfg.effective_epsilon()) << "\n"
         << "iterations=" << cfg.iterations << "\n"
         << "block_delta=" << format_real(trace.max_block_delta) << "\n"
         << "kernel_term=" << format_real(tv.kernel_term) << "\n"
         << "embed_term=" << format_real(tv.embed_term) << "\n"
         << "binom_upper=" << format_real(tv.binom_upper) << "\n"
         << "binom_lower=" << format_real(tv.binom_lower) << "\n"
         << "bound_null=" << format_real(tv.bound_null) << "\n"
         << "bound_planted=" << format_real(tv.bound_planted) << "\n"
         << "seed=" << seed << "\n";
  for (const auto& f : cfg.failed_hypotheses()) report << "outside_guarantee=" << f << "\n";
  std::cout << "wrote " << out_path << " (dimension " << m.d << ")\n";
  return 0;
}

int cmd_exponents(const std::string& pair_text, int points, const std::string& out_path) {
  const ComputablePair pair = ComputablePair::parse(pair_text);
  std::ostringstream out;
  out << "tau,E_P,E_Q,E_P_numeric,E_Q_numeric\n";
  const double lo = -pair.kl_qp(), hi = pair.kl_pq();
  for (int i = 0; i < points; ++i) {
    const double tau = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    out << format_real(tau) << ',' << format_real(pair.chernoff_exponent(Side::kUnderP, tau)) << ','
        << format_real(pair.chernoff_exponent(Side::kUnderQ, tau)) << ','
        << format_real(pair.chernoff_exponent_numeric(Side::kUnderP, tau)) << ','
        << format_real(pair.chernoff_exponent_numeric(Side::kUnderQ, tau)) << '\n';
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << out.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << out.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Average-case reductions and detection experiments for submatrix problems"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out_path;

  auto* verify = app.add_subcommand("verify", "Run an exact verification suite");
  std::string suite;
  verify->add_option("suite", suite, "kernel | clone | diagonal | exponents | it-bound")
      ->required()
      ->check(CLI::IsMember(verify_suite_names()));
  verify->add_option("--seed", seed, "Seed for randomized checks");

  auto* sweep = app.add_subcommand("sweep", "Detection error over an (alpha, beta) grid");
  SweepSpec spec;
  std::string family = "bc";
  std::uint64_t cell_seed = 0;
  sweep->add_option("--family", family, "bc | sp | gp")->check(CLI::IsMember({"bc", "sp", "gp"}));
  sweep->add_option("--alphas", spec.alphas, "skl exponents (q exponent for gp)")->delimiter(',');
  sweep->add_option("--betas", spec.betas, "planted-size exponents")->delimiter(',');
  sweep->add_option("--n", spec.n, "Matrix dimension");
  sweep->add_option("--trials", spec.trials, "Trials per hypothesis");
  sweep->add_option("--seed", spec.seed, "Base seed");
  sweep->add_option("--slack", spec.slack, "Slack factor for regime labels (default log^3 n)");
  sweep->add_option("--c-sp", spec.sp_constant, "D_sp ratio p/q");
  sweep->add_option("--c-gp", spec.gp_constant, "D_gp constant in p - q = c n^-gamma");
  sweep->add_option("--gamma", spec.gamma, "D_gp exponent, must exceed every alpha");
  sweep->add_flag("--asd", spec.asymmetric, "Independent row and column supports");
  sweep->add_option("--threads", spec.threads, "Worker threads");
  auto* cell_opt = sweep->add_option("--cell-seed", cell_seed, "Use this seed for every cell");
  sweep->add_option("--out", out_path, "CSV path (default stdout)");

  auto* reduce = app.add_subcommand("reduce", "Map a graph to a submatrix instance");
  std::string config_path, input, sample;
  reduce->add_option("config", config_path, "Reduction config file")->required()->check(CLI::ExistingFile);
  reduce->add_option("--input", input, "Graph dump to reduce")->check(CLI::ExistingFile);
  reduce->add_option("--sample", sample, "Sample the input: planted | null")
      ->check(CLI::IsMember({"planted", "null"}));
  reduce->add_option("--seed", seed, "Seed");
  reduce->add_option("--out", out_path, "Output matrix dump")->required();

  auto* exponents = app.add_subcommand("exponents", "Tabulate Chernoff exponents of a pair");
  std::string pair_text = "family=gaussian mu=1";
  int points = 11;
  exponents->add_option("--pair", pair_text, "Pair, e.g. 'family=bernoulli p=0.6 q=0.3'");
  exponents->add_option("--points", points, "Grid points on [-kl_qp, kl_pq]")->check(CLI::PositiveNumber);
  exponents->add_option("--out", out_path, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) return cmd_verify(suite, seed);
    if (*sweep) {
      spec.family = parse_sweep_family(family);
      if (cell_opt->count() > 0) spec.cell_seed = cell_seed;
      return cmd_sweep(spec, out_path);
    }
    if (*reduce) return cmd_reduce(config_path, input, sample, out_path, seed);
    if (*exponents) return cmd_exponents(pair_text, points, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
