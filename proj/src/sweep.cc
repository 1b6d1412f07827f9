#include "subred/sweep.h"

#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "subred/config.h"
#include "subred/detect.h"
#include "subred/regime.h"
#include "subred/rng.h"
#include "subred/sampler.h"

namespace subred {

SweepFamily parse_sweep_family(const std::string& name) {
  if (name == "bc" || name == "D_bc") return SweepFamily::kBc;
  if (name == "sp" || name == "D_sp") return SweepFamily::kSp;
  if (name == "gp" || name == "D_gp") return SweepFamily::kGp;
  throw std::invalid_argument("unknown sweep family: " + name);
}

std::string sweep_family_name(SweepFamily f) {
  switch (f) {
    case SweepFamily::kBc: return "D_bc";
    case SweepFamily::kSp: return "D_sp";
    case SweepFamily::kGp: return "D_gp";
  }
  return "unknown";
}

void SweepSpec::validate() const {
  if (n < 2) throw std::invalid_argument("sweep: need n >= 2");
  if (trials < 1) throw std::invalid_argument("sweep: need trials >= 1");
  for (double a : alphas)
    if (!(a > 0.0)) throw std::invalid_argument("sweep: alpha must be positive");
  for (double b : betas)
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("sweep: beta must lie in (0,1)");
  if (family == SweepFamily::kGp)
    for (double a : alphas)
      if (!(gamma > a)) throw std::invalid_argument("sweep: D_gp needs gamma > alpha");
  if (threads < 1) throw std::invalid_argument("sweep: need threads >= 1");
}

ComputablePair sparse_pair_with_skl(double c, double target_skl) {
  if (!(c > 1.0) || !(target_skl > 0.0)) throw std::invalid_argument("sparse pair: need c > 1, skl > 0");
  auto skl_at = [c](double log_q) {
    const double q = std::exp(log_q);
    return ComputablePair::bernoulli(c * q, q).skl();
  };
  double lo = std::log(1e-300), hi = std::log(1.0 / c) + std::log1p(-1e-12);
  if (skl_at(hi) < target_skl) throw std::domain_error("sparse pair: skl out of reach for this c");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (skl_at(mid) < target_skl ? lo : hi) = mid;
  }
  const double q = std::exp(hi);
  return ComputablePair::bernoulli(c * q, q);
}

ComputablePair sweep_pair(const SweepSpec& spec, double alpha) {
  const double n = spec.n;
  switch (spec.family) {
    case SweepFamily::kBc:
      return ComputablePair::gaussian(std::pow(n, -alpha / 2.0));
    case SweepFamily::kSp:
      return sparse_pair_with_skl(spec.sp_constant, std::pow(n, -alpha));
    case SweepFamily::kGp: {
      const double q = std::pow(n, -alpha);
      const double p = q + spec.gp_constant * std::pow(n, -spec.gamma);
      if (!(p <= 1.0)) throw std::domain_error("sweep: D_gp gives p > 1");
      return ComputablePair::bernoulli(p, q);
    }
  }
  throw std::logic_error("sweep: unknown family");
}

std::string sweep_csv_header() {
  return report_csv_header() + ",alpha,beta,regime,boundary_flag,slack,status";
}

namespace {

std::string run_cell(const SweepSpec& spec, std::size_t ai, std::size_t bi) {
  const double alpha = spec.alphas[ai], beta = spec.betas[bi];
  const std::uint64_t seed = spec.cell_seed ? *spec.cell_seed : derive_seed(spec.seed, {ai, bi});
  const double slack = spec.slack > 0.0 ? spec.slack : default_slack(spec.n);
  const int n = spec.n;
  const int k = std::min(n, static_cast<int>(std::ceil(std::pow(n, beta) - 1e-9)));
  auto tail = [&](const std::string& regime, bool boundary, const std::string& status) {
    return "," + format_real(alpha) + "," + format_real(beta) + "," + regime + "," +
           (boundary ? "1" : "0") + "," + format_real(slack) + "," + status;
  };
  std::ostringstream rows;
  ComputablePair pair = ComputablePair::gaussian(1.0);
  try {
    pair = sweep_pair(spec, alpha);
  } catch (const std::exception&) {
    for (const char* det : {"sum", "max"})
      rows << det << ',' << n << ',' << k << ",,,,,,,,," << seed << tail("", false, "skipped")
           << '\n';
    return rows.str();
  }
  const RegimeResult regime = regime_classify(n, k, pair.skl(), slack);
  const PairGrid grid = PairGrid::homogeneous(n, pair);
  const Detector sum = make_detector(DetectorKind::kSum, n, k, pair);
  const Detector max = make_detector(DetectorKind::kMax, n, k, pair, 0.0);
  const MatrixSampler null_sampler = [&](Rng& rng) { return sample_submatrix(n, std::nullopt, grid, rng); };
  const MatrixSampler planted_sampler = [&](Rng& rng) {
    return spec.asymmetric ? sample_submatrix_asd(n, k, grid, rng) : sample_submatrix(n, k, grid, rng);
  };
  const auto reports = estimate_errors(
      {[&](const MatrixSample& m) { return sum.decide(m); },
       [&](const MatrixSample& m) { return max.decide(m); }},
      null_sampler, planted_sampler, spec.trials, seed);
  const std::string suffix = tail(regime_name(regime.label), regime.boundary, "ok");
  rows << report_csv_row("sum", n, k, pair, reports[0], seed) << suffix << '\n';
  rows << report_csv_row("max", n, k, pair, reports[1], seed) << suffix << '\n';
  return rows.str();
}

}  // namespace

void run_sweep(const SweepSpec& spec, std::ostream& out) {
  spec.validate();
  const std::size_t nb = spec.betas.size();
  const std::size_t cells = spec.alphas.size() * nb;
  std::vector<std::string> results(cells);
  std::vector<std::exception_ptr> errors(cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells; c = next++) {
      try {
        results[c] = run_cell(spec, c / nb, c % nb);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < spec.threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  out << sweep_csv_header() << '\n';
  for (const auto& r : results) out << r;
}

}  // namespace subred
