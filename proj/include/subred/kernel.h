#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "subred/errors.h"
#include "subred/finite_law.h"
#include "subred/pairs.h"
#include "subred/rng.h"

namespace subred {

/// Acceptance window W = {x : c_minus <= L(x) <= c_plus} on the summed LLR.
struct Window {
  double c_minus = 0.0;  // log((1-p)/(1-q)), -inf when p = 1
  double c_plus = 0.0;   // log(p/q)
};

/// One rejection kernel: maps a bit B (Bern(p_src) or Bern(q_src)) to a
/// vector whose law approximates the product of the targets' P sides or
/// Q sides respectively.
struct KernelSpec {
  double p_src = 0.0;
  double q_src = 0.0;
  std::vector<ComputablePair> targets;
  int iterations = 0;
  Window window;

  static KernelSpec make(double p_src, double q_src, std::vector<ComputablePair> targets,
                         int iterations);
  static KernelSpec homogeneous(double p_src, double q_src, const ComputablePair& target, int ell,
                                int iterations);

  int ell() const { return static_cast<int>(targets.size()); }
  bool finite_support() const;
  bool is_homogeneous() const;

  /// Throws HypothesisError unless c_minus < -sum kl_qp <= sum kl_pq < c_plus.
  void check_kl_sandwich() const;
};

/// Draws one kernel output into `out` (size ell).
void mrk_map_into(const KernelSpec& spec, int bit, Rng& rng, std::span<double> out);
std::vector<double> mrk_map(const KernelSpec& spec, int bit, Rng& rng);

/// Exact law of the kernel output for a fixed input bit, over {0,1}^ell.
/// Requires Bernoulli targets and ell <= 20.
FiniteLaw exact_output_law(const KernelSpec& spec, int bit);

/// Exact law when the input bit is itself Bern(input_prob); input_prob =
/// p_src and q_src give the two laws the error bound speaks about.
FiniteLaw exact_output_law_mixed(const KernelSpec& spec, double input_prob);

/// Probability that one iteration accepts, for a fixed input bit.
double acceptance_probability(const KernelSpec& spec, int bit);

/// Product over the targets of their P sides (kUnderP) or Q sides (kUnderQ).
FiniteLaw target_product_law(const KernelSpec& spec, Side side);

struct DeltaBound {
  double delta = 0.0;
  double tail_p = 0.0;  // P*(outside W)
  double tail_q = 0.0;  // Q*(outside W)
  int recommended_iterations = 0;
};

/// Error bound of the kernel from its out-of-window probabilities:
/// (tq + tp)/(p-q) + max{(tq + q/p)^N, ((q/p) tp + (p - 2pq + q^2)/(p - pq))^N}.
double delta_value(double p, double q, std::int64_t iterations, double tail_p, double tail_q);
DeltaBound delta_bound(const KernelSpec& spec, double tail_p, double tail_q);

/// Iteration count that drives the fallback term below the window-tail
/// term: ceil(T / -log(1 - q(p-q)/(2p))), T the smaller total tail exponent
/// (capped at 40 when a tail is empty).
int recommended_iterations(const KernelSpec& spec);
int recommended_iterations(double p, double q, double total_exponent);

/// Bound for ell identical targets from per-sample large-deviation rates
/// tau_plus and tau_minus; throws HypothesisError naming the failed
/// hypothesis. With p = 1 the tau_minus terms are dropped.
DeltaBound homogeneous_delta(const ComputablePair& pair, int ell, double p_src, double q_src,
                             double tau_plus, double tau_minus);

enum class TailMethod { kExact, kMonteCarlo, kChernoff };

struct TailProbs {
  double tail_p = 0.0;
  double tail_q = 0.0;
  double stderr_p = 0.0;
  double stderr_q = 0.0;
  TailMethod method = TailMethod::kExact;
};

/// Out-of-window probabilities under P* and Q*. kExact enumerates finite
/// targets and uses the normal law of the summed LLR for Gaussian targets;
/// kMonteCarlo uses `draws` samples per side; kChernoff gives upper bounds
/// from the summed log-MGF.
TailProbs tail_probs(const KernelSpec& spec, TailMethod method = TailMethod::kExact,
                     std::int64_t draws = 1000000, std::uint64_t seed = 1);

}  // namespace subred
