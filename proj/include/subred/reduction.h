#pragma once

#include <string>
#include <vector>

#include "subred/config.h"
#include "subred/errors.h"
#include "subred/kernel.h"
#include "subred/pairs.h"
#include "subred/rng.h"
#include "subred/sampler.h"

namespace subred {

/// Intermediate edge density 1 - sqrt((1-p)(1-q)), or sqrt(q) when p = 1.
double intermediate_density(double p, double q);

/// Parameters of the graph-to-submatrix reduction. The grid has dimension
/// N * ell. A nonpositive epsilon means the largest admissible value
/// N/n - p/Q.
struct ReductionConfig {
  int n = 0;
  int k = 0;
  int N = 0;
  int ell = 1;
  int iterations = 0;
  double p = 0.0;
  double q = 0.0;
  double epsilon = 0.0;
  PairGrid grid = PairGrid::homogeneous(1, ComputablePair::gaussian(1.0));
  /// Runs the reduction even when the guarantee hypotheses fail; the
  /// TV bounds then carry no meaning.
  bool allow_outside_guarantee = false;

  double q_mid() const { return intermediate_density(p, q); }
  double effective_epsilon() const;
  int output_dim() const { return N * ell; }

  /// Keys: n k N ell p q, optional epsilon, iterations (absent or `auto`
  /// picks the recommended count), allow_outside_guarantee (0/1), and the
  /// homogeneous target pair under the `target.` prefix.
  static ReductionConfig from_config(const KeyValues& kv);

  /// Names of the guarantee hypotheses that fail, empty when all hold.
  std::vector<std::string> failed_hypotheses() const;

  /// Throws std::invalid_argument on malformed parameters and
  /// HypothesisError on a failed guarantee hypothesis unless
  /// allow_outside_guarantee is set.
  void validate() const;
};

/// Kernel for one ell x ell output block whose rows and columns are the
/// given output indices; targets are taken row-major.
KernelSpec block_kernel(const ReductionConfig& cfg, const std::vector<int>& rows,
                        const std::vector<int>& cols);

/// Error bound of the block kernel with exact window tails.
DeltaBound block_delta(const KernelSpec& spec);

/// Embeds the two clones as the two halves of a uniformly placed principal
/// minor of an N x N bit matrix and synthesizes its diagonal. The size of
/// the diagonal support outside the minor is capped at N - n.
MatrixSample embed_diagonal(const GraphSample& g1, const GraphSample& g2,
                            const ReductionConfig& cfg, Rng& rng);

/// Side information recorded by a reduction run.
struct ReductionTrace {
  std::vector<int> perm;          // position -> output index
  double max_block_delta = 0.0;   // largest block bound over realized blocks
};

/// Maps a graph on n vertices to an (N ell) x (N ell) matrix. Per-block
/// randomness is derived from one seed drawn from `rng` and the block
/// coordinates, so blocks can be processed in any order.
MatrixSample to_submatrix(const GraphSample& g, const ReductionConfig& cfg, Rng& rng,
                          ReductionTrace* trace = nullptr);

struct TvGuarantee {
  double kernel_term = 0.0;  // N^2 Delta
  double embed_term = 0.0;   // 4 exp(-Q eps^2 n^2 / 32N)
  double binom_upper = 0.0;  // sqrt(k^2 (1-Q) / (2QN))
  double binom_lower = 0.0;  // sqrt(k^2 Q / (2N(1-Q)))
  double bound_null = 0.0;
  double bound_planted = 0.0;
};

TvGuarantee tv_guarantee(int n, int k, int N, double Q, double epsilon, double delta);
TvGuarantee tv_guarantee(const ReductionConfig& cfg, const DeltaBound& delta);
/// Uses the block bound of a homogeneous grid.
TvGuarantee tv_guarantee(const ReductionConfig& cfg);

}  // namespace subred
