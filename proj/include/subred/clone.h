#pragma once

#include <vector>

#include "subred/errors.h"
#include "subred/rng.h"
#include "subred/sampler.h"

namespace subred {

/// Per-edge channel that turns one Bern(p)/Bern(q) indicator into t
/// independent Bern(P)/Bern(Q) indicators. r0 and r1 hold the probability of
/// each single vector v in {0,1}^t as a function of its Hamming weight.
struct CloneChannel {
  int t = 0;
  double p = 0.0, q = 0.0;
  double P = 0.0, Q = 0.0;
  std::vector<double> r0;  // law of x for a non-edge
  std::vector<double> r1;  // law of x for an edge

  /// Largest residual over all weights of the two mixing identities and the
  /// two normalizations.
  double max_identity_error() const;
};

/// Builds the channel; throws HypothesisError naming the violated
/// feasibility inequality.
CloneChannel make_channel(int t, double p, double q, double P, double Q);

/// Returns t graphs on the same vertex set. The planted set of `g`, when
/// present, is copied to every output.
std::vector<GraphSample> clone_graph(const GraphSample& g, const CloneChannel& channel, Rng& rng);

}  // namespace subred
