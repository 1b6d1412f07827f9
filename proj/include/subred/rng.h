#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace subred {

using Rng = std::mt19937_64;

/// SplitMix64 output function; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Derives a stream seed from a base seed and a path of counters, e.g.
/// (seed, trial) or (seed, s, t). Distinct paths give statistically
/// independent streams, so results never depend on scheduling.
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> path);

inline Rng make_rng(std::uint64_t base,
                    std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(base, path));
}

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Returns true with probability p; p <= 0 never, p >= 1 always.
bool bernoulli(Rng& rng, double p);

/// Uniform integer in [0, n).
std::int64_t uniform_index(Rng& rng, std::int64_t n);

/// Exact Bin(n, p) draw: sequential inversion when the smaller tail mean is
/// below 30, otherwise the library's rejection sampler.
std::int64_t binomial(Rng& rng, std::int64_t n, double p);

/// Uniform k-subset of [0, n) in draw order (partial Fisher-Yates).
std::vector<int> uniform_subset(Rng& rng, int n, int k);

/// Uniform permutation of [0, n) (full Fisher-Yates).
std::vector<int> random_permutation(Rng& rng, int n);

}  // namespace subred
