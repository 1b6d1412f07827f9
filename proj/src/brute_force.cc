#include "subred/brute_force.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace subred {
namespace {

// All k-subsets of [n] as bit masks.
std::vector<std::uint32_t> subsets_of_size(int n, int k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
    if (__builtin_popcount(mask) == k) out.push_back(mask);
  return out;
}

double bern(double p, bool one) { return one ? p : 1.0 - p; }

}  // namespace

double chi2_matrix_mixture_brute(int n, int k, double p, double q) {
  if (n < 1 || n > 4 || k < 0 || k > n)
    throw std::invalid_argument("chi2_matrix_mixture_brute: need 1 <= n <= 4, 0 <= k <= n");
  const int cells = n * n;
  const auto sets = subsets_of_size(n, k);
  double acc = 0.0;
  for (std::uint32_t m = 0; m < (1u << cells); ++m) {
    double null_prob = 1.0;
    for (int c = 0; c < cells; ++c) null_prob *= bern(q, (m >> c) & 1u);
    double mix = 0.0;
    for (std::uint32_t s : sets) {
      double prob = 1.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const bool one = (m >> (i * n + j)) & 1u;
          const bool planted = ((s >> i) & 1u) && ((s >> j) & 1u);
          prob *= bern(planted ? p : q, one);
        }
      }
      mix += prob;
    }
    mix /= static_cast<double>(sets.size());
    acc += mix * mix / null_prob;
  }
  return acc - 1.0;
}

double chi2_vector_mixture_brute(int m, int k, double p, double q) {
  if (m < 1 || m > 20 || k < 0 || k > m)
    throw std::invalid_argument("chi2_vector_mixture_brute: need 1 <= m <= 20, 0 <= k <= m");
  const auto sets = subsets_of_size(m, k);
  double acc = 0.0;
  for (std::uint32_t x = 0; x < (1u << m); ++x) {
    double null_prob = 1.0;
    for (int i = 0; i < m; ++i) null_prob *= bern(q, (x >> i) & 1u);
    double mix = 0.0;
    for (std::uint32_t s : sets) {
      double prob = 1.0;
      for (int i = 0; i < m; ++i) prob *= bern(((s >> i) & 1u) ? p : q, (x >> i) & 1u);
      mix += prob;
    }
    mix /= static_cast<double>(sets.size());
    acc += mix * mix / null_prob;
  }
  return acc - 1.0;
}

}  // namespace subred
