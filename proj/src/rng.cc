#include "subred/rng.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace subred {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(base);
  for (std::uint64_t c : path) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool bernoulli(Rng& rng, double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return uniform01(rng) < p;
}

std::int64_t uniform_index(Rng& rng, std::int64_t n) {
  std::uniform_int_distribution<std::int64_t> dist(0, n - 1);
  return dist(rng);
}

namespace {

std::int64_t binomial_inversion(Rng& rng, std::int64_t n, double p) {
  // p <= 1/2 here, so the odds ratio stays bounded.
  const double odds = p / (1.0 - p);
  double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
  double u = uniform01(rng);
  std::int64_t x = 0;
  while (u >= pmf && x < n) {
    u -= pmf;
    pmf *= odds * static_cast<double>(n - x) / static_cast<double>(x + 1);
    ++x;
  }
  return x;
}

}  // namespace

std::int64_t binomial(Rng& rng, std::int64_t n, double p) {
  if (n < 0) throw std::invalid_argument("binomial: negative trial count");
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  const bool flip = p > 0.5;
  const double r = flip ? 1.0 - p : p;
  std::int64_t x;
  if (static_cast<double>(n) * r < 30.0) {
    x = binomial_inversion(rng, n, r);
  } else {
    std::binomial_distribution<std::int64_t> dist(n, r);
    x = dist(rng);
  }
  return flip ? n - x : x;
}

std::vector<int> uniform_subset(Rng& rng, int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("uniform_subset: need 0 <= k <= n");
  std::vector<int> items(n);
  std::iota(items.begin(), items.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(uniform_index(rng, n - i));
    std::swap(items[i], items[j]);
  }
  items.resize(k);
  return items;
}

std::vector<int> random_permutation(Rng& rng, int n) {
  return uniform_subset(rng, n, n);
}

}  // namespace subred
