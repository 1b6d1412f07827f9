#include "subred/stats.h"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace subred {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double chi_square_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, x));
}

namespace {

// Kolmogorov limiting survival function Q(lambda) = 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2).
double kolmogorov_sf(double lambda) {
  if (lambda < 0.2) return 1.0;
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    s += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  const double sq = std::sqrt(ne);
  TestResult r;
  r.statistic = d;
  r.p_value = kolmogorov_sf((sq + 0.12 + 0.11 / sq) * d);
  return r;
}

TestResult chi_square_gof(const std::vector<double>& observed,
                          const std::vector<double>& probabilities) {
  if (observed.size() != probabilities.size() || observed.size() < 2)
    throw std::invalid_argument("chi_square_gof: size mismatch");
  double n = 0.0;
  for (double o : observed) n += o;
  TestResult r;
  for (std::size_t c = 0; c < observed.size(); ++c) {
    const double e = n * probabilities[c];
    if (e <= 0.0) {
      if (observed[c] > 0.0) r.statistic = INFINITY;
      continue;
    }
    r.statistic += (observed[c] - e) * (observed[c] - e) / e;
    r.dof += 1.0;
  }
  r.dof -= 1.0;
  r.p_value = std::isinf(r.statistic) ? 0.0 : chi_square_sf(r.statistic, r.dof);
  return r;
}

TestResult chi_square_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                                 int bins) {
  if (a.empty() || b.empty() || bins < 2)
    throw std::invalid_argument("chi_square_two_sample: need samples and >= 2 bins");
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> edges;
  for (int i = 1; i < bins; ++i) {
    const double e = pooled[static_cast<std::size_t>(
        std::floor(static_cast<double>(i) * pooled.size() / bins))];
    if (edges.empty() || e > edges.back()) edges.push_back(e);
  }
  auto counts = [&edges](const std::vector<double>& xs) {
    std::vector<double> c(edges.size() + 1, 0.0);
    for (double x : xs) c[std::lower_bound(edges.begin(), edges.end(), x) - edges.begin()] += 1;
    return c;
  };
  const auto ca = counts(a), cb = counts(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  TestResult r;
  for (std::size_t j = 0; j < ca.size(); ++j) {
    const double tot = ca[j] + cb[j];
    if (tot == 0.0) continue;
    const double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
    r.statistic += (ca[j] - ea) * (ca[j] - ea) / ea + (cb[j] - eb) * (cb[j] - eb) / eb;
    r.dof += 1.0;
  }
  r.dof -= 1.0;
  r.p_value = r.dof > 0 ? chi_square_sf(r.statistic, r.dof) : 1.0;
  return r;
}

}  // namespace subred
