#include "subred/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "subred/rng.h"

namespace subred {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// log of E[x^g(H)] - style sums: log sum_h pmf(h) * exp(weight(h)).
double log_expectation(const std::vector<double>& pmf, const std::function<double(int)>& weight) {
  double acc = -kInf;
  for (std::size_t h = 0; h < pmf.size(); ++h)
    if (pmf[h] > 0.0) acc = log_add_exp(acc, std::log(pmf[h]) + weight(static_cast<int>(h)));
  return acc;
}

}  // namespace

double log_choose(double n, double k) {
  if (k < 0 || k > n) return -kInf;
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

std::vector<double> binomial_pmf(int n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_pmf: bad parameters");
  std::vector<double> pmf(n + 1, 0.0);
  if (p == 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p == 1.0) {
    pmf[n] = 1.0;
    return pmf;
  }
  const double lp = std::log(p), lq = std::log1p(-p);
  for (int x = 0; x <= n; ++x) pmf[x] = std::exp(log_choose(n, x) + x * lp + (n - x) * lq);
  return pmf;
}

std::vector<double> hypergeometric_pmf(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) throw std::invalid_argument("hypergeometric_pmf: need 0 <= k <= n");
  std::vector<double> pmf(k + 1, 0.0);
  const double denom = log_choose(n, k);
  for (std::int64_t h = 0; h <= k; ++h) {
    const double lp = log_choose(k, h) + log_choose(n - k, k - h) - denom;
    pmf[h] = std::isfinite(lp) ? std::exp(lp) : 0.0;
  }
  return pmf;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double gaussian_chi2_quadrature(double mu) {
  // phi(x) * ((dP/dQ)(x)^2 - 1); the first term peaks at 2 mu.
  auto f = [mu](double x) {
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    return phi * std::expm1(2.0 * mu * x - mu * mu);
  };
  const double lo = std::min(0.0, 2.0 * mu) - 12.0;
  const double hi = std::max(0.0, 2.0 * mu) + 12.0;
  // Split at the peaks so the recursion sees the mass early.
  const double mid = mu;
  return adaptive_simpson(f, lo, mid, 5e-11) + adaptive_simpson(f, mid, hi, 5e-11);
}

double tv_chain_bound(const std::vector<double>& step_bounds) {
  double s = 0.0;
  for (double e : step_bounds) {
    if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("tv_chain_bound: bound outside [0,1]");
    s += e;
  }
  return std::min(s, 1.0);
}

DiagLaws diag_support_law(int n, int k, int N, double P, double Q, int outside_capacity) {
  if (!(0 <= k && k <= n && n <= N)) throw std::invalid_argument("diag_support_law: need k <= n <= N");
  const auto p1 = binomial_pmf(k, P);
  const auto p2 = binomial_pmf(n - k, P);
  const auto p3 = binomial_pmf(N, Q);
  DiagLaws laws;
  for (int t1 = 0; t1 <= k; ++t1) {
    if (p1[t1] == 0.0) continue;
    for (int t2 = 0; t2 <= n - k; ++t2) {
      const double w12 = p1[t1] * p2[t2];
      if (w12 == 0.0) continue;
      for (int t3 = 0; t3 <= N; ++t3) {
        const double w = w12 * p3[t3];
        if (w == 0.0) continue;
        int t4 = std::max(t3 - t1 - t2, 0);
        if (outside_capacity >= 0) t4 = std::min(t4, outside_capacity);
        laws.planted_pair.add({t1, t2 + t4}, w);
        laws.total.add({t1 + t2 + t4}, w);
      }
    }
  }
  return laws;
}

FiniteLaw diag_planted_reference(int k, int N, double P, double Q) {
  return FiniteLaw::product(FiniteLaw::binomial(k, P), FiniteLaw::binomial(N - k, Q));
}

FiniteLaw diag_null_reference(int N, double Q) { return FiniteLaw::binomial(N, Q); }

DiagBounds diag_bounds(int n, int k, int N, double P, double Q, double epsilon) {
  DiagBounds b;
  b.epsilon = epsilon > 0.0 ? epsilon : static_cast<double>(N) / n - P / Q;
  const double e = b.epsilon;
  b.embed_term = 4.0 * std::exp(-Q * e * e * n * n / (32.0 * N));
  const double k2 = static_cast<double>(k) * k;
  b.binom_upper = std::sqrt(k2 * (1.0 - Q) / (2.0 * N * Q));
  b.binom_lower = std::sqrt(k2 * Q / (2.0 * N * (1.0 - Q)));
  return b;
}

bool diag_hypotheses_hold(int n, int k, int N, double P, double Q, double epsilon) {
  if (!(0.0 < Q && Q < P && P <= 1.0) || !(epsilon > 0.0) || k > n || k < 0) return false;
  if (N < (P / Q + epsilon) * n * (1.0 - 1e-12)) return false;
  if (k > Q * epsilon * n / 2.0) return false;
  const double k2n = static_cast<double>(k) * k / N;
  return k2n <= std::min(Q / (1.0 - Q), (1.0 - Q) / Q);
}

double chi2_mixture_exact(std::int64_t n, std::int64_t k, double chi2_entry) {
  if (k < 0 || k > n || chi2_entry < 0.0)
    throw std::invalid_argument("chi2_mixture_exact: need 0 <= k <= n and chi2 >= 0");
  const double l1c = std::log1p(chi2_entry);
  const double lse = log_expectation(hypergeometric_pmf(n, k),
                                     [l1c](int h) { return static_cast<double>(h) * h * l1c; });
  return std::max(std::expm1(lse), 0.0);
}

double chi2_hidden_vector_exact(std::int64_t m, std::int64_t k, double chi2_entry) {
  if (k < 0 || k > m || chi2_entry < 0.0)
    throw std::invalid_argument("chi2_hidden_vector_exact: need 0 <= k <= m and chi2 >= 0");
  const double l1c = std::log1p(chi2_entry);
  const double lse =
      log_expectation(hypergeometric_pmf(m, k), [l1c](int h) { return h * l1c; });
  return std::max(std::expm1(lse), 0.0);
}

double hiding_bound(std::int64_t m, std::int64_t k, double chi2_entry) {
  return 2.0 * static_cast<double>(k) * k * chi2_entry / static_cast<double>(m);
}

ItReport it_impossibility_margin(std::int64_t n, std::int64_t k, double chi2_entry) {
  if (k < 1 || k > n) throw std::invalid_argument("it_impossibility_margin: need 1 <= k <= n");
  ItReport r;
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  r.lhs = chi2_entry;
  r.rhs = std::min(std::log(std::numbers::e * nd / kd) / nd, nd * nd / (kd * kd * kd * kd)) /
          (16.0 * std::numbers::e);
  r.satisfied = r.lhs < r.rhs;
  if (r.satisfied) r.tv_bound = std::min(1.0, std::sqrt(0.5 * chi2_mixture_exact(n, k, chi2_entry)));
  return r;
}

ItReport it_impossibility_margin(std::int64_t n, std::int64_t k, const ComputablePair& pair) {
  return it_impossibility_margin(n, k, pair.chi2());
}

PluginTv tv_plugin(const std::vector<double>& a, const std::vector<double>& b, int bins,
                   std::uint64_t seed) {
  if (a.size() < 1000 || b.size() < 1000)
    throw std::invalid_argument("tv_plugin: need at least 1000 samples per side");
  if (bins < 2) throw std::invalid_argument("tv_plugin: need at least 2 bins");
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> edges;
  for (int i = 1; i < bins; ++i) {
    const double e = pooled[static_cast<std::size_t>(
        std::floor(static_cast<double>(i) * pooled.size() / bins))];
    if (edges.empty() || e > edges.back()) edges.push_back(e);
  }
  // Bin j collects values in (edges[j-1], edges[j]].
  auto histogram = [&edges](const std::vector<double>& xs) {
    std::vector<double> counts(edges.size() + 1, 0.0);
    for (double x : xs)
      counts[std::lower_bound(edges.begin(), edges.end(), x) - edges.begin()] += 1.0;
    return counts;
  };
  const auto ca = histogram(a), cb = histogram(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  auto tv_of = [](const std::vector<double>& x, double nx, const std::vector<double>& y,
                  double ny) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += std::abs(x[j] / nx - y[j] / ny);
    return 0.5 * s;
  };
  PluginTv out;
  out.estimate = tv_of(ca, na, cb, nb);

  Rng rng(seed);
  auto resample = [&rng](const std::vector<double>& counts, double total) {
    std::vector<double> draw(counts.size(), 0.0);
    std::int64_t left = static_cast<std::int64_t>(total);
    double mass_left = total;
    for (std::size_t j = 0; j < counts.size() && left > 0; ++j) {
      const double pj = mass_left > 0 ? std::min(1.0, counts[j] / mass_left) : 0.0;
      const std::int64_t x = binomial(rng, left, pj);
      draw[j] = static_cast<double>(x);
      left -= x;
      mass_left -= counts[j];
    }
    return draw;
  };
  const int reps = 200;
  double s = 0.0, s2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double t = tv_of(resample(ca, na), na, resample(cb, nb), nb);
    s += t;
    s2 += t * t;
  }
  const double mean = s / reps;
  out.stderr_ = std::sqrt(std::max(s2 / reps - mean * mean, 0.0));
  return out;
}

}  // namespace subred
