#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "subred/finite_law.h"
#include "subred/pairs.h"

namespace subred {

/// log C(n, k) via log-gamma; -inf outside 0 <= k <= n.
double log_choose(double n, double k);

/// Bin(n, p) probabilities for x = 0..n.
std::vector<double> binomial_pmf(int n, double p);

/// Hypergeometric(n, k, k) probabilities of |S cap T| = h for two uniform
/// k-subsets of [n], h = 0..k.
std::vector<double> hypergeometric_pmf(std::int64_t n, std::int64_t k);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

/// chi^2(N(mu,1) || N(0,1)) = E_Q[(dP/dQ)^2] - 1 by quadrature of the squared
/// likelihood ratio against the standard normal density over +-12 sigma
/// around both means, tolerance 1e-10.
double gaussian_chi2_quadrature(double mu);

/// Sum of per-step TV bounds along a pipeline, capped at 1.
double tv_chain_bound(const std::vector<double>& step_bounds);

/// Exact laws of the diagonal-planting support counts: t1 ~ Bin(k,P),
/// t2 ~ Bin(n-k,P), t3 ~ Bin(N,Q), t4 = max(t3 - t1 - t2, 0).
struct DiagLaws {
  FiniteLaw planted_pair;  // law of (t1, t2 + t4)
  FiniteLaw total;         // law of t1 + t2 + t4
};

/// When `outside_capacity` is nonnegative, t4 is additionally capped at it,
/// which is the law realized by an embedding with that many slots outside
/// the principal minor.
DiagLaws diag_support_law(int n, int k, int N, double P, double Q,
                          int outside_capacity = -1);

/// Reference laws the diagonal counts are compared with.
FiniteLaw diag_planted_reference(int k, int N, double P, double Q);  // Bin(k,P) x Bin(N-k,Q)
FiniteLaw diag_null_reference(int N, double Q);                      // Bin(N,Q)

struct DiagBounds {
  double epsilon = 0.0;      // N/n - P/Q, the largest admissible slack
  double embed_term = 0.0;   // 4 exp(-Q eps^2 n^2 / 32N)
  double binom_upper = 0.0;  // sqrt(k^2 (1-Q) / (2NQ))
  double binom_lower = 0.0;  // sqrt(k^2 Q / (2N(1-Q)))
  double planted() const { return embed_term + binom_upper + binom_lower; }
  double null() const { return embed_term; }
};

/// Embedding bounds at slack epsilon (defaults to N/n - P/Q).
DiagBounds diag_bounds(int n, int k, int N, double P, double Q, double epsilon = -1.0);

/// True when N >= (P/Q + eps) n, k <= Q eps n / 2 and
/// k^2/N <= min(Q/(1-Q), (1-Q)/Q) with 0 < Q < P <= 1 and k <= n.
bool diag_hypotheses_hold(int n, int k, int N, double P, double Q, double epsilon);

/// E[(1 + c)^(H^2)] - 1 with H ~ Hypergeometric(n, k, k): the chi^2
/// divergence of the planted k x k submatrix mixture from the null product.
double chi2_mixture_exact(std::int64_t n, std::int64_t k, double chi2_entry);

/// E[(1 + c)^H] - 1 with H ~ Hypergeometric(m, k, k): chi^2 of a uniformly
/// planted length-m vector with k alternative entries.
double chi2_hidden_vector_exact(std::int64_t m, std::int64_t k, double chi2_entry);

/// The hiding bound 2 k^2 chi^2 / m, valid when k^2 chi^2 <= m.
double hiding_bound(std::int64_t m, std::int64_t k, double chi2_entry);

struct ItReport {
  double lhs = 0.0;  // chi^2 of the entry pair
  double rhs = 0.0;  // (1/16e) min((1/n) log(en/k), n^2/k^4)
  bool satisfied = false;
  double tv_bound = 1.0;  // sqrt(chi2_mixture / 2) when satisfied, else 1
};

ItReport it_impossibility_margin(std::int64_t n, std::int64_t k, double chi2_entry);
ItReport it_impossibility_margin(std::int64_t n, std::int64_t k, const ComputablePair& pair);

struct PluginTv {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

/// Histogram plug-in TV on shared equal-probability bins taken from the
/// pooled sample, with a multinomial bootstrap standard error over 200
/// resamples of the bin counts.
PluginTv tv_plugin(const std::vector<double>& a, const std::vector<double>& b, int bins,
                   std::uint64_t seed = 1);

}  // namespace subred
