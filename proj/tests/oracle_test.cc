#include "subred/oracle.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "subred/brute_force.h"
#include "subred/stats.h"

namespace subred {
namespace {

FiniteLaw bern(double p) {
  FiniteLaw law;
  law.add({0}, 1 - p);
  law.add({1}, p);
  return law;
}

// Applies a Markov kernel given as outcome -> law.
template <class K>
FiniteLaw apply(const FiniteLaw& in, K kernel) {
  FiniteLaw out;
  for (const auto& [o, pr] : in.atoms()) {
    const FiniteLaw next = kernel(o);
    for (const auto& [o2, pr2] : next.atoms()) out.add(o2, pr * pr2);
  }
  return out;
}

TEST(TvExact, BasicCases) {
  EXPECT_EQ(tv_exact(bern(0.4), bern(0.4)), 0.0);
  EXPECT_EQ(tv_exact(FiniteLaw::point({0}), FiniteLaw::point({1})), 1.0);
  EXPECT_NEAR(tv_exact(bern(0.6), bern(0.3)), 0.3, 1e-15);
}

TEST(TvChain, SumsAndCaps) {
  EXPECT_EQ(tv_chain_bound({0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(tv_chain_bound({0.2, 0.3}), 0.5);
  EXPECT_EQ(tv_chain_bound({0.7, 0.6}), 1.0);
  EXPECT_THROW(tv_chain_bound({1.5}), std::invalid_argument);
}

TEST(TvChain, BoundsComposedFiniteKernels) {
  auto flip = [](const Outcome& o) { return bern(o[0] == 1 ? 0.9 : 0.1); };
  auto add_coin = [](const Outcome& o) {
    FiniteLaw law;
    law.add({o[0]}, 0.7);
    law.add({o[0] + 1}, 0.3);
    return law;
  };
  const FiniteLaw p0 = bern(0.5);
  const FiniteLaw p1 = bern(0.45);
  FiniteLaw p2;
  p2.add({0}, 0.40);
  p2.add({1}, 0.45);
  p2.add({2}, 0.15);
  const double e1 = tv_exact(apply(p0, flip), p1);
  const double e2 = tv_exact(apply(p1, add_coin), p2);
  const double composed = tv_exact(apply(apply(p0, flip), add_coin), p2);
  EXPECT_GT(e1, 0.0);
  EXPECT_GT(e2, 0.0);
  EXPECT_LE(composed, tv_chain_bound({e1, e2}) + 1e-15);
}

TEST(DiagSupport, CertainPlantedEntriesGiveShiftedNull) {
  const int n = 5, k = 2, N = 14;
  const double Q = 0.4;
  const auto laws = diag_support_law(n, k, N, 1.0, Q);
  const auto expected = FiniteLaw::binomial(N, Q).pushforward(
      [n](const Outcome& o) { return Outcome{std::max<std::int64_t>(o[0], n)}; });
  EXPECT_LT(tv_exact(laws.total, expected), 1e-14);
  for (const auto& [o, pr] : laws.planted_pair.atoms()) EXPECT_EQ(o[0], k);
}

TEST(DiagSupport, FullNullDensityIsDeterministic) {
  const auto laws = diag_support_law(6, 2, 16, 1.0, 1.0);
  EXPECT_NEAR(laws.total.prob({16}), 1.0, 1e-14);
}

TEST(DiagSupport, TotalWithinEmbeddingBound) {
  const int n = 6, k = 2, N = 16;
  const double P = 0.8, Q = 0.5;
  const auto laws = diag_support_law(n, k, N, P, Q);
  laws.total.validate();
  laws.planted_pair.validate();
  const auto bounds = diag_bounds(n, k, N, P, Q);
  EXPECT_NEAR(bounds.epsilon, 16.0 / 6.0 - 1.6, 1e-15);
  EXPECT_LE(tv_exact(laws.total, diag_null_reference(N, Q)), bounds.null());
  EXPECT_LE(tv_exact(laws.planted_pair, diag_planted_reference(k, N, P, Q)), bounds.planted());
}

TEST(DiagSupport, CapacityCapMovesMassDown) {
  const auto capped = diag_support_law(4, 1, 6, 0.9, 0.8, 2);
  for (const auto& [o, pr] : capped.total.atoms()) EXPECT_LE(o[0], 6);
  capped.total.validate();
}

TEST(Hypergeometric, SumsToOne) {
  for (std::int64_t n : {10, 1000, 10000}) {
    for (std::int64_t k : {std::int64_t{1}, n / 7, n / 2}) {
      double s = 0;
      for (double v : hypergeometric_pmf(n, k)) s += v;
      EXPECT_NEAR(s, 1.0, 1e-10) << n << " " << k;
    }
  }
}

TEST(Chi2Mixture, EmptyPlantIsZero) { EXPECT_EQ(chi2_mixture_exact(10, 0, 0.7), 0.0); }

TEST(Chi2Mixture, FourChooseTwoByHand) {
  const double c = 0.3;
  const double expected =
      1.0 / 6 + 4.0 / 6 * (1 + c) + 1.0 / 6 * std::pow(1 + c, 4) - 1;
  EXPECT_NEAR(chi2_mixture_exact(4, 2, c), expected, 1e-14);
}

TEST(Chi2Mixture, MatchesBruteForceOnThreeByThree) {
  for (auto [p, q] : {std::pair{0.6, 0.3}, std::pair{0.9, 0.1}, std::pair{0.2, 0.15}}) {
    const double c = (p - q) * (p - q) / (q * (1 - q));
    for (int k = 1; k <= 3; ++k) {
      const double brute = chi2_matrix_mixture_brute(3, k, p, q);
      EXPECT_NEAR(chi2_mixture_exact(3, k, c), brute, 1e-10 * std::max(1.0, brute));
    }
  }
}

TEST(HidingBound, BruteForceBelowBoundOnGrid) {
  const double grid[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (auto [m, k] : {std::pair{8, 2}, std::pair{12, 3}}) {
    for (double p : grid) {
      for (double q : grid) {
        const double c = (p - q) * (p - q) / (q * (1 - q));
        if (k * k * c > m) continue;
        const double exact = chi2_vector_mixture_brute(m, k, p, q);
        EXPECT_NEAR(exact, chi2_hidden_vector_exact(m, k, c), 1e-10);
        EXPECT_LE(exact, hiding_bound(m, k, c) + 1e-12) << m << " " << k << " " << p << " " << q;
      }
    }
  }
}

TEST(ItMargin, ZeroSignalIsSatisfiedWithZeroBound) {
  const auto r = it_impossibility_margin(100, 10, 0.0);
  EXPECT_TRUE(r.satisfied);
  EXPECT_EQ(r.tv_bound, 0.0);
}

TEST(ItMargin, HalfThresholdGaussian) {
  const std::int64_t n = 100, k = 10;
  const double rhs = std::min(std::log(std::numbers::e * 10) / 100, 1.0) / (16 * std::numbers::e);
  EXPECT_NEAR(it_impossibility_margin(n, k, 0.0).rhs, rhs, 1e-15);
  const double mu = std::sqrt(std::log1p(0.5 * rhs));
  const auto pair = ComputablePair::gaussian(mu);
  EXPECT_NEAR(pair.chi2(), 0.5 * rhs, 1e-15);
  const auto r = it_impossibility_margin(n, k, pair);
  EXPECT_TRUE(r.satisfied);
  EXPECT_LT(r.tv_bound, 1.0);
  EXPECT_FALSE(it_impossibility_margin(n, k, 2 * rhs).satisfied);
}

TEST(GaussianQuadrature, MatchesClosedForm) {
  for (double mu : {0.2, 1.0, 2.5}) EXPECT_NEAR(gaussian_chi2_quadrature(mu), std::expm1(mu * mu), 1e-8);
}

TEST(PluginTv, IdenticalSamplesGiveZero) {
  std::vector<double> a(5000);
  Rng rng(5);
  for (double& x : a) x = uniform01(rng);
  EXPECT_EQ(tv_plugin(a, a, 32).estimate, 0.0);
  EXPECT_THROW(tv_plugin(std::vector<double>(10), a, 4), std::invalid_argument);
}

TEST(PluginTv, BernoulliMatchesExact) {
  Rng rng(6);
  std::vector<double> a(1000000), b(1000000);
  for (double& x : a) x = bernoulli(rng, 0.6);
  for (double& x : b) x = bernoulli(rng, 0.3);
  const auto r = tv_plugin(a, b, 16);
  EXPECT_NEAR(r.estimate, 0.3, 0.002);
  EXPECT_GT(r.stderr_, 0.0);
  EXPECT_LT(r.stderr_, 0.002);
}

TEST(PluginTv, GaussianShiftMatchesErf) {
  Rng rng(7);
  std::normal_distribution<double> z;
  std::vector<double> a(1000000), b(1000000);
  for (double& x : a) x = z(rng);
  for (double& x : b) x = 1.0 + z(rng);
  EXPECT_NEAR(tv_plugin(a, b, 64).estimate, std::erf(0.5 / std::numbers::sqrt2), 0.01);
}

TEST(Stats, ChiSquareTail) { EXPECT_NEAR(chi_square_sf(3.841458820694124, 1), 0.05, 1e-9); }

TEST(Stats, KsSeparatesShiftedSamples) {
  Rng rng(8);
  std::normal_distribution<double> z;
  std::vector<double> a(20000), b(20000), c(20000);
  for (double& x : a) x = z(rng);
  for (double& x : b) x = z(rng);
  for (double& x : c) x = 0.1 + z(rng);
  EXPECT_GT(ks_two_sample(a, b).p_value, 1e-3);
  EXPECT_LT(ks_two_sample(a, c).p_value, 1e-6);
  EXPECT_GT(chi_square_two_sample(a, b, 20).p_value, 1e-3);
  EXPECT_LT(chi_square_two_sample(a, c, 20).p_value, 1e-6);
}

}  // namespace
}  // namespace subred
