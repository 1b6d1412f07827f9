#include "subred/kernel.h"

#include <gtest/gtest.h>

#include <cmath>

#include "subred/stats.h"

namespace subred {
namespace {

FiniteLaw bern(double p) {
  FiniteLaw law;
  law.add({0}, 1 - p);
  law.add({1}, p);
  return law;
}

KernelSpec identity_spec(double p, double q, int iters) {
  return KernelSpec::homogeneous(p, q, ComputablePair::bernoulli(p, q), 1, iters);
}

TEST(KernelSpec, WindowEdges) {
  const auto s = identity_spec(0.6, 0.3, 10);
  EXPECT_NEAR(s.window.c_plus, std::log(2.0), 1e-15);
  EXPECT_NEAR(s.window.c_minus, std::log(0.4 / 0.7), 1e-15);
  const auto clique = identity_spec(1.0, 0.25, 10);
  EXPECT_TRUE(std::isinf(clique.window.c_minus) && clique.window.c_minus < 0);
  EXPECT_THROW(identity_spec(0.3, 0.6, 1), std::invalid_argument);
  EXPECT_THROW(KernelSpec::make(0.6, 0.3, {ComputablePair::gaussian(1), ComputablePair::bernoulli(0.6, 0.3)}, 1),
               std::invalid_argument);
}

TEST(KernelSpec, KlSandwichNamesFailedSide) {
  // ell = 40 copies of Bern(0.6, 0.3) push ell * kl_pq far beyond log(p/q).
  const auto spec = KernelSpec::homogeneous(0.6, 0.3, ComputablePair::bernoulli(0.6, 0.3), 40, 1);
  try {
    spec.check_kl_sandwich();
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("kl(Q||P)"), std::string::npos);
  }
}

TEST(ExactLaw, IdentityAcceptanceProbability) {
  for (auto [p, q] : {std::pair{0.6, 0.3}, std::pair{0.9, 0.2}, std::pair{1.0, 0.4}}) {
    const auto s = identity_spec(p, q, 1);
    EXPECT_NEAR(acceptance_probability(s, 1), q * (p - q) / (p * (1 - q)), 1e-15);
    EXPECT_NEAR(acceptance_probability(s, 0), (p - q) / p, 1e-15);
  }
}

TEST(ExactLaw, IdentityCaseReproducesSourceLaws) {
  const double p = 0.6, q = 0.3;
  const auto s = identity_spec(p, q, 500);
  const auto one = exact_output_law(s, 1);
  EXPECT_LT(1.0 - one.prob({1}), 1e-12);
  EXPECT_LT(tv_exact(exact_output_law_mixed(s, p), bern(p)), 1e-12);
  EXPECT_LT(tv_exact(exact_output_law_mixed(s, q), bern(q)), 1e-12);
}

TEST(ExactLaw, FixedBitLawIsConditionalOnTheBit) {
  // With B fixed the output follows B itself, so it is Bern(p) only after
  // mixing over the input bit.
  const double p = 0.6, q = 0.3;
  const auto s = identity_spec(p, q, 500);
  EXPECT_NEAR(tv_exact(exact_output_law(s, 1), bern(p)), 1 - p, 1e-12);
}

TEST(ExactLaw, FallbackMassMatchesClosedForm) {
  const double p = 0.6, q = 0.3;
  const int iters = 7;
  const auto s = identity_spec(p, q, iters);
  const double fallback = std::pow(1 - q * (p - q) / (p * (1 - q)), iters);
  EXPECT_NEAR(exact_output_law(s, 1).prob({0}), fallback, 1e-14);
  EXPECT_LE(fallback, std::pow(1 - q * (p - q) / p, iters));
}

TEST(ExactLaw, ZeroIterationsIsTheFallbackAtom) {
  const auto s = KernelSpec::homogeneous(0.8, 0.3, ComputablePair::bernoulli(0.6, 0.3), 3, 0);
  for (int b : {0, 1}) {
    const auto law = exact_output_law(s, b);
    ASSERT_EQ(law.size(), 1u);
    EXPECT_EQ(law.prob({0, 0, 0}), 1.0);
  }
}

TEST(ExactLaw, RejectsContinuousTargets) {
  const auto s = KernelSpec::homogeneous(0.8, 0.3, ComputablePair::gaussian(0.5), 2, 5);
  EXPECT_THROW(exact_output_law(s, 0), std::invalid_argument);
}

TEST(ExactLaw, TwoTargetsMatchSimulation) {
  KernelSpec s = KernelSpec::homogeneous(1.0, 0.25, ComputablePair::bernoulli(0.6, 0.3), 2, 1);
  s.iterations = recommended_iterations(s);
  const int draws = 1000000;
  for (int b : {0, 1}) {
    const auto law = exact_output_law(s, b);
    law.validate();
    Rng rng(100 + b);
    std::map<Outcome, int> counts;
    for (int i = 0; i < draws; ++i) {
      const auto z = mrk_map(s, b, rng);
      counts[{static_cast<std::int64_t>(z[0]), static_cast<std::int64_t>(z[1])}]++;
    }
    for (std::int64_t x0 : {0, 1}) {
      for (std::int64_t x1 : {0, 1}) {
        const double pr = law.prob({x0, x1});
        const double se = std::sqrt(pr * (1 - pr) / draws);
        EXPECT_NEAR(counts[(std::vector<std::int64_t>{x0, x1})] / double(draws), pr, 4 * se + 1e-12) << b << x0 << x1;
      }
    }
  }
}

TEST(ExactLaw, MixedLawsWithinDeltaUpToThreeTargets) {
  const std::vector<ComputablePair> pool{ComputablePair::bernoulli(0.6, 0.4),
                                         ComputablePair::bernoulli(0.55, 0.5),
                                         ComputablePair::bernoulli(0.3, 0.2)};
  for (double ps : {1.0, 0.8, 0.6}) {
    for (double qs : {0.2, 0.4}) {
      for (int ell = 1; ell <= 3; ++ell) {
        std::vector<ComputablePair> targets(pool.begin(), pool.begin() + ell);
        for (int iters : {3, 30}) {
          const auto s = KernelSpec::make(ps, qs, targets, iters);
          const auto tails = tail_probs(s);
          const double delta = delta_bound(s, tails.tail_p, tails.tail_q).delta;
          EXPECT_LE(tv_exact(exact_output_law_mixed(s, ps), target_product_law(s, Side::kUnderP)), delta);
          EXPECT_LE(tv_exact(exact_output_law_mixed(s, qs), target_product_law(s, Side::kUnderQ)), delta);
        }
      }
    }
  }
}

TEST(DeltaBound, ClosedFormExamples) {
  EXPECT_LT(delta_value(0.5, 0.25, 1000000, 0, 0), 1e-300);
  EXPECT_GE(delta_value(0.5, 0.25, 10, 1, 1), 2 / 0.25);
  const double d = delta_value(0.5, 0.25, 100, 0.01, 0.01);
  EXPECT_NEAR(d, 0.08 + std::pow(0.005 + 0.3125 / 0.375, 100), 1e-15);
  EXPECT_THROW(delta_bound(identity_spec(0.6, 0.3, 1), 1.5, 0), std::invalid_argument);
}

TEST(DeltaBound, RecommendedIterationsFormula) {
  const double p = 0.5, q = 0.25;
  EXPECT_EQ(recommended_iterations(p, q, 10.0),
            static_cast<int>(std::ceil(10.0 / -std::log1p(-q * (p - q) / (2 * p)))));
  EXPECT_EQ(recommended_iterations(p, q, INFINITY), recommended_iterations(p, q, 40.0));
}

TEST(HomogeneousDelta, SymmetricRatesGiveSixExp) {
  const auto g = ComputablePair::gaussian(std::sqrt(0.005));
  const double tau = 0.7;
  const auto d = homogeneous_delta(g, 4, 0.5, 0.25, tau, tau);
  EXPECT_NEAR(d.delta, 6 * std::exp(-4 * tau) / 0.25, 1e-12);
  const auto spec = KernelSpec::homogeneous(0.5, 0.25, g, 4, d.recommended_iterations);
  const auto mc = tail_probs(spec, TailMethod::kMonteCarlo, 1000000, 3);
  EXPECT_LE(mc.tail_p, std::exp(-4 * tau) * 2);
  EXPECT_LE(mc.tail_q, std::exp(-4 * tau) * 2);
}

TEST(HomogeneousDelta, CliqueSourceDropsLowerRate) {
  const auto g = ComputablePair::gaussian(0.1);
  const auto d = homogeneous_delta(g, 4, 1.0, 0.25, 0.5, 0.0);
  EXPECT_NEAR(d.delta, 3 * std::exp(-4 * 0.5) / 0.75, 1e-12);
}

TEST(HomogeneousDelta, NamesFailedHypothesis) {
  const auto g = ComputablePair::gaussian(std::sqrt(0.005));
  auto message = [&](double tp, double tm) {
    try {
      homogeneous_delta(g, 4, 0.5, 0.25, tp, tm);
    } catch (const HypothesisError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(0.1, 0.7).find("tau+ >= log(4/(p-q))/l"), std::string::npos);
  EXPECT_NE(message(0.7, 0.1).find("tau- >= log(4/(p-q))/l"), std::string::npos);
  EXPECT_NE(message(0.7, 1.5).find("E_Q(c-/l) >= tau-"), std::string::npos);
  EXPECT_NE(message(3.5, 0.7).find("E_P(c+/l) >= tau+"), std::string::npos);
}

TEST(Tails, IdentityCaseHasNoMassOutside) {
  const auto t = tail_probs(identity_spec(0.6, 0.3, 1));
  EXPECT_EQ(t.tail_p, 0.0);
  EXPECT_EQ(t.tail_q, 0.0);
}

TEST(Tails, GaussianExactMatchesMonteCarlo) {
  const auto s = KernelSpec::homogeneous(0.5, 0.25, ComputablePair::gaussian(0.5), 4, 1);
  const auto exact = tail_probs(s, TailMethod::kExact);
  const auto mc = tail_probs(s, TailMethod::kMonteCarlo, 1000000, 11);
  EXPECT_NEAR(mc.tail_p, exact.tail_p, 4 * mc.stderr_p);
  EXPECT_NEAR(mc.tail_q, exact.tail_q, 4 * mc.stderr_q);
  const auto chernoff = tail_probs(s, TailMethod::kChernoff);
  EXPECT_GE(chernoff.tail_p, exact.tail_p);
  EXPECT_GE(chernoff.tail_q, exact.tail_q);
}

TEST(Tails, BernoulliChernoffBoundsExact) {
  const auto s = KernelSpec::homogeneous(0.7, 0.2, ComputablePair::bernoulli(0.6, 0.4), 6, 1);
  const auto exact = tail_probs(s);
  const auto chernoff = tail_probs(s, TailMethod::kChernoff);
  EXPECT_GE(chernoff.tail_p + 1e-12, exact.tail_p);
  EXPECT_GE(chernoff.tail_q + 1e-12, exact.tail_q);
}

TEST(Tails, GaussianAcceptanceMatchesExactLawOfSum) {
  // Acceptance under B=1 equals (q/p) P*(W) - q(1-p)/(p(1-q)) Q*(W).
  const auto s = KernelSpec::homogeneous(0.5, 0.25, ComputablePair::gaussian(0.5), 4, 1);
  Rng rng(5);
  const int draws = 400000;
  int accepted = 0;
  auto one = KernelSpec::homogeneous(0.5, 0.25, ComputablePair::gaussian(0.5), 4, 1);
  for (int i = 0; i < draws; ++i) {
    const auto z = mrk_map(one, 1, rng);
    accepted += (z != std::vector<double>(4, 0.0)) ? 1 : 0;
  }
  const double a = acceptance_probability(s, 1);
  EXPECT_NEAR(accepted / double(draws), a, 4 * std::sqrt(a * (1 - a) / draws));
}

TEST(Mrk, GaussianMarginalsPassKs) {
  const double mu = 0.03, p = 0.5, q = 0.25;
  const auto g = ComputablePair::gaussian(mu);
  const auto s = KernelSpec::homogeneous(p, q, g, 4, 100);
  const auto tails = tail_probs(s);
  ASSERT_LE(delta_bound(s, tails.tail_p, tails.tail_q).delta, 1e-4);
  const int draws = 100000;
  for (auto [src, side] : {std::pair{p, Side::kUnderP}, std::pair{q, Side::kUnderQ}}) {
    Rng rng(side == Side::kUnderP ? 21 : 22);
    PairDrawer draw(rng);
    std::vector<double> out(draws), direct(draws);
    for (int i = 0; i < draws; ++i) {
      out[i] = mrk_map(s, bernoulli(rng, src) ? 1 : 0, rng)[0];
      direct[i] = side == Side::kUnderP ? draw.alt(g) : draw.null(g);
    }
    EXPECT_GT(ks_two_sample(out, direct).p_value, 1e-3);
  }
}

TEST(Mrk, CliqueSourceNeverRejectsOnTheLowerSide) {
  const auto s = KernelSpec::homogeneous(1.0, 0.25, ComputablePair::gaussian(0.4), 3, 1);
  const double a = acceptance_probability(s, 1);
  const auto t = tail_probs(s);
  EXPECT_NEAR(a, 0.25 * (1 - t.tail_p), 1e-12);
}

TEST(Mrk, DeterministicUnderSeed) {
  const auto s = KernelSpec::homogeneous(0.7, 0.3, ComputablePair::gaussian(0.2), 3, 20);
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(mrk_map(s, i % 2, a), mrk_map(s, i % 2, b));
}

}  // namespace
}  // namespace subred
