#include "subred/pairs.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "subred/oracle.h"

namespace subred {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent Bernoulli exponent: D(alpha || r) with alpha the fraction of
// ones at which the LLR sum per sample equals theta.
double bernoulli_exponent_reference(double p, double q, double r, double theta) {
  const double alpha = (theta + std::log((1 - q) / (1 - p))) /
                       std::log(p * (1 - q) / (q * (1 - p)));
  return alpha * std::log(alpha / r) + (1 - alpha) * std::log((1 - alpha) / (1 - r));
}

TEST(Llr, GaussianAtZeroIsMinusHalfMuSquared) {
  EXPECT_DOUBLE_EQ(ComputablePair::gaussian(0.5).llr(0.0), -0.125);
}

TEST(Llr, BernoulliAtoms) {
  const auto pair = ComputablePair::bernoulli(0.6, 0.3);
  EXPECT_NEAR(pair.llr(1.0), 0.693147180559945, 1e-14);
  EXPECT_NEAR(pair.llr(0.0), -0.559615787935423, 1e-14);
  EXPECT_THROW(pair.llr(0.5), std::domain_error);
}

TEST(Llr, CertainAlternativeGivesMinusInfinityAtZero) {
  const auto pair = ComputablePair::bernoulli(1.0, 0.25);
  EXPECT_EQ(pair.llr(0.0), -kInf);
  EXPECT_NEAR(pair.llr(1.0), std::log(4.0), 1e-15);
}

TEST(Construction, RejectsInvalidParameters) {
  EXPECT_THROW(ComputablePair::gaussian(0.0), std::invalid_argument);
  EXPECT_THROW(ComputablePair::bernoulli(0.3, 0.6), std::invalid_argument);
  EXPECT_THROW(ComputablePair::bernoulli(0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(ComputablePair::bernoulli(1.2, 0.5), std::invalid_argument);
}

TEST(Construction, ParsesConfigText) {
  const auto g = ComputablePair::parse("family=gaussian mu=0.5");
  EXPECT_TRUE(g.is_gaussian());
  EXPECT_EQ(g.mu(), 0.5);
  const auto b = ComputablePair::parse("family=bernoulli p=0.6 q=0.3");
  EXPECT_EQ(b.p_alt(), 0.6);
  EXPECT_EQ(b.p_null(), 0.3);
  EXPECT_EQ(ComputablePair::parse(b.describe()), b);
  EXPECT_THROW(ComputablePair::parse("family=poisson rate=2"), std::invalid_argument);
}

TEST(Divergences, GaussianSymmetrizedKlIsMuSquared) {
  EXPECT_DOUBLE_EQ(ComputablePair::gaussian(0.5).skl(), 0.25);
}

TEST(Divergences, BernoulliChiSquare) {
  EXPECT_NEAR(ComputablePair::bernoulli(0.6, 0.3).chi2(), 0.09 / 0.21, 1e-15);
}

TEST(Divergences, BernoulliKlMatchesDirectSum) {
  const double p = 0.6, q = 0.3;
  const auto d = ComputablePair::bernoulli(p, q).divergences();
  EXPECT_NEAR(d.kl_pq, p * std::log(p / q) + (1 - p) * std::log((1 - p) / (1 - q)), 1e-15);
  EXPECT_NEAR(d.kl_qp, q * std::log(q / p) + (1 - q) * std::log((1 - q) / (1 - p)), 1e-15);
  EXPECT_NEAR(d.skl, d.kl_pq + d.kl_qp, 1e-15);
}

TEST(Divergences, NearlyIdenticalGaussiansAreTiny) {
  const auto d = ComputablePair::gaussian(1e-6).divergences();
  EXPECT_LT(d.kl_pq, 1e-11);
  EXPECT_LT(d.kl_qp, 1e-11);
  EXPECT_LT(d.skl, 1e-11);
  EXPECT_LT(d.chi2, 1e-11);
}

TEST(Divergences, GaussianChiSquareAgreesWithQuadrature) {
  for (double mu : {0.1, 0.5, 1.0, 1.5, 2.0}) {
    const double quad = gaussian_chi2_quadrature(mu);
    EXPECT_NEAR(ComputablePair::gaussian(mu).chi2(), quad, 1e-8 * (1 + quad)) << mu;
  }
}

TEST(LogMgf, VanishesAtZeroAndOneUnderNull) {
  for (const auto& pair : {ComputablePair::gaussian(0.7), ComputablePair::bernoulli(0.6, 0.3),
                           ComputablePair::bernoulli(0.02, 0.01)}) {
    EXPECT_NEAR(pair.log_mgf(Side::kUnderQ, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(pair.log_mgf(Side::kUnderQ, 1.0), 0.0, 1e-14);
  }
}

TEST(LogMgf, GaussianClosedForm) {
  const double mu = 0.8;
  const auto pair = ComputablePair::gaussian(mu);
  for (double lambda : {-2.0, -0.5, 0.3, 1.7}) {
    EXPECT_NEAR(pair.log_mgf(Side::kUnderQ, lambda),
                -lambda * mu * mu / 2 + lambda * lambda * mu * mu / 2, 1e-14);
  }
}

TEST(LogMgf, ShiftIdentityOnGrid) {
  for (const auto& pair : {ComputablePair::gaussian(0.4), ComputablePair::gaussian(1.3),
                           ComputablePair::bernoulli(0.6, 0.3),
                           ComputablePair::bernoulli(0.9, 0.1)}) {
    for (int i = 0; i < 100; ++i) {
      const double lambda = -3.0 + 6.0 * i / 99.0;
      EXPECT_NEAR(pair.log_mgf(Side::kUnderP, lambda), pair.log_mgf(Side::kUnderQ, lambda + 1),
                  1e-10);
    }
  }
}

TEST(LogMgf, CertainAlternativeIsInfiniteForNegativeLambdaUnderNull) {
  const auto pair = ComputablePair::bernoulli(1.0, 0.5);
  EXPECT_EQ(pair.log_mgf(Side::kUnderQ, -0.5), kInf);
  EXPECT_NEAR(pair.log_mgf(Side::kUnderQ, 0.0), 0.0, 1e-15);
}

TEST(Chernoff, MinimaAtTheKlDivergences) {
  for (const auto& pair : {ComputablePair::gaussian(0.3), ComputablePair::gaussian(2.0),
                           ComputablePair::bernoulli(0.6, 0.3),
                           ComputablePair::bernoulli(0.05, 0.01)}) {
    EXPECT_NEAR(pair.chernoff_exponent(Side::kUnderP, pair.kl_pq()), 0.0, 1e-8);
    EXPECT_NEAR(pair.chernoff_exponent(Side::kUnderQ, -pair.kl_qp()), 0.0, 1e-8);
    EXPECT_NEAR(pair.chernoff_exponent_numeric(Side::kUnderP, pair.kl_pq()), 0.0, 1e-8);
    EXPECT_NEAR(pair.chernoff_exponent_numeric(Side::kUnderQ, -pair.kl_qp()), 0.0, 1e-8);
  }
}

TEST(Chernoff, GaussianUnitExample) {
  EXPECT_NEAR(ComputablePair::gaussian(1.0).chernoff_exponent(Side::kUnderP, 1.0), 0.125, 1e-12);
  EXPECT_NEAR(ComputablePair::gaussian(1.0).chernoff_exponent_numeric(Side::kUnderP, 1.0), 0.125,
              1e-10);
}

TEST(Chernoff, BernoulliMatchesBinaryDivergence) {
  const double p = 0.6, q = 0.3;
  const auto pair = ComputablePair::bernoulli(p, q);
  for (double theta : {-0.4, -0.1, 0.0, 0.2, 0.5}) {
    EXPECT_NEAR(pair.chernoff_exponent(Side::kUnderP, theta),
                bernoulli_exponent_reference(p, q, p, theta), 1e-12);
    EXPECT_NEAR(pair.chernoff_exponent(Side::kUnderQ, theta),
                bernoulli_exponent_reference(p, q, q, theta), 1e-12);
    EXPECT_NEAR(pair.chernoff_exponent_numeric(Side::kUnderP, theta),
                bernoulli_exponent_reference(p, q, p, theta), 1e-6);
  }
}

TEST(Chernoff, BernoulliBeyondLlrRangeIsInfinite) {
  const auto pair = ComputablePair::bernoulli(0.6, 0.3);
  EXPECT_EQ(pair.chernoff_exponent(Side::kUnderP, 1.0), kInf);
  EXPECT_EQ(pair.chernoff_exponent_numeric(Side::kUnderP, 1.0), kInf);
  EXPECT_EQ(pair.chernoff_exponent(Side::kUnderQ, -0.7), kInf);
}

TEST(Chernoff, LegendreConsistencyOnRandomThresholds) {
  Rng rng(17);
  for (const auto& pair : {ComputablePair::gaussian(0.6), ComputablePair::bernoulli(0.6, 0.3),
                           ComputablePair::bernoulli(0.2, 0.05)}) {
    const double lo = pair.is_gaussian() ? -2.0 : pair.llr_min();
    const double hi = pair.is_gaussian() ? 2.0 : pair.llr_max();
    for (int i = 0; i < 50; ++i) {
      const double tau = lo + (hi - lo) * (0.02 + 0.96 * uniform01(rng));
      const double eq = pair.chernoff_exponent_numeric(Side::kUnderQ, tau);
      const double ep = pair.chernoff_exponent_numeric(Side::kUnderP, tau);
      EXPECT_NEAR(ep + tau, eq, 1e-8) << pair.describe() << " tau=" << tau;
      EXPECT_NEAR(ep, pair.chernoff_exponent(Side::kUnderP, tau), 1e-6);
    }
  }
}

TEST(Chernoff, NullExponentIsConvexWithMinimumAtMinusKl) {
  for (const auto& pair : {ComputablePair::gaussian(0.9), ComputablePair::bernoulli(0.7, 0.4)}) {
    const double center = -pair.kl_qp();
    const double h = 0.01;
    std::vector<double> values;
    for (int i = -40; i <= 40; ++i)
      values.push_back(pair.chernoff_exponent_numeric(Side::kUnderQ, center + h * i));
    for (std::size_t i = 1; i + 1 < values.size(); ++i)
      EXPECT_GE(values[i + 1] - 2 * values[i] + values[i - 1], -1e-8);
    EXPECT_LE(values[40], 1e-8);
  }
}

TEST(Normalization, NullMeanOfLikelihoodRatioIsOne) {
  for (const auto& pair : {ComputablePair::gaussian(0.5), ComputablePair::bernoulli(0.6, 0.3)}) {
    Rng rng(2024);
    const int n = 1000000;
    double sum = 0, sum_sq = 0;
    for (int i = 0; i < n; ++i) {
      const double w = std::exp(pair.llr(pair.sample_null(rng)));
      sum += w;
      sum_sq += w * w;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    EXPECT_LT(std::abs(mean - 1.0), 5 * se) << pair.describe();
  }
}

TEST(Universality, GaussianChiSquareOverSklTendsToOne) {
  const double n = 1e4;
  const double mu = std::pow(n, -0.3);
  const auto r = uc_membership(ComputablePair::gaussian(mu), UcClass::kC, n, 0.5);
  EXPECT_TRUE(r.satisfied);
  EXPECT_NEAR(r.witness, std::expm1(mu * mu) / (mu * mu), 1e-9);
  EXPECT_NEAR(r.witness, 1.0, 0.01);
}

TEST(Universality, SparseBernoulliRatioBounded) {
  for (double n : {1e2, 1e4, 1e6}) {
    const double q = std::pow(n, -0.4);
    const auto r = uc_membership(ComputablePair::bernoulli(2 * q, q), UcClass::kC, n, 0.5);
    EXPECT_TRUE(r.satisfied);
    EXPECT_LT(r.witness, 2.0);
  }
}

TEST(Universality, BoundedLlrGivesFiniteQuadraticConstant) {
  const auto r = uc_membership(ComputablePair::bernoulli(0.9, 0.1), UcClass::kB, 100, 0.5);
  EXPECT_TRUE(r.satisfied);
  EXPECT_GE(r.witness, 1.0);
  EXPECT_TRUE(std::isfinite(r.witness));
}

TEST(Universality, GaussianQuadraticConstantIsOne) {
  const auto r = uc_membership(ComputablePair::gaussian(0.3), UcClass::kB, 100, 0.5);
  EXPECT_NEAR(r.witness, 1.0, 1e-6);
}

TEST(Universality, GaussianLargeDeviationConstant) {
  const double n = 1e6, eps = 0.5, mu = 0.1;
  const auto r = uc_membership(ComputablePair::gaussian(mu), UcClass::kA, n, eps);
  const double ne = std::pow(n, eps);
  EXPECT_NEAR(r.witness, (ne - 1) * (ne - 1) / (4 * ne * std::log(n)), 1e-6);
  EXPECT_TRUE(r.satisfied);
}

TEST(Entrywise, TotalVariationOrdersDiffer) {
  const auto r = entrywise_counterexample(1e4, 0.5);
  EXPECT_NEAR(r.tv_star, 1e-2, 1e-15);
  EXPECT_NEAR(r.tv_direct, 1e-1, 1e-15);
  const double ratio = r.kl_star / r.kl_direct;
  EXPECT_GT(ratio, 0.1);
  EXPECT_LT(ratio, 10.0);
}

TEST(Entrywise, DegenerateExponentGivesEqualTv) {
  const auto r = entrywise_counterexample(1e4, 0.0);
  EXPECT_EQ(r.tv_star, r.tv_direct);
}

TEST(Helpers, LogAddExpAndBinaryKl) {
  EXPECT_NEAR(log_add_exp(std::log(2.0), std::log(3.0)), std::log(5.0), 1e-15);
  EXPECT_EQ(log_add_exp(-kInf, 1.5), 1.5);
  EXPECT_EQ(bernoulli_kl(0.3, 0.3), 0.0);
  EXPECT_EQ(bernoulli_kl(0.5, 1.0), kInf);
  EXPECT_NEAR(bernoulli_kl(1.0, 0.25), std::log(4.0), 1e-15);
}

TEST(Grid, HomogeneousAndFull) {
  const auto g = PairGrid::homogeneous(4, ComputablePair::gaussian(0.5));
  EXPECT_TRUE(g.is_homogeneous());
  EXPECT_EQ(g.at(3, 2).mu(), 0.5);
  std::vector<ComputablePair> entries;
  for (int i = 0; i < 4; ++i) entries.push_back(ComputablePair::gaussian(0.1 * (i + 1)));
  const auto h = PairGrid::from_entries(2, entries);
  EXPECT_EQ(h.at(1, 0).mu(), 0.1 * 3);
  entries[3] = ComputablePair::bernoulli(0.6, 0.3);
  EXPECT_THROW(PairGrid::from_entries(2, entries), std::invalid_argument);
}

}  // namespace
}  // namespace subred
