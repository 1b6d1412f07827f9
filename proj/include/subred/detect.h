#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "subred/pairs.h"
#include "subred/rng.h"
#include "subred/sampler.h"

namespace subred {

/// Mean entry LLR (1/d^2) sum_ij L(M_ij).
double t_sum(const MatrixSample& m, const ComputablePair& pair);
/// -kl_qp + (k^2/n^2) skl.
double tau_sum(std::int64_t n, std::int64_t k, const ComputablePair& pair);

/// Largest entry LLR.
double t_max(const MatrixSample& m, const ComputablePair& pair);

/// Largest k x k block-average LLR over all row subsets S and column
/// subsets T. Throws std::length_error when C(d,k)^2 exceeds the budget.
double t_search(const MatrixSample& m, const ComputablePair& pair, int k,
                double budget = 1e7);

/// Throws std::invalid_argument unless -kl_qp < tau < kl_pq.
void check_open_threshold(const ComputablePair& pair, double tau);

enum class DetectorKind { kSum, kMax, kSearch };

/// A statistic with a threshold; decides H1 when statistic >= threshold.
struct Detector {
  DetectorKind kind = DetectorKind::kSum;
  ComputablePair pair = ComputablePair::gaussian(1.0);
  int k = 0;
  double threshold = 0.0;

  std::string name() const;
  double statistic(const MatrixSample& m) const;
  bool decide(const MatrixSample& m) const { return statistic(m) >= threshold; }
};

/// Sum test at tau_sum(d, k); max and search tests at tau (default 0),
/// which must lie in the open interval (-kl_qp, kl_pq).
Detector make_detector(DetectorKind kind, int d, int k, const ComputablePair& pair,
                       double tau = 0.0);

struct DetectorReport {
  std::int64_t trials = 0;
  double type1 = 0.0;
  double type2 = 0.0;
  double total = 0.0;
  double stderr_ = 0.0;
};

using MatrixSampler = std::function<MatrixSample(Rng&)>;
using Decision = std::function<bool(const MatrixSample&)>;

/// Runs the decision on `trials` samples from each hypothesis. Trial i of
/// the null uses the stream derived from (seed, 0, i), of the planted side
/// (seed, 1, i).
DetectorReport estimate_error(const Decision& decide, const MatrixSampler& null_sampler,
                              const MatrixSampler& planted_sampler, std::int64_t trials,
                              std::uint64_t seed);

/// Same trials shared by several decisions: every decision sees the same
/// samples.
std::vector<DetectorReport> estimate_errors(const std::vector<Decision>& decisions,
                                            const MatrixSampler& null_sampler,
                                            const MatrixSampler& planted_sampler,
                                            std::int64_t trials, std::uint64_t seed);

/// detector,n,k,family,param,skl,trials,type1,type2,total,stderr,seed
std::string report_csv_header();
std::string report_csv_row(const std::string& detector, std::int64_t n, std::int64_t k,
                           const ComputablePair& pair, const DetectorReport& r,
                           std::uint64_t seed);

}  // namespace subred
