#include "subred/detect.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "subred/config.h"
#include "subred/oracle.h"

namespace subred {
namespace {

std::vector<double> llr_matrix(const MatrixSample& m, const ComputablePair& pair) {
  std::vector<double> l(m.data.size());
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = pair.llr(m.data[i]);
  return l;
}

// Next k-subset of [0, n) in colex order; returns false after the last one.
bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = 0; i < k; ++i) {
    const int limit = i + 1 < k ? c[i + 1] : n;
    if (c[i] + 1 < limit) {
      ++c[i];
      for (int j = 0; j < i; ++j) c[j] = j;
      return true;
    }
  }
  return false;
}

}  // namespace

double t_sum(const MatrixSample& m, const ComputablePair& pair) {
  double s = 0.0;
  for (double x : m.data) s += pair.llr(x);
  return s / static_cast<double>(m.data.size());
}

double tau_sum(std::int64_t n, std::int64_t k, const ComputablePair& pair) {
  const double frac = static_cast<double>(k) * k / (2.0 * static_cast<double>(n) * n);
  return -pair.kl_qp() + frac * pair.skl();
}

double t_max(const MatrixSample& m, const ComputablePair& pair) {
  double best = -std::numeric_limits<double>::infinity();
  for (double x : m.data) best = std::max(best, pair.llr(x));
  return best;
}

double t_search(const MatrixSample& m, const ComputablePair& pair, int k, double budget) {
  const int d = m.d;
  if (!(1 <= k && k <= d)) throw std::invalid_argument("t_search: need 1 <= k <= d");
  if (2.0 * log_choose(d, k) > std::log(budget))
    throw std::length_error("t_search: C(d,k)^2 exceeds the search budget");
  const auto l = llr_matrix(m, pair);
  std::vector<int> rows(k);
  for (int i = 0; i < k; ++i) rows[i] = i;
  std::vector<double> col(d);
  double best = -std::numeric_limits<double>::infinity();
  // For fixed rows the best column set is the k largest column sums.
  do {
    std::fill(col.begin(), col.end(), 0.0);
    for (int r : rows)
      for (int j = 0; j < d; ++j) col[j] += l[static_cast<std::size_t>(r) * d + j];
    std::nth_element(col.begin(), col.begin() + (k - 1), col.end(), std::greater<>());
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += col[j];
    best = std::max(best, s);
  } while (next_combination(rows, d));
  return best / (static_cast<double>(k) * k);
}

void check_open_threshold(const ComputablePair& pair, double tau) {
  if (!(-pair.kl_qp() < tau && tau < pair.kl_pq()))
    throw std::invalid_argument("detector threshold " + format_real(tau) +
                                " must lie in (-kl_qp, kl_pq) = (" + format_real(-pair.kl_qp()) +
                                ", " + format_real(pair.kl_pq()) + ")");
}

std::string Detector::name() const {
  switch (kind) {
    case DetectorKind::kSum: return "sum";
    case DetectorKind::kMax: return "max";
    case DetectorKind::kSearch: return "search";
  }
  return "unknown";
}

double Detector::statistic(const MatrixSample& m) const {
  switch (kind) {
    case DetectorKind::kSum: return t_sum(m, pair);
    case DetectorKind::kMax: return t_max(m, pair);
    case DetectorKind::kSearch: return t_search(m, pair, k);
  }
  throw std::logic_error("detector: unknown kind");
}

Detector make_detector(DetectorKind kind, int d, int k, const ComputablePair& pair, double tau) {
  Detector det{kind, pair, k, tau};
  if (kind == DetectorKind::kSum) det.threshold = tau_sum(d, k, pair);
  else check_open_threshold(pair, tau);
  return det;
}

std::vector<DetectorReport> estimate_errors(const std::vector<Decision>& decisions,
                                            const MatrixSampler& null_sampler,
                                            const MatrixSampler& planted_sampler,
                                            std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("estimate_error: need trials >= 1");
  std::vector<std::int64_t> false_alarm(decisions.size(), 0), miss(decisions.size(), 0);
  for (std::int64_t i = 0; i < trials; ++i) {
    Rng null_rng = make_rng(seed, {0, static_cast<std::uint64_t>(i)});
    const MatrixSample m0 = null_sampler(null_rng);
    Rng alt_rng = make_rng(seed, {1, static_cast<std::uint64_t>(i)});
    const MatrixSample m1 = planted_sampler(alt_rng);
    for (std::size_t d = 0; d < decisions.size(); ++d) {
      false_alarm[d] += decisions[d](m0) ? 1 : 0;
      miss[d] += decisions[d](m1) ? 0 : 1;
    }
  }
  std::vector<DetectorReport> out(decisions.size());
  const double t = static_cast<double>(trials);
  for (std::size_t d = 0; d < decisions.size(); ++d) {
    auto& r = out[d];
    r.trials = trials;
    r.type1 = false_alarm[d] / t;
    r.type2 = miss[d] / t;
    r.total = r.type1 + r.type2;
    r.stderr_ = std::sqrt(r.type1 * (1 - r.type1) / t + r.type2 * (1 - r.type2) / t);
  }
  return out;
}

DetectorReport estimate_error(const Decision& decide, const MatrixSampler& null_sampler,
                              const MatrixSampler& planted_sampler, std::int64_t trials,
                              std::uint64_t seed) {
  return estimate_errors({decide}, null_sampler, planted_sampler, trials, seed).front();
}

std::string report_csv_header() {
  return "detector,n,k,family,param,skl,trials,type1,type2,total,stderr,seed";
}

std::string report_csv_row(const std::string& detector, std::int64_t n, std::int64_t k,
                           const ComputablePair& pair, const DetectorReport& r,
                           std::uint64_t seed) {
  std::ostringstream out;
  out << detector << ',' << n << ',' << k << ',' << (pair.is_gaussian() ? "gaussian" : "bernoulli")
      << ',' << pair.param_string() << ',' << format_real(pair.skl()) << ',' << r.trials << ','
      << format_real(r.type1) << ',' << format_real(r.type2) << ',' << format_real(r.total) << ','
      << format_real(r.stderr_) << ',' << seed;
  return out.str();
}

}  // namespace subred
