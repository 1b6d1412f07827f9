#pragma once

#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "subred/config.h"
#include "subred/rng.h"

namespace subred {

enum class Family { kGaussian, kBernoulli };
enum class Side { kUnderP, kUnderQ };

struct Divergences {
  double kl_pq = 0.0;  // d_KL(P || Q), nats
  double kl_qp = 0.0;  // d_KL(Q || P), nats
  double skl = 0.0;    // kl_pq + kl_qp
  double chi2 = 0.0;   // chi^2(P || Q)
};

/// log(exp(a) + exp(b)) without overflow; -inf inputs are allowed.
double log_add_exp(double a, double b);

/// d_KL(Bern(a) || Bern(b)) with the 0 log 0 = 0 convention; +inf when
/// Bern(a) is not absolutely continuous with respect to Bern(b).
double bernoulli_kl(double a, double b);

/// sup over lambda of (lambda * tau - psi(lambda)) for a convex log-MGF psi
/// with psi(0) = 0 and psi'(0) = slope_at_zero. Golden-section search on a
/// bracket that doubles from [0, 1] up to [0, 64] in the ascent direction;
/// returns +inf when the objective is still increasing at the outer edge.
double legendre_sup(const std::function<double(double)>& psi, double tau,
                    double slope_at_zero);

/// A pair (P, Q) of distributions on a common sample space: P = N(mu, 1)
/// against Q = N(0, 1), or P = Bern(p_alt) against Q = Bern(p_null).
/// Bernoulli samples are the reals 0.0 and 1.0.
class ComputablePair {
 public:
  static ComputablePair gaussian(double mu);
  static ComputablePair bernoulli(double p_alt, double p_null);

  /// Reads `family=gaussian mu=...` or `family=bernoulli p=... q=...`.
  /// Every key is looked up as prefix + name.
  static ComputablePair from_config(const KeyValues& kv, const std::string& prefix = "");
  static ComputablePair parse(std::string_view text);

  Family family() const { return family_; }
  bool is_gaussian() const { return family_ == Family::kGaussian; }
  bool finite_support() const { return family_ == Family::kBernoulli; }
  double mu() const { return a_; }
  double p_alt() const { return a_; }
  double p_null() const { return b_; }

  /// log dP/dQ(x). Throws std::domain_error for x outside the sample space.
  double llr(double x) const;
  /// Largest and smallest LLR values; infinite for the Gaussian family.
  double llr_max() const;
  double llr_min() const;

  /// Mode of Q, used as the deterministic kernel fallback value.
  double null_mode() const { return 0.0; }

  double sample_null(Rng& rng) const;
  double sample_alt(Rng& rng) const;

  const Divergences& divergences() const { return div_; }
  double kl_pq() const { return div_.kl_pq; }
  double kl_qp() const { return div_.kl_qp; }
  double skl() const { return div_.skl; }
  double chi2() const { return div_.chi2; }

  /// psi(lambda) = log E[exp(lambda * L)] under P or Q; +inf when infinite.
  double log_mgf(Side side, double lambda) const;

  /// Chernoff exponent E(tau) = sup_lambda lambda*tau - psi(lambda), using
  /// closed forms for both shipped families.
  double chernoff_exponent(Side side, double tau) const;
  /// Same supremum computed by the numeric Legendre search only.
  double chernoff_exponent_numeric(Side side, double tau) const;

  /// Human-readable form that round-trips through parse().
  std::string describe() const;
  /// Short parameter string without commas, for CSV columns.
  std::string param_string() const;

  bool operator==(const ComputablePair& o) const {
    return family_ == o.family_ && a_ == o.a_ && b_ == o.b_;
  }

 private:
  ComputablePair(Family f, double a, double b);

  Family family_;
  double a_;  // mu or p_alt
  double b_;  // p_null (Bernoulli only)
  Divergences div_;
};

/// Draws from either side of a pair while keeping the normal-variate state
/// local to one caller, so batched draws stay reproducible per stream.
class PairDrawer {
 public:
  explicit PairDrawer(Rng& rng) : rng_(rng) {}
  double null(const ComputablePair& pair);
  double alt(const ComputablePair& pair);

 private:
  Rng& rng_;
  std::normal_distribution<double> normal_;
};

/// d x d grid of pairs (P_ij, Q_ij) sharing a sample space. A homogeneous
/// grid stores a single pair.
class PairGrid {
 public:
  static PairGrid homogeneous(int d, const ComputablePair& pair);
  static PairGrid from_entries(int d, std::vector<ComputablePair> entries);

  int dim() const { return d_; }
  bool is_homogeneous() const { return entries_.size() == 1; }
  Family family() const { return entries_.front().family(); }
  const ComputablePair& at(int i, int j) const {
    return is_homogeneous() ? entries_.front()
                            : entries_[static_cast<std::size_t>(i) * d_ + j];
  }

 private:
  PairGrid(int d, std::vector<ComputablePair> entries)
      : d_(d), entries_(std::move(entries)) {}

  int d_;
  std::vector<ComputablePair> entries_;
};

enum class UcClass { kA, kB, kC };

/// Finite-n stand-ins for the constants the universality classes leave free.
struct UcThresholds {
  double a_min_constant = 0.05;  // UC-A: required c in E_P(n^eps kl) >= c n^eps kl log n
  double b_max_constant = 1e3;   // UC-B: largest acceptable quadratic-domination constant
  double c_max_ratio = 100.0;    // UC-C: largest acceptable chi^2 / skl
};

struct UcReport {
  bool satisfied = false;
  double margin = 0.0;   // distance of the witness from its threshold (positive = inside)
  double witness = 0.0;  // the constant computed for the class
};

UcReport uc_membership(const ComputablePair& pair, UcClass cls, double n, double epsilon,
                       const UcThresholds& thresholds = {});

/// Two Bernoulli pairs with comparable KL divergence but total variation of
/// different orders, which rules out any entrywise map between them:
/// (P*, Q*) = (Bern(n^-a), Bern(2 n^-a)) and (P, Q) = (Bern(1/2), Bern(1/2 + n^-a/2)).
struct EntrywiseReport {
  double kl_star = 0.0;    // d_KL(P* || Q*)
  double kl_direct = 0.0;  // d_KL(P || Q)
  double tv_star = 0.0;
  double tv_direct = 0.0;
};

EntrywiseReport entrywise_counterexample(double n, double alpha);

}  // namespace subred
