#include "subred/pairs.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subred {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// lambda * a with the conventions needed when a = -inf: the term vanishes
// from the sum for lambda > 0, contributes a factor 1 at lambda = 0 and
// diverges for lambda < 0.
double scaled(double lambda, double a) {
  if (std::isinf(a)) {
    if (lambda == 0.0) return 0.0;
    return lambda > 0.0 ? -kInf : kInf;
  }
  return lambda * a;
}

// log of the probability weights (w1 on the atom x = 1, w0 on x = 0).
double log_weight(double w) { return w > 0.0 ? std::log(w) : -kInf; }

double log_one_minus(double w) { return w < 1.0 ? std::log1p(-w) : -kInf; }

}  // namespace

double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a == kInf || b == kInf) return kInf;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double bernoulli_kl(double a, double b) {
  double total = 0.0;
  if (a > 0.0) {
    if (b <= 0.0) return kInf;
    total += a * (std::log(a) - std::log(b));
  }
  if (a < 1.0) {
    if (b >= 1.0) return kInf;
    total += (1.0 - a) * (std::log1p(-a) - std::log1p(-b));
  }
  return std::max(total, 0.0);
}

double legendre_sup(const std::function<double(double)>& psi, double tau,
                    double slope_at_zero) {
  if (std::isnan(tau)) throw std::invalid_argument("legendre_sup: tau is NaN");
  if (std::isinf(tau)) return kInf;
  if (tau == slope_at_zero) return 0.0;
  const double dir = tau > slope_at_zero ? 1.0 : -1.0;
  auto f = [&](double u) {
    const double v = psi(dir * u);
    if (v == kInf) return -kInf;
    return dir * u * tau - v;
  };
  constexpr double kEdge = 64.0;
  double hi = 1.0;
  while (hi < kEdge && f(2.0 * hi) > f(hi)) hi *= 2.0;
  const double b0 = std::min(2.0 * hi, kEdge);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = b0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double best = std::max(fc, fd);
  if (b0 >= kEdge) {
    const double edge = f(kEdge);
    if (edge > f(kEdge * (1.0 - 1e-6)) && edge >= best) return kInf;
    best = std::max(best, edge);
  }
  return std::max(best, 0.0);
}

ComputablePair::ComputablePair(Family f, double a, double b) : family_(f), a_(a), b_(b) {
  if (f == Family::kGaussian) {
    const double m2 = a * a;
    div_.kl_pq = m2 / 2.0;
    div_.kl_qp = m2 / 2.0;
    div_.skl = m2;
    div_.chi2 = std::expm1(m2);
  } else {
    div_.kl_pq = bernoulli_kl(a, b);
    div_.kl_qp = bernoulli_kl(b, a);
    div_.skl = div_.kl_pq + div_.kl_qp;
    div_.chi2 = (a - b) * (a - b) / (b * (1.0 - b));
  }
}

ComputablePair ComputablePair::gaussian(double mu) {
  if (!std::isfinite(mu) || mu == 0.0)
    throw std::invalid_argument("gaussian pair: mu must be finite and nonzero");
  return ComputablePair(Family::kGaussian, mu, 0.0);
}

ComputablePair ComputablePair::bernoulli(double p_alt, double p_null) {
  if (!(p_null > 0.0 && p_null < p_alt && p_alt <= 1.0))
    throw std::invalid_argument("bernoulli pair: need 0 < q < p <= 1, got p=" +
                                format_real(p_alt) + " q=" + format_real(p_null));
  return ComputablePair(Family::kBernoulli, p_alt, p_null);
}

ComputablePair ComputablePair::from_config(const KeyValues& kv, const std::string& prefix) {
  const std::string family = kv.string_at(prefix + "family");
  if (family == "gaussian") return gaussian(kv.real_at(prefix + "mu"));
  if (family == "bernoulli")
    return bernoulli(kv.real_at(prefix + "p"), kv.real_at(prefix + "q"));
  throw std::invalid_argument("unknown pair family '" + family + "'");
}

ComputablePair ComputablePair::parse(std::string_view text) {
  return from_config(KeyValues::parse(text));
}

double ComputablePair::llr(double x) const {
  if (family_ == Family::kGaussian) {
    if (!std::isfinite(x)) throw std::domain_error("llr: non-finite Gaussian sample");
    return a_ * x - a_ * a_ / 2.0;
  }
  if (x == 1.0) return std::log(a_) - std::log(b_);
  if (x == 0.0) return log_one_minus(a_) - std::log1p(-b_);
  throw std::domain_error("llr: Bernoulli sample must be 0 or 1");
}

double ComputablePair::llr_max() const { return is_gaussian() ? kInf : llr(1.0); }
double ComputablePair::llr_min() const { return is_gaussian() ? -kInf : llr(0.0); }

double ComputablePair::sample_null(Rng& rng) const {
  PairDrawer draw(rng);
  return draw.null(*this);
}

double ComputablePair::sample_alt(Rng& rng) const {
  PairDrawer draw(rng);
  return draw.alt(*this);
}

double ComputablePair::log_mgf(Side side, double lambda) const {
  if (family_ == Family::kGaussian) {
    const double m2 = a_ * a_;
    // L ~ N(-m2/2, m2) under Q and N(m2/2, m2) under P.
    const double mean = side == Side::kUnderQ ? -m2 / 2.0 : m2 / 2.0;
    return lambda * mean + lambda * lambda * m2 / 2.0;
  }
  const double r = side == Side::kUnderQ ? b_ : a_;
  const double up = log_weight(r) + scaled(lambda, llr(1.0));
  const double w0 = log_one_minus(r);
  const double down = w0 == -kInf ? -kInf : w0 + scaled(lambda, llr(0.0));
  return log_add_exp(up, down);
}

double ComputablePair::chernoff_exponent(Side side, double tau) const {
  if (std::isnan(tau)) throw std::invalid_argument("chernoff_exponent: tau is NaN");
  if (std::isinf(tau)) return kInf;
  if (family_ == Family::kGaussian) {
    const double m2 = a_ * a_;
    const double shift = side == Side::kUnderQ ? m2 / 2.0 : -m2 / 2.0;
    return (tau + shift) * (tau + shift) / (2.0 * m2);
  }
  const double a1 = llr(1.0);
  const double r = side == Side::kUnderQ ? b_ : a_;
  const double tol = 1e-12 * std::max(1.0, std::abs(tau));
  if (a_ == 1.0) {
    // L = a1 with probability r, otherwise -inf.
    if (tau > a1 + tol) return kInf;
    if (side == Side::kUnderP) return std::abs(tau - a1) <= tol ? 0.0 : kInf;
    return -std::log(r);
  }
  const double a0 = llr(0.0);
  double alpha = (tau - a0) / (a1 - a0);
  if (alpha < 0.0 && alpha > -1e-12) alpha = 0.0;
  if (alpha > 1.0 && alpha < 1.0 + 1e-12) alpha = 1.0;
  if (alpha < 0.0 || alpha > 1.0) return kInf;
  return bernoulli_kl(alpha, r);
}

double ComputablePair::chernoff_exponent_numeric(Side side, double tau) const {
  const double slope = side == Side::kUnderQ ? -div_.kl_qp : div_.kl_pq;
  return legendre_sup([this, side](double l) { return log_mgf(side, l); }, tau, slope);
}

std::string ComputablePair::describe() const {
  if (family_ == Family::kGaussian) return "family=gaussian mu=" + format_real(a_);
  return "family=bernoulli p=" + format_real(a_) + " q=" + format_real(b_);
}

std::string ComputablePair::param_string() const {
  if (family_ == Family::kGaussian) return "mu=" + format_real(a_);
  return "p=" + format_real(a_) + ";q=" + format_real(b_);
}

double PairDrawer::null(const ComputablePair& pair) {
  if (pair.is_gaussian()) return normal_(rng_);
  return bernoulli(rng_, pair.p_null()) ? 1.0 : 0.0;
}

double PairDrawer::alt(const ComputablePair& pair) {
  if (pair.is_gaussian()) return pair.mu() + normal_(rng_);
  return bernoulli(rng_, pair.p_alt()) ? 1.0 : 0.0;
}

PairGrid PairGrid::homogeneous(int d, const ComputablePair& pair) {
  if (d < 1) throw std::invalid_argument("pair grid: dimension must be positive");
  return PairGrid(d, {pair});
}

PairGrid PairGrid::from_entries(int d, std::vector<ComputablePair> entries) {
  if (d < 1 || entries.size() != static_cast<std::size_t>(d) * d)
    throw std::invalid_argument("pair grid: need d*d entries");
  for (const auto& e : entries)
    if (e.family() != entries.front().family())
      throw std::invalid_argument("pair grid: entries must share one sample space");
  return PairGrid(d, std::move(entries));
}

UcReport uc_membership(const ComputablePair& pair, UcClass cls, double n, double epsilon,
                       const UcThresholds& thresholds) {
  if (n < 2) throw std::invalid_argument("uc_membership: need n >= 2");
  UcReport report;
  switch (cls) {
    case UcClass::kA: {
      if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("uc_membership: epsilon must lie in (0, 1)");
      const double theta = std::pow(n, epsilon) * pair.kl_pq();
      const double e = pair.chernoff_exponent(Side::kUnderP, theta);
      report.witness = e / (theta * std::log(n));
      report.margin = report.witness - thresholds.a_min_constant;
      report.satisfied = report.witness >= thresholds.a_min_constant;
      break;
    }
    case UcClass::kB: {
      const int steps = 2000;
      double c = 1.0;
      for (int i = 0; i <= steps; ++i) {
        const double lambda = -1.0 + 2.0 * i / steps;
        if (std::abs(lambda) < 1e-9) continue;
        const double l2 = lambda * lambda;
        const double q_side =
            (pair.log_mgf(Side::kUnderQ, lambda) + pair.kl_qp() * lambda) / (pair.kl_qp() * l2);
        c = std::max(c, q_side);
        if (lambda < 0.0) {
          const double p_side = (pair.log_mgf(Side::kUnderP, lambda) - pair.kl_pq() * lambda) /
                                (pair.kl_pq() * l2);
          c = std::max(c, p_side);
        }
        if (std::isnan(c)) c = kInf;
      }
      report.witness = c;
      report.margin = thresholds.b_max_constant - c;
      report.satisfied = c <= thresholds.b_max_constant;
      break;
    }
    case UcClass::kC: {
      const double ratio = pair.chi2() / pair.skl();
      report.witness = ratio;
      report.margin = thresholds.c_max_ratio - ratio;
      report.satisfied = ratio <= thresholds.c_max_ratio;
      break;
    }
  }
  return report;
}

EntrywiseReport entrywise_counterexample(double n, double alpha) {
  auto kl_or_inf = [](double a, double b) {
    if (a < 0.0 || a > 1.0 || b < 0.0 || b > 1.0) return kInf;
    return bernoulli_kl(a, b);
  };
  const double small = std::pow(n, -alpha);
  const double half_gap = std::pow(n, -alpha / 2.0);
  EntrywiseReport r;
  r.kl_star = kl_or_inf(small, 2.0 * small);
  r.tv_star = std::abs(2.0 * small - small);
  r.kl_direct = kl_or_inf(0.5, 0.5 + half_gap);
  r.tv_direct = std::abs((0.5 + half_gap) - 0.5);
  return r;
}

}  // namespace subred
