#include "subred/kernel.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subred/stats.h"

namespace subred {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kProbSlack = 1e-9;

double edge_tol(double c) { return std::isfinite(c) ? 1e-12 * (1.0 + std::abs(c)) : 0.0; }

bool in_window(const Window& w, double l) {
  return l >= w.c_minus - edge_tol(w.c_minus) && l <= w.c_plus + edge_tol(w.c_plus);
}

// Acceptance probability of one in-window proposal with summed LLR l.
double accept_prob(const KernelSpec& spec, int bit, double l) {
  const double ratio = std::exp(l - spec.window.c_plus);  // (q/p) e^L
  double a;
  if (bit == 0) {
    a = 1.0 - ratio;
  } else {
    const double floor_term = std::exp(spec.window.c_minus - spec.window.c_plus);
    a = ratio - floor_term;
  }
  if (a < -kProbSlack || a > 1.0 + kProbSlack || std::isnan(a))
    throw std::logic_error("kernel: acceptance probability outside [0,1]");
  return std::clamp(a, 0.0, 1.0);
}

// Calls f(x, q_prob, l) for every x in {0,1}^ell, x packed in the low bits.
template <class F>
void for_each_binary_outcome(const KernelSpec& spec, Side side, F&& f) {
  const int ell = spec.ell();
  if (!spec.finite_support()) throw std::invalid_argument("kernel: exact laws need Bernoulli targets");
  if (ell > 20) throw std::invalid_argument("kernel: exact laws need ell <= 20");
  for (std::uint32_t x = 0; x < (1u << ell); ++x) {
    double prob = 1.0, l = 0.0;
    for (int i = 0; i < ell; ++i) {
      const auto& t = spec.targets[i];
      const bool one = (x >> i) & 1u;
      const double r = side == Side::kUnderQ ? t.p_null() : t.p_alt();
      prob *= one ? r : 1.0 - r;
      l += t.llr(one ? 1.0 : 0.0);
    }
    f(x, prob, l);
  }
}

Outcome unpack(std::uint32_t x, int ell) {
  Outcome o(ell);
  for (int i = 0; i < ell; ++i) o[i] = (x >> i) & 1u;
  return o;
}

Outcome fallback_outcome(const KernelSpec& spec) {
  Outcome o(spec.ell());
  for (int i = 0; i < spec.ell(); ++i) o[i] = static_cast<std::int64_t>(spec.targets[i].null_mode());
  return o;
}

double summed_log_mgf(const KernelSpec& spec, Side side, double lambda) {
  double s = 0.0;
  for (const auto& t : spec.targets) s += t.log_mgf(side, lambda);
  return s;
}

double summed_kl(const KernelSpec& spec, Side side) {
  double s = 0.0;
  for (const auto& t : spec.targets) s += side == Side::kUnderP ? t.kl_pq() : t.kl_qp();
  return s;
}

// sup_lambda lambda*c - Psi(lambda) for the summed LLR.
double summed_exponent(const KernelSpec& spec, Side side, double c) {
  const double slope = side == Side::kUnderP ? summed_kl(spec, side) : -summed_kl(spec, side);
  if (spec.is_homogeneous() && std::isfinite(c)) {
    const double ell = spec.ell();
    return ell * spec.targets.front().chernoff_exponent(side, c / ell);
  }
  return legendre_sup([&](double l) { return summed_log_mgf(spec, side, l); }, c, slope);
}

}  // namespace

KernelSpec KernelSpec::make(double p_src, double q_src, std::vector<ComputablePair> targets,
                            int iterations) {
  if (!(0.0 < q_src && q_src < p_src && p_src <= 1.0))
    throw std::invalid_argument("kernel: need 0 < q_src < p_src <= 1");
  if (targets.empty()) throw std::invalid_argument("kernel: need at least one target");
  if (iterations < 0) throw std::invalid_argument("kernel: iterations must be nonnegative");
  for (const auto& t : targets)
    if (t.family() != targets.front().family())
      throw std::invalid_argument("kernel: targets must share one sample space");
  KernelSpec s;
  s.p_src = p_src;
  s.q_src = q_src;
  s.targets = std::move(targets);
  s.iterations = iterations;
  s.window.c_plus = std::log(p_src) - std::log(q_src);
  s.window.c_minus = p_src < 1.0 ? std::log1p(-p_src) - std::log1p(-q_src) : -kInf;
  return s;
}

KernelSpec KernelSpec::homogeneous(double p_src, double q_src, const ComputablePair& target,
                                   int ell, int iterations) {
  if (ell < 1) throw std::invalid_argument("kernel: ell must be positive");
  return make(p_src, q_src, std::vector<ComputablePair>(ell, target), iterations);
}

bool KernelSpec::finite_support() const { return targets.front().finite_support(); }

bool KernelSpec::is_homogeneous() const {
  return std::all_of(targets.begin(), targets.end(),
                     [this](const ComputablePair& t) { return t == targets.front(); });
}

void KernelSpec::check_kl_sandwich() const {
  const double lo = -summed_kl(*this, Side::kUnderQ);
  const double hi = summed_kl(*this, Side::kUnderP);
  if (!(window.c_minus < lo))
    throw HypothesisError("kernel: c- < -l*kl(Q||P) fails: log((1-p)/(1-q)) = " +
                          format_real(window.c_minus) + " vs " + format_real(lo));
  if (!(hi < window.c_plus))
    throw HypothesisError("kernel: l*kl(P||Q) < c+ fails: " + format_real(hi) +
                          " vs log(p/q) = " + format_real(window.c_plus));
}

void mrk_map_into(const KernelSpec& spec, int bit, Rng& rng, std::span<double> out) {
  const int ell = spec.ell();
  if (static_cast<int>(out.size()) != ell) throw std::invalid_argument("kernel: output size != ell");
  PairDrawer draw(rng);
  thread_local std::vector<double> proposal;
  proposal.resize(ell);
  for (int it = 0; it < spec.iterations; ++it) {
    double l = 0.0;
    for (int i = 0; i < ell; ++i) {
      proposal[i] = draw.null(spec.targets[i]);
      l += spec.targets[i].llr(proposal[i]);
    }
    if (!in_window(spec.window, l)) continue;
    if (uniform01(rng) < accept_prob(spec, bit, l)) {
      std::copy(proposal.begin(), proposal.end(), out.begin());
      return;
    }
  }
  for (int i = 0; i < ell; ++i) out[i] = spec.targets[i].null_mode();
}

std::vector<double> mrk_map(const KernelSpec& spec, int bit, Rng& rng) {
  std::vector<double> out(spec.ell());
  mrk_map_into(spec, bit, rng, out);
  return out;
}

double acceptance_probability(const KernelSpec& spec, int bit) {
  if (spec.finite_support()) {
    double a = 0.0;
    for_each_binary_outcome(spec, Side::kUnderQ, [&](std::uint32_t, double prob, double l) {
      if (in_window(spec.window, l)) a += prob * accept_prob(spec, bit, l);
    });
    return a;
  }
  // E_Q[(q/p) e^L 1_W] = (q/p) P*(W); Q*(W) and P*(W) from the exact tails.
  const auto tails = tail_probs(spec, TailMethod::kExact);
  const double ratio = std::exp(-spec.window.c_plus);
  const double floor_term = std::exp(spec.window.c_minus - spec.window.c_plus);
  const double pw = 1.0 - tails.tail_p, qw = 1.0 - tails.tail_q;
  return bit == 0 ? qw - ratio * pw : ratio * pw - floor_term * qw;
}

FiniteLaw exact_output_law(const KernelSpec& spec, int bit) {
  const int ell = spec.ell();
  std::vector<std::pair<std::uint32_t, double>> accepted;
  double a = 0.0;
  for_each_binary_outcome(spec, Side::kUnderQ, [&](std::uint32_t x, double prob, double l) {
    if (!in_window(spec.window, l)) return;
    const double w = prob * accept_prob(spec, bit, l);
    if (w > 0.0) accepted.emplace_back(x, w);
    a += w;
  });
  const double fallback =
      a > 0.0 ? std::exp(static_cast<double>(spec.iterations) * std::log1p(-std::min(a, 1.0))) : 1.0;
  FiniteLaw law;
  if (fallback < 1.0)
    for (const auto& [x, w] : accepted) law.add(unpack(x, ell), (1.0 - fallback) * w / a);
  if (fallback > 0.0) law.add(fallback_outcome(spec), fallback);
  return law;
}

FiniteLaw exact_output_law_mixed(const KernelSpec& spec, double input_prob) {
  return exact_output_law(spec, 0).mixed_with(exact_output_law(spec, 1), input_prob);
}

FiniteLaw target_product_law(const KernelSpec& spec, Side side) {
  FiniteLaw law;
  for_each_binary_outcome(spec, side, [&](std::uint32_t x, double prob, double) {
    if (prob > 0.0) law.add(unpack(x, spec.ell()), prob);
  });
  return law;
}

double delta_value(double p, double q, std::int64_t iterations, double tail_p, double tail_q) {
  const double n = static_cast<double>(iterations);
  const double first = (tail_q + tail_p) / (p - q);
  const double base_q = tail_q + q / p;
  const double base_p = (q / p) * tail_p + (p - 2.0 * p * q + q * q) / (p - p * q);
  return first + std::max(std::pow(base_q, n), std::pow(base_p, n));
}

DeltaBound delta_bound(const KernelSpec& spec, double tail_p, double tail_q) {
  if (!(tail_p >= 0.0 && tail_p <= 1.0 && tail_q >= 0.0 && tail_q <= 1.0))
    throw std::invalid_argument("delta_bound: tail probabilities must lie in [0,1]");
  DeltaBound d;
  d.tail_p = tail_p;
  d.tail_q = tail_q;
  d.delta = delta_value(spec.p_src, spec.q_src, spec.iterations, tail_p, tail_q);
  d.recommended_iterations = recommended_iterations(spec);
  return d;
}

int recommended_iterations(double p, double q, double total_exponent) {
  const double per_iteration = -std::log1p(-q * (p - q) / (2.0 * p));
  const double t = std::min(total_exponent, 40.0);
  return std::max(1, static_cast<int>(std::ceil(t / per_iteration)));
}

int recommended_iterations(const KernelSpec& spec) {
  double t = summed_exponent(spec, Side::kUnderP, spec.window.c_plus);
  if (spec.p_src < 1.0) t = std::min(t, summed_exponent(spec, Side::kUnderQ, spec.window.c_minus));
  return recommended_iterations(spec.p_src, spec.q_src, t);
}

DeltaBound homogeneous_delta(const ComputablePair& pair, int ell, double p_src, double q_src,
                             double tau_plus, double tau_minus) {
  const KernelSpec spec = KernelSpec::homogeneous(p_src, q_src, pair, ell, 1);
  const bool lower_side = p_src < 1.0;
  const double l = ell;
  const double need = std::log(4.0 / (p_src - q_src)) / l;
  if (!(tau_plus >= need))
    throw HypothesisError("kernel: tau+ >= log(4/(p-q))/l fails: " + format_real(tau_plus) +
                          " < " + format_real(need));
  if (lower_side && !(tau_minus >= need))
    throw HypothesisError("kernel: tau- >= log(4/(p-q))/l fails: " + format_real(tau_minus) +
                          " < " + format_real(need));
  spec.check_kl_sandwich();
  const double ep = pair.chernoff_exponent(Side::kUnderP, spec.window.c_plus / l);
  if (!(ep >= tau_plus))
    throw HypothesisError("kernel: E_P(c+/l) >= tau+ fails: " + format_real(ep) + " < " +
                          format_real(tau_plus));
  if (lower_side) {
    const double eq = pair.chernoff_exponent(Side::kUnderQ, spec.window.c_minus / l);
    if (!(eq >= tau_minus))
      throw HypothesisError("kernel: E_Q(c-/l) >= tau- fails: " + format_real(eq) + " < " +
                            format_real(tau_minus));
  }
  DeltaBound d;
  const double up = std::exp(-l * tau_plus);
  const double down = lower_side ? std::exp(-l * tau_minus) : 0.0;
  d.tail_p = std::min(1.0, up + down);
  d.tail_q = d.tail_p;
  d.delta = 3.0 * (up + down) / (p_src - q_src);
  const double t = lower_side ? std::min(tau_plus, tau_minus) : tau_plus;
  d.recommended_iterations = recommended_iterations(p_src, q_src, l * t);
  return d;
}

TailProbs tail_probs(const KernelSpec& spec, TailMethod method, std::int64_t draws,
                     std::uint64_t seed) {
  TailProbs t;
  t.method = method;
  const Window& w = spec.window;
  switch (method) {
    case TailMethod::kExact: {
      if (spec.finite_support()) {
        for (Side side : {Side::kUnderP, Side::kUnderQ}) {
          double out = 0.0;
          for_each_binary_outcome(spec, side, [&](std::uint32_t, double prob, double l) {
            if (!in_window(w, l)) out += prob;
          });
          (side == Side::kUnderP ? t.tail_p : t.tail_q) = out;
        }
      } else {
        double var = 0.0;
        for (const auto& g : spec.targets) var += g.mu() * g.mu();
        const double sd = std::sqrt(var);
        auto outside = [&](double mean) {
          const double lo = std::isfinite(w.c_minus) ? normal_cdf((w.c_minus - mean) / sd) : 0.0;
          return lo + normal_sf((w.c_plus - mean) / sd);
        };
        t.tail_p = outside(var / 2.0);
        t.tail_q = outside(-var / 2.0);
      }
      break;
    }
    case TailMethod::kMonteCarlo: {
      Rng rng(seed);
      PairDrawer draw(rng);
      std::int64_t out_p = 0, out_q = 0;
      for (std::int64_t i = 0; i < draws; ++i) {
        double lp = 0.0, lq = 0.0;
        for (const auto& g : spec.targets) {
          lp += g.llr(draw.alt(g));
          lq += g.llr(draw.null(g));
        }
        out_p += !in_window(w, lp);
        out_q += !in_window(w, lq);
      }
      const double n = static_cast<double>(draws);
      t.tail_p = out_p / n;
      t.tail_q = out_q / n;
      t.stderr_p = std::sqrt(t.tail_p * (1.0 - t.tail_p) / n);
      t.stderr_q = std::sqrt(t.tail_q * (1.0 - t.tail_q) / n);
      break;
    }
    case TailMethod::kChernoff: {
      for (Side side : {Side::kUnderP, Side::kUnderQ}) {
        const double mean = side == Side::kUnderP ? summed_kl(spec, side) : -summed_kl(spec, side);
        const double up = w.c_plus <= mean ? 1.0 : std::exp(-summed_exponent(spec, side, w.c_plus));
        const double down =
            w.c_minus >= mean ? 1.0 : std::exp(-summed_exponent(spec, side, w.c_minus));
        (side == Side::kUnderP ? t.tail_p : t.tail_q) = std::min(1.0, up + down);
      }
      break;
    }
  }
  return t;
}

}  // namespace subred
