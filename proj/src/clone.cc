#include "subred/clone.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "subred/config.h"
#include "subred/oracle.h"

namespace subred {
namespace {

constexpr double kTol = 1e-12;

double product_pmf(double r, int w, int t) {
  return std::pow(r, w) * std::pow(1.0 - r, t - w);
}

// Picks a Hamming weight with probability C(t, w) * r[w].
int draw_weight(const std::vector<double>& r, int t, Rng& rng) {
  double u = uniform01(rng);
  int last = 0;
  for (int w = 0; w <= t; ++w) {
    if (r[w] <= 0.0) continue;
    last = w;
    u -= std::exp(log_choose(t, w)) * r[w];
    if (u < 0.0) return w;
  }
  return last;
}

}  // namespace

double CloneChannel::max_identity_error() const {
  double err = 0.0, s0 = 0.0, s1 = 0.0;
  for (int w = 0; w <= t; ++w) {
    err = std::max(err, std::abs((1 - p) * r0[w] + p * r1[w] - product_pmf(P, w, t)));
    err = std::max(err, std::abs((1 - q) * r0[w] + q * r1[w] - product_pmf(Q, w, t)));
    const double c = std::exp(log_choose(t, w));
    s0 += c * r0[w];
    s1 += c * r1[w];
  }
  return std::max({err, std::abs(s0 - 1.0), std::abs(s1 - 1.0)});
}

CloneChannel make_channel(int t, double p, double q, double P, double Q) {
  if (t < 1) throw std::invalid_argument("clone: need t >= 1");
  if (!(0.0 < q && q < p && p <= 1.0)) throw std::invalid_argument("clone: need 0 < q < p <= 1");
  if (!(0.0 < Q && Q < P && P <= 1.0)) throw std::invalid_argument("clone: need 0 < Q < P <= 1");
  const double lower_lhs = (1 - p) / (1 - q);
  const double lower_rhs = std::pow((1 - P) / (1 - Q), t);
  if (lower_lhs > lower_rhs * (1 + kTol) + kTol)
    throw HypothesisError("clone: (1-p)/(1-q) <= ((1-P)/(1-Q))^t fails: " + format_real(lower_lhs) +
                          " > " + format_real(lower_rhs));
  const double upper_lhs = std::pow(P / Q, t);
  if (upper_lhs > (p / q) * (1 + kTol))
    throw HypothesisError("clone: (P/Q)^t <= p/q fails: " + format_real(upper_lhs) + " > " +
                          format_real(p / q));
  CloneChannel c{t, p, q, P, Q, std::vector<double>(t + 1), std::vector<double>(t + 1)};
  for (int w = 0; w <= t; ++w) {
    const double fp = product_pmf(P, w, t), fq = product_pmf(Q, w, t);
    const double e = ((1 - q) * fp - (1 - p) * fq) / (p - q);
    const double ne = (p * fq - q * fp) / (p - q);
    if (e < -kTol || ne < -kTol) throw std::logic_error("clone: negative channel probability");
    c.r1[w] = std::max(e, 0.0);
    c.r0[w] = std::max(ne, 0.0);
  }
  if (c.max_identity_error() > kTol) throw std::logic_error("clone: mixing identities fail");
  return c;
}

std::vector<GraphSample> clone_graph(const GraphSample& g, const CloneChannel& channel, Rng& rng) {
  const int t = channel.t;
  std::vector<GraphSample> out(t, GraphSample(g.n()));
  const auto& in = g.bits();
  for (std::size_t e = 0; e < in.size(); ++e) {
    const int w = draw_weight(in[e] ? channel.r1 : channel.r0, t, rng);
    if (w == 0) continue;
    for (int copy : uniform_subset(rng, t, w)) out[copy].bits()[e] = 1;
  }
  for (auto& o : out) o.planted = g.planted;
  return out;
}

}  // namespace subred
