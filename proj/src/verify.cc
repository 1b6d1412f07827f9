#include "subred/verify.h"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "subred/brute_force.h"
#include "subred/clone.h"
#include "subred/config.h"
#include "subred/kernel.h"
#include "subred/oracle.h"
#include "subred/pairs.h"
#include "subred/rng.h"

namespace subred {
namespace {

CheckResult check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

std::string kv(const std::string& key, double value) { return key + "=" + format_real(value); }

FiniteLaw bern(double p) {
  FiniteLaw law;
  law.add({0}, 1 - p);
  law.add({1}, p);
  return law;
}

std::vector<CheckResult> kernel_suite() {
  std::vector<CheckResult> out;
  {
    const double p = 0.6, q = 0.3;
    const auto spec = KernelSpec::homogeneous(p, q, ComputablePair::bernoulli(p, q), 1, 200);
    const double a1 = acceptance_probability(spec, 1);
    const double want = q * (p - q) / (p * (1 - q));
    out.push_back(check("identity acceptance q(p-q)/(p(1-q))", std::abs(a1 - want) < 1e-14,
                        kv("got", a1) + " " + kv("want", want)));
    const double tv = tv_exact(exact_output_law_mixed(spec, p), bern(p));
    out.push_back(check("identity kernel reproduces Bern(p)", tv < 1e-12, kv("tv", tv)));
  }
  double worst = -1.0;
  std::string where;
  for (double ps : {1.0, 0.7}) {
    for (double qs : {0.2, 0.5}) {
      if (!(qs < ps)) continue;
      for (int ell = 1; ell <= 3; ++ell) {
        const auto target = ComputablePair::bernoulli(0.55, 0.45);
        KernelSpec spec = KernelSpec::homogeneous(ps, qs, target, ell, 1);
        spec.iterations = recommended_iterations(spec);
        const auto tails = tail_probs(spec);
        const double delta = delta_bound(spec, tails.tail_p, tails.tail_q).delta;
        const double tv1 = tv_exact(exact_output_law_mixed(spec, ps), target_product_law(spec, Side::kUnderP));
        const double tv0 = tv_exact(exact_output_law_mixed(spec, qs), target_product_law(spec, Side::kUnderQ));
        const double slack = delta - std::max(tv0, tv1);
        if (worst < 0 || slack < worst) {
          worst = slack;
          where = kv("p", ps) + " " + kv("q", qs) + " ell=" + std::to_string(ell) + " " +
                  kv("tv", std::max(tv0, tv1)) + " " + kv("delta", delta);
        }
      }
    }
  }
  out.push_back(check("mixed-input output laws within delta", worst >= 0.0, "tightest: " + where));
  const double d = delta_value(0.5, 0.25, 100, 0.01, 0.01);
  const double want = 0.08 + std::max(std::pow(0.51, 100), std::pow(0.005 + 0.3125 / 0.375, 100));
  out.push_back(check("delta closed form p=0.5 q=0.25 tails=0.01 N=100", std::abs(d - want) < 1e-12,
                      kv("delta", d)));
  return out;
}

std::vector<CheckResult> clone_suite() {
  std::vector<CheckResult> out;
  const auto c = make_channel(2, 0.8, 0.2, 0.8, 0.6);
  out.push_back(check("t=2 p=0.8 q=0.2 P=0.8 Q=0.6 identities", c.max_identity_error() <= 1e-12,
                      kv("max_residual", c.max_identity_error())));
  const auto clique = make_channel(2, 1.0, 0.25, 1.0, 0.5);
  out.push_back(check("clique input keeps edges", clique.r1[2] == 1.0,
                      kv("r1(11)", clique.r1[2])));
  const auto id = make_channel(1, 0.7, 0.4, 0.7, 0.4);
  out.push_back(check("t=1 identity channel", std::abs(id.r1[1] - 1.0) < 1e-12 && std::abs(id.r0[1]) < 1e-12,
                      kv("r1(1)", id.r1[1]) + " " + kv("r0(1)", id.r0[1])));
  bool threw = false;
  try {
    make_channel(2, 0.8, 0.2, 0.9, 0.3);
  } catch (const HypothesisError&) {
    threw = true;
  }
  out.push_back(check("infeasible channel rejected", threw, ""));
  return out;
}

std::vector<CheckResult> diagonal_suite() {
  std::vector<CheckResult> out;
  struct Tuple { int n, k, N; double P, Q; };
  for (Tuple t : {Tuple{6, 1, 20, 0.6, 0.5}, Tuple{10, 2, 40, 0.7, 0.5}, Tuple{12, 1, 30, 0.8, 0.6}}) {
    const auto laws = diag_support_law(t.n, t.k, t.N, t.P, t.Q);
    const auto b = diag_bounds(t.n, t.k, t.N, t.P, t.Q);
    const double tv_null = tv_exact(laws.total, diag_null_reference(t.N, t.Q));
    const double tv_pl = tv_exact(laws.planted_pair, diag_planted_reference(t.k, t.N, t.P, t.Q));
    std::ostringstream name;
    name << "n=" << t.n << " k=" << t.k << " N=" << t.N << " P=" << t.P << " Q=" << t.Q;
    const bool valid = diag_hypotheses_hold(t.n, t.k, t.N, t.P, t.Q, b.epsilon);
    out.push_back(check(name.str() + " hypotheses", valid, kv("eps", b.epsilon)));
    out.push_back(check(name.str() + " null support", tv_null <= b.null(),
                        kv("tv", tv_null) + " " + kv("bound", b.null())));
    out.push_back(check(name.str() + " planted support", tv_pl <= b.planted(),
                        kv("tv", tv_pl) + " " + kv("bound", b.planted())));
  }
  return out;
}

std::vector<CheckResult> exponents_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);
  double closed_err = 0.0, legendre_err = 0.0, min_err = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double mu = 0.2 + 2.8 * uniform01(rng);
    const auto g = ComputablePair::gaussian(mu);
    const double theta = -g.kl_qp() + (g.kl_pq() + g.kl_qp()) * uniform01(rng);
    const double closed = std::pow(mu - 2.0 * theta / mu, 2.0) / 8.0;
    closed_err = std::max(closed_err, std::abs(g.chernoff_exponent_numeric(Side::kUnderP, theta) - closed));
    const double p = 0.3 + 0.6 * uniform01(rng), q = p * (0.1 + 0.8 * uniform01(rng));
    for (const auto& pair : {g, ComputablePair::bernoulli(p, q)}) {
      const double tau = -pair.kl_qp() + (pair.skl()) * uniform01(rng);
      legendre_err = std::max(legendre_err, std::abs(pair.chernoff_exponent_numeric(Side::kUnderP, tau) + tau -
                                                     pair.chernoff_exponent_numeric(Side::kUnderQ, tau)));
      min_err = std::max({min_err, std::abs(pair.chernoff_exponent_numeric(Side::kUnderP, pair.kl_pq())),
                          std::abs(pair.chernoff_exponent_numeric(Side::kUnderQ, -pair.kl_qp()))});
    }
  }
  out.push_back(check("numeric E_P matches Gaussian closed form", closed_err <= 1e-6, kv("max_err", closed_err)));
  out.push_back(check("E_P(tau) + tau = E_Q(tau)", legendre_err <= 1e-8, kv("max_err", legendre_err)));
  out.push_back(check("exponents vanish at the divergences", min_err <= 1e-8, kv("max_err", min_err)));
  return out;
}

std::vector<CheckResult> it_bound_suite() {
  std::vector<CheckResult> out;
  double err = 0.0;
  for (auto [p, q] : {std::pair{0.6, 0.3}, std::pair{0.9, 0.5}, std::pair{0.3, 0.1}}) {
    const double c = (p - q) * (p - q) / (q * (1 - q));
    err = std::max(err, std::abs(chi2_mixture_exact(3, 2, c) - chi2_matrix_mixture_brute(3, 2, p, q)));
  }
  out.push_back(check("chi2 mixture equals brute force n=3 k=2", err <= 1e-10, kv("max_err", err)));
  bool ok = true;
  for (double p : {0.3, 0.5, 0.7})
    for (double q : {0.2, 0.4, 0.6}) {
      const double c = (p - q) * (p - q) / (q * (1 - q));
      if (4 * c > 8) continue;
      ok = ok && chi2_vector_mixture_brute(8, 2, p, q) <= hiding_bound(8, 2, c) + 1e-12;
    }
  out.push_back(check("hiding bound m=8 k=2", ok, ""));
  const auto r = it_impossibility_margin(100, 10, 0.0);
  out.push_back(check("zero signal gives zero TV bound", r.satisfied && r.tv_bound == 0.0, kv("tv_bound", r.tv_bound)));
  return out;
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"kernel", "clone", "diagonal", "exponents", "it-bound"};
  return names;
}

std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed) {
  if (suite == "kernel") return kernel_suite();
  if (suite == "clone") return clone_suite();
  if (suite == "diagonal") return diagonal_suite();
  if (suite == "exponents") return exponents_suite(seed);
  if (suite == "it-bound") return it_bound_suite();
  throw std::invalid_argument("unknown suite: " + suite);
}

}  // namespace subred
