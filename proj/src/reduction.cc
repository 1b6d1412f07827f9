#include "subred/reduction.h"

#include <algorithm>
#include <cmath>

#include "subred/clone.h"

namespace subred {

double intermediate_density(double p, double q) {
  if (p == 1.0) return std::sqrt(q);
  return 1.0 - std::sqrt((1.0 - p) * (1.0 - q));
}

double ReductionConfig::effective_epsilon() const {
  if (epsilon > 0.0) return epsilon;
  return static_cast<double>(N) / n - p / q_mid();
}

ReductionConfig ReductionConfig::from_config(const KeyValues& kv) {
  ReductionConfig c;
  c.n = static_cast<int>(kv.integer_at("n"));
  c.k = static_cast<int>(kv.integer_at("k"));
  c.N = static_cast<int>(kv.integer_at("N"));
  c.ell = static_cast<int>(kv.integer_or("ell", 1));
  c.p = kv.real_at("p");
  c.q = kv.real_at("q");
  c.epsilon = kv.real_or("epsilon", 0.0);
  c.allow_outside_guarantee = kv.integer_or("allow_outside_guarantee", 0) != 0;
  if (c.N < 1 || c.ell < 1) throw std::invalid_argument("reduction: need N >= 1 and ell >= 1");
  const ComputablePair target = ComputablePair::from_config(kv, "target.");
  c.grid = PairGrid::homogeneous(c.output_dim(), target);
  const auto iters = kv.get("iterations");
  if (iters && *iters != "auto") {
    c.iterations = static_cast<int>(kv.integer_at("iterations"));
  } else {
    if (!(0.0 < c.q && c.q < c.p && c.p <= 1.0))
      throw std::invalid_argument("reduction: need 0 < q < p <= 1");
    c.iterations = recommended_iterations(
        KernelSpec::homogeneous(c.p, c.q_mid(), target, c.ell * c.ell, 1));
  }
  return c;
}

std::vector<std::string> ReductionConfig::failed_hypotheses() const {
  std::vector<std::string> failed;
  const double Q = q_mid();
  const double eps = effective_epsilon();
  if (!(eps > 0.0) || N < (p / Q + eps) * n * (1.0 - 1e-12))
    failed.push_back("N ≥ (p/Q + ε)n fails: N = " + std::to_string(N) + ", (p/Q + ε)n = " +
                     format_real((p / Q + eps) * n) + ", ε = " + format_real(eps));
  if (!(k <= Q * eps * n / 2.0))
    failed.push_back("k ≤ Qεn/2 fails: k = " + std::to_string(k) + ", Qεn/2 = " +
                     format_real(Q * eps * n / 2.0));
  const double ratio = static_cast<double>(k) * k / N;
  const double cap = std::min(Q / (1.0 - Q), (1.0 - Q) / Q);
  if (!(ratio <= cap))
    failed.push_back("k²/N ≤ min{Q/(1−Q), (1−Q)/Q} fails: k²/N = " + format_real(ratio) +
                     ", min = " + format_real(cap));
  return failed;
}

void ReductionConfig::validate() const {
  if (!(0.0 < q && q < p && p <= 1.0)) throw std::invalid_argument("reduction: need 0 < q < p <= 1");
  if (!(1 <= k && k <= n)) throw std::invalid_argument("reduction: need 1 <= k <= n");
  if (N < n) throw std::invalid_argument("reduction: need N >= n");
  if (ell < 1 || iterations < 0)
    throw std::invalid_argument("reduction: need ell >= 1 and iterations >= 0");
  if (grid.dim() != output_dim())
    throw std::invalid_argument("reduction: grid dimension must equal N * ell");
  if (allow_outside_guarantee) return;
  const auto failed = failed_hypotheses();
  if (!failed.empty()) throw HypothesisError("reduction: " + failed.front());
}

KernelSpec block_kernel(const ReductionConfig& cfg, const std::vector<int>& rows,
                        const std::vector<int>& cols) {
  std::vector<ComputablePair> targets;
  targets.reserve(rows.size() * cols.size());
  for (int i : rows)
    for (int j : cols) targets.push_back(cfg.grid.at(i, j));
  return KernelSpec::make(cfg.p, cfg.q_mid(), std::move(targets), cfg.iterations);
}

DeltaBound block_delta(const KernelSpec& spec) {
  const TailProbs tails = tail_probs(spec, TailMethod::kExact);
  return delta_bound(spec, tails.tail_p, tails.tail_q);
}

MatrixSample embed_diagonal(const GraphSample& g1, const GraphSample& g2,
                            const ReductionConfig& cfg, Rng& rng) {
  const int n = cfg.n, N = cfg.N;
  if (g1.n() != n || g2.n() != n) throw std::invalid_argument("embed_diagonal: graphs must have n vertices");
  if (N < n) throw std::invalid_argument("embed_diagonal: need N >= n");
  const double Q = cfg.q_mid();
  const std::int64_t s1 = binomial(rng, n, cfg.p);
  const std::int64_t s2 = binomial(rng, N, Q);
  // Draw order of a partial Fisher-Yates pass is uniform, so minor[v] is
  // the row assigned to vertex v under a uniform bijection.
  const std::vector<int> minor = uniform_subset(rng, N, n);
  std::vector<int> vertex_of(N, -1);
  for (int v = 0; v < n; ++v) vertex_of[minor[v]] = v;

  std::vector<char> diag(N, 0);
  for (int idx : uniform_subset(rng, n, static_cast<int>(s1))) diag[minor[idx]] = 1;
  std::vector<int> outside;
  outside.reserve(N - n);
  for (int i = 0; i < N; ++i)
    if (vertex_of[i] < 0) outside.push_back(i);
  const int t2 = static_cast<int>(std::min<std::int64_t>(std::max<std::int64_t>(s2 - s1, 0), N - n));
  for (int idx : uniform_subset(rng, N - n, t2)) diag[outside[idx]] = 1;

  MatrixSample m(N, SampleSpace::kBit);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      const int vi = vertex_of[i], vj = vertex_of[j];
      bool bit;
      if (i == j) bit = diag[i];
      else if (vi >= 0 && vj >= 0) bit = i < j ? g1.edge(vi, vj) : g2.edge(vi, vj);
      else bit = bernoulli(rng, Q);
      m.at(i, j) = bit ? 1.0 : 0.0;
    }
  }
  if (g1.planted) {
    std::vector<int> rows;
    for (int v : *g1.planted) rows.push_back(minor[v]);
    std::sort(rows.begin(), rows.end());
    m.planted = std::move(rows);
  }
  return m;
}

MatrixSample to_submatrix(const GraphSample& g, const ReductionConfig& cfg, Rng& rng,
                          ReductionTrace* trace) {
  cfg.validate();
  if (g.n() != cfg.n) throw std::invalid_argument("to_submatrix: graph must have n vertices");
  const int N = cfg.N, ell = cfg.ell;
  const double Q = cfg.q_mid();

  const CloneChannel channel = make_channel(2, cfg.p, cfg.q, cfg.p, Q);
  const auto clones = clone_graph(g, channel, rng);
  const MatrixSample m1 = embed_diagonal(clones[0], clones[1], cfg, rng);

  const std::vector<int> perm = random_permutation(rng, N * ell);
  const std::uint64_t block_seed = rng();
  std::vector<std::vector<int>> blocks(N, std::vector<int>(ell));
  for (int s = 0; s < N; ++s)
    for (int a = 0; a < ell; ++a) blocks[s][a] = perm[s * ell + a];

  const bool shared = cfg.grid.is_homogeneous();
  const KernelSpec common = shared ? block_kernel(cfg, blocks[0], blocks[0]) : KernelSpec{};
  double max_delta = 0.0;
  if (trace && shared) max_delta = block_delta(common).delta;

  MatrixSample out(N * ell, space_of(cfg.grid));
  std::vector<double> values(static_cast<std::size_t>(ell) * ell);
  for (int s = 0; s < N; ++s) {
    const auto& rows = blocks[s];
    // One stream per block row keeps the output independent of how rows are scheduled.
    Rng row_rng = make_rng(block_seed, {static_cast<std::uint64_t>(s)});
    for (int t = 0; t < N; ++t) {
      const auto& cols = blocks[t];
      KernelSpec local;
      if (!shared) {
        local = block_kernel(cfg, rows, cols);
        if (trace) max_delta = std::max(max_delta, block_delta(local).delta);
      }
      const KernelSpec& spec = shared ? common : local;
      mrk_map_into(spec, m1.at(s, t) != 0.0 ? 1 : 0, row_rng, values);
      for (int a = 0; a < ell; ++a)
        for (int b = 0; b < ell; ++b) out.at(rows[a], cols[b]) = values[a * ell + b];
    }
  }
  if (m1.planted) {
    std::vector<int> planted;
    for (int s : *m1.planted)
      for (int a = 0; a < ell; ++a) planted.push_back(perm[s * ell + a]);
    std::sort(planted.begin(), planted.end());
    out.planted = std::move(planted);
  }
  if (trace) {
    trace->perm = perm;
    trace->max_block_delta = max_delta;
  }
  return out;
}

TvGuarantee tv_guarantee(int n, int k, int N, double Q, double epsilon, double delta) {
  TvGuarantee g;
  const double Nd = N;
  g.kernel_term = Nd * Nd * delta;
  g.embed_term = 4.0 * std::exp(-Q * epsilon * epsilon * n * n / (32.0 * Nd));
  const double k2 = static_cast<double>(k) * k;
  g.binom_upper = std::sqrt(k2 * (1.0 - Q) / (2.0 * Q * Nd));
  g.binom_lower = std::sqrt(k2 * Q / (2.0 * Nd * (1.0 - Q)));
  g.bound_null = g.kernel_term + g.embed_term;
  g.bound_planted = g.bound_null + g.binom_upper + g.binom_lower;
  return g;
}

TvGuarantee tv_guarantee(const ReductionConfig& cfg, const DeltaBound& delta) {
  return tv_guarantee(cfg.n, cfg.k, cfg.N, cfg.q_mid(), cfg.effective_epsilon(), delta.delta);
}

TvGuarantee tv_guarantee(const ReductionConfig& cfg) {
  if (!cfg.grid.is_homogeneous())
    throw std::invalid_argument("tv_guarantee: pass the block bound for a heteroskedastic grid");
  std::vector<int> idx(cfg.ell);
  for (int a = 0; a < cfg.ell; ++a) idx[a] = a;
  return tv_guarantee(cfg, block_delta(block_kernel(cfg, idx, idx)));
}

}  // namespace subred
