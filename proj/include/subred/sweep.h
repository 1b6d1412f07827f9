#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "subred/pairs.h"

namespace subred {

/// D_bc: N(mu,1) vs N(0,1) with mu^2 = n^-alpha.
/// D_sp: Bern(c q) vs Bern(q) with q solved so that skl = n^-alpha.
/// D_gp: Bern(q + c n^-gamma) vs Bern(q) with q = n^-alpha, gamma > alpha.
enum class SweepFamily { kBc, kSp, kGp };

SweepFamily parse_sweep_family(const std::string& name);
std::string sweep_family_name(SweepFamily f);

struct SweepSpec {
  SweepFamily family = SweepFamily::kBc;
  std::vector<double> alphas;
  std::vector<double> betas;
  int n = 100;
  std::int64_t trials = 100;
  std::uint64_t seed = 1;
  double slack = 0.0;         // <= 0 selects log^3 n
  double sp_constant = 2.0;
  double gp_constant = 1.0;
  double gamma = 0.0;         // D_gp only
  bool asymmetric = false;    // plant independent row and column supports
  int threads = 1;
  /// Seed used as-is for every cell instead of deriving one per cell; lets
  /// a single CSV row be reproduced in isolation.
  std::optional<std::uint64_t> cell_seed;

  void validate() const;
};

/// Pair of the family at exponent alpha; throws std::domain_error when no
/// valid pair exists at this n.
ComputablePair sweep_pair(const SweepSpec& spec, double alpha);

/// Bern(c q) vs Bern(q) with skl equal to target.
ComputablePair sparse_pair_with_skl(double c, double target_skl);

std::string sweep_csv_header();

/// Writes the header and one row per cell and detector; rows are ordered
/// by (alpha index, beta index, detector) whatever the thread count.
void run_sweep(const SweepSpec& spec, std::ostream& out);

}  // namespace subred
