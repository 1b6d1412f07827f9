#pragma once

#include <cstdint>
#include <string>

#include "subred/pairs.h"

namespace subred {

enum class RegimeLabel { kImpossibleUcC, kHardUcA, kPolyUcB };

std::string regime_name(RegimeLabel label);

struct RegimeResult {
  RegimeLabel label = RegimeLabel::kHardUcA;
  bool boundary = false;  // inside a slack band between two regions
  double lower_edge = 0.0;  // min(1/k, n^2/k^4)
  double upper_edge = 0.0;  // min(n^2/k^4, 1)
  std::string warning;      // universality-class membership failures, if any
};

/// Default slack log^3 n standing in for sub-polynomial factors.
double default_slack(double n);

/// Classifies d_SKL against a = min(1/k, n^2/k^4) and b = min(n^2/k^4, 1):
/// impossible when skl * s <= a, polynomial when skl >= b * s, hard when
/// a * s <= skl <= b / s. Any other value lies in a slack band and is
/// labeled by the nearer region on a log scale, with the boundary flag set.
RegimeResult regime_classify(double n, double k, double skl, double slack);

/// Same, reading skl from the pair and recording universality-class
/// membership failures in the warning.
RegimeResult regime_classify(double n, double k, const ComputablePair& pair, double slack);

}  // namespace subred
