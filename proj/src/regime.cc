#include "subred/regime.h"

#include <algorithm>
#include <cmath>

namespace subred {

std::string regime_name(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::kImpossibleUcC: return "impossible";
    case RegimeLabel::kHardUcA: return "hard";
    case RegimeLabel::kPolyUcB: return "poly";
  }
  return "unknown";
}

double default_slack(double n) { return std::pow(std::log(n), 3.0); }

RegimeResult regime_classify(double n, double k, double skl, double slack) {
  if (!(n >= 2 && k >= 1 && k <= n && slack >= 1.0 && skl >= 0.0))
    throw std::invalid_argument("regime: need n >= 2, 1 <= k <= n, slack >= 1, skl >= 0");
  RegimeResult r;
  const double ratio = n * n / std::pow(k, 4.0);
  r.lower_edge = std::min(1.0 / k, ratio);
  r.upper_edge = std::min(ratio, 1.0);
  const double a = r.lower_edge, b = r.upper_edge;
  if (skl * slack <= a) {
    r.label = RegimeLabel::kImpossibleUcC;
  } else if (skl >= b * slack) {
    r.label = RegimeLabel::kPolyUcB;
  } else if (a * slack <= skl && skl <= b / slack) {
    r.label = RegimeLabel::kHardUcA;
  } else {
    r.boundary = true;
    const double ls = std::log(skl);
    const double to_impossible = ls - std::log(a / slack);
    const double to_poly = std::log(b * slack) - ls;
    const bool hard_exists = a * slack <= b / slack;
    const double to_hard = hard_exists ? std::max({std::log(a * slack) - ls, ls - std::log(b / slack), 0.0})
                                       : INFINITY;
    if (to_hard <= to_impossible && to_hard <= to_poly) r.label = RegimeLabel::kHardUcA;
    else if (to_impossible <= to_poly) r.label = RegimeLabel::kImpossibleUcC;
    else r.label = RegimeLabel::kPolyUcB;
  }
  return r;
}

RegimeResult regime_classify(double n, double k, const ComputablePair& pair, double slack) {
  RegimeResult r = regime_classify(n, k, pair.skl(), slack);
  const double eps = 0.5;
  for (auto [cls, name] : {std::pair{UcClass::kA, "UC-A"}, std::pair{UcClass::kB, "UC-B"},
                           std::pair{UcClass::kC, "UC-C"}}) {
    if (!uc_membership(pair, cls, n, eps).satisfied) {
      if (!r.warning.empty()) r.warning += ' ';
      r.warning += std::string(name) + " not met";
    }
  }
  return r;
}

}  // namespace subred
