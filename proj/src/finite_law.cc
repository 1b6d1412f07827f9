#include "subred/finite_law.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "subred/oracle.h"

namespace subred {

FiniteLaw FiniteLaw::point(Outcome outcome) {
  FiniteLaw law;
  law.add(outcome, 1.0);
  return law;
}

FiniteLaw FiniteLaw::binomial(int n, double p) {
  FiniteLaw law;
  const auto pmf = binomial_pmf(n, p);
  for (int x = 0; x <= n; ++x)
    if (pmf[x] > 0.0) law.add({x}, pmf[x]);
  return law;
}

FiniteLaw FiniteLaw::product(const FiniteLaw& a, const FiniteLaw& b) {
  FiniteLaw law;
  for (const auto& [oa, pa] : a.atoms_) {
    for (const auto& [ob, pb] : b.atoms_) {
      Outcome o = oa;
      o.insert(o.end(), ob.begin(), ob.end());
      law.add(o, pa * pb);
    }
  }
  return law;
}

void FiniteLaw::add(const Outcome& outcome, double prob) { atoms_[outcome] += prob; }

double FiniteLaw::prob(const Outcome& outcome) const {
  auto it = atoms_.find(outcome);
  return it == atoms_.end() ? 0.0 : it->second;
}

double FiniteLaw::total() const {
  double s = 0.0;
  for (const auto& [o, pr] : atoms_) s += pr;
  return s;
}

void FiniteLaw::validate(double tol) const {
  for (const auto& [o, pr] : atoms_)
    if (!(pr >= 0.0)) throw std::logic_error("finite law: negative or NaN mass");
  const double t = total();
  if (std::abs(t - 1.0) > tol)
    throw std::logic_error("finite law: total mass " + std::to_string(t) + " differs from 1");
}

FiniteLaw FiniteLaw::mixed_with(const FiniteLaw& other, double w) const {
  FiniteLaw out;
  for (const auto& [o, pr] : atoms_) out.add(o, (1.0 - w) * pr);
  for (const auto& [o, pr] : other.atoms_) out.add(o, w * pr);
  return out;
}

double tv_exact(const FiniteLaw& a, const FiniteLaw& b) {
  double s = 0.0;
  for (const auto& [o, pa] : a.atoms()) s += std::abs(pa - b.prob(o));
  for (const auto& [o, pb] : b.atoms())
    if (a.atoms().count(o) == 0) s += std::abs(pb);
  return 0.5 * s;
}

}  // namespace subred
