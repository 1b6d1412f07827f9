#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace subred {

using Outcome = std::vector<std::int64_t>;

/// A probability law on finitely many outcomes (integer tuples).
class FiniteLaw {
 public:
  FiniteLaw() = default;

  static FiniteLaw point(Outcome outcome);
  /// Bin(n, p) over the outcomes {x}.
  static FiniteLaw binomial(int n, double p);
  /// Product law of independent components, outcomes concatenated.
  static FiniteLaw product(const FiniteLaw& a, const FiniteLaw& b);

  /// Adds mass to an outcome (accumulating).
  void add(const Outcome& outcome, double prob);

  double prob(const Outcome& outcome) const;
  double total() const;
  std::size_t size() const { return atoms_.size(); }
  const std::map<Outcome, double>& atoms() const { return atoms_; }

  /// Throws std::logic_error unless masses are nonnegative and sum to 1.
  void validate(double tol = 1e-12) const;

  /// (1 - w) * this + w * other.
  FiniteLaw mixed_with(const FiniteLaw& other, double w) const;

  template <class F>
  FiniteLaw pushforward(F&& f) const {
    FiniteLaw out;
    for (const auto& [o, pr] : atoms_) out.add(f(o), pr);
    return out;
  }

 private:
  std::map<Outcome, double> atoms_;
};

/// Half the L1 distance over the union of supports.
double tv_exact(const FiniteLaw& a, const FiniteLaw& b);

}  // namespace subred
