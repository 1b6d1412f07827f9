#pragma once

#include <stdexcept>

namespace subred {

/// Raised when a parameter set violates a stated hypothesis; the message
/// names the inequality that failed.
class HypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace subred
