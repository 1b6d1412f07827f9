#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace subred {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// kernel, clone, diagonal, exponents, it-bound.
const std::vector<std::string>& verify_suite_names();

/// Runs one named suite; throws std::invalid_argument for an unknown name.
std::vector<CheckResult> run_verify_suite(const std::string& suite, std::uint64_t seed = 1);

}  // namespace subred
