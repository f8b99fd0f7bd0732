#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace seqebh {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Suites: ebh, adjusters, stepwise, counterexample, or all.
/// Throws InputError for an unknown suite name.
std::vector<CheckResult> verify(std::string_view suite);

const std::vector<std::string>& verify_suites();

}  // namespace seqebh
