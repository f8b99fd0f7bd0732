#pragma once

// Declarative global stopping rules. A rule is evaluated after step n and may
// read the next covariate (look-ahead), never the next responses: a custom
// predicate only receives a RuleContext.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "seqebh/ebh.hpp"
#include "seqebh/observation.hpp"

namespace seqebh {

struct RuleContext {
  std::size_t n = 0;
  std::span<const double> evalues;      // values reported to e-BH at n
  std::span<const double> base_values;  // underlying process values before adjusters
  const RejectionSet* rejections = nullptr;
  Covariate next_covariate;
};

struct FixedHorizon {
  std::size_t steps = 1;
};

/// Stop once hypothesis `hypothesis` (0-based) has e-value >= level.
struct ThresholdRule {
  std::size_t hypothesis = 0;
  double level = 1.0;
};

struct RejectionCount {
  std::size_t k = 1;
};

struct StoppingRule;

struct FirstOf {
  std::vector<StoppingRule> rules;
};

struct CustomRule {
  std::string name;
  std::function<bool(const RuleContext&)> predicate;
};

struct StoppingRule {
  std::variant<FixedHorizon, ThresholdRule, RejectionCount, FirstOf, CustomRule> kind;
};

/// Throws RuleError if a custom predicate raises, InputError if a threshold
/// rule names a hypothesis that does not exist.
bool evaluate_rule(const StoppingRule& rule, const RuleContext& context);

std::string describe(const StoppingRule& rule);

}  // namespace seqebh
