#pragma once

#include <optional>
#include <vector>

namespace seqebh {

/// Covariate of one global tick; empty when the scenario has none.
using Covariate = std::optional<double>;

/// One global tick: covariate plus the G-vector of responses.
/// Integer-valued responses (coins, counts) are stored exactly as doubles.
struct Observation {
  Covariate x;
  std::vector<double> y;
};

}  // namespace seqebh
