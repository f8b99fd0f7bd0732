#pragma once

// The foreteller construction: stream 2 reveals the next toss of stream 1, so
// the local betting process of stream 1 is not an e-process on the global
// filtration.

#include <array>
#include <cstddef>
#include <vector>

#include "seqebh/scenario.hpp"
#include "seqebh/session.hpp"

namespace seqebh {

/// Stop at n = 1 if stream 2's first toss is -1, otherwise at n = 2. The
/// toss is read from stream 2's unadjusted process value (1.5 or 0.5 after one
/// fair bet), which is known at n = 1.
StoppingRule foreteller_rule();

struct CounterexampleRow {
  int y1 = 0;  // Y^1_1
  int y2 = 0;  // Y^1_2
  double m1 = 0.0;
  double m2 = 0.0;
  std::size_t tau = 0;
  double m_tau = 0.0;
};

struct CounterexampleTable {
  std::array<CounterexampleRow, 4> rows;
  double expectation = 0.0;  // E[M^1_tau] under fair coins
};

/// Exact enumeration of the four equally likely (Y^1_1, Y^1_2) outcomes.
CounterexampleTable enumerate_counterexample();

struct ExactSummary {
  std::size_t outcomes = 0;
  NullIndicator truth;
  std::vector<double> mean_evalue;       // E[reported e-value at tau]
  std::vector<double> mean_base_value;   // E[unadjusted process value at tau]
  std::vector<double> rejection_probability;
  double fdr = 0.0;
  double mean_tau = 0.0;
};

/// Exact expectations for the foreteller scenario by enumerating all
/// 2^(horizon + d) coin sequences. horizon must be at most 20.
ExactSummary enumerate_foreteller(const Foreteller& scenario, std::size_t horizon,
                                  const ProcessFactory& factory, const StoppingRule& rule,
                                  double alpha);

}  // namespace seqebh
