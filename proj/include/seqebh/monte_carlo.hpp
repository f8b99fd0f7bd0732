#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "seqebh/scenario.hpp"
#include "seqebh/session.hpp"

namespace seqebh {

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t tau = 0;
  bool rule_fired = false;
  double fdp = 0.0;
  RejectionSet rejections;
  EValueVector evalues;
};

struct MonteCarloSummary {
  std::size_t trials = 0;
  NullIndicator truth;
  double mean_fdr = 0.0;
  double std_error = 0.0;
  double mean_tau = 0.0;
  std::vector<double> rejection_frequency;
  /// Mean stopped e-value and its standard error; empty for non-null hypotheses.
  std::vector<std::optional<double>> mean_null_evalue;
  std::vector<std::optional<double>> null_evalue_std_error;
  std::vector<TrialRecord> records;  // filled only when requested
};

/// Runs `trials` (>= 100) independent replicates. Replicate t draws its stream
/// with seed derive_seed(scenario.seed, t), builds fresh processes from the
/// factory, and stops by `rule` or at the scenario horizon.
MonteCarloSummary mc_fdr(const ScenarioSpec& scenario, const ProcessFactory& factory,
                         const StoppingRule& rule, std::size_t trials, double alpha,
                         bool keep_records = false);

/// Header "trial\tseed\ttau\trule_fired\tfdp\trejected\tE_1..E_G".
void write_trials(std::ostream& out, const std::vector<TrialRecord>& records);

}  // namespace seqebh
