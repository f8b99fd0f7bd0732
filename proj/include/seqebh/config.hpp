#pragma once

// Experiment configuration: a Boost property-tree INFO file (key-value tree,
// ';' comments, braces for nesting). Unknown keys are rejected. The schema is
// documented in docs/config.md.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "seqebh/process.hpp"
#include "seqebh/scenario.hpp"
#include "seqebh/stopping.hpp"

namespace seqebh {

enum class FdrExpectation { control, skip };
enum class EvalueExpectation { skip, valid, violated };

struct ExperimentConfig {
  ScenarioSpec scenario;
  std::vector<ProcessSpec> processes;
  std::vector<std::string> process_descriptions;
  double alpha = 0.1;
  StoppingRule rule;
  std::size_t trials = 0;  // 0 = exact enumeration (foreteller only), 1 = single trajectory
  std::filesystem::path output;
  FdrExpectation expect_fdr = FdrExpectation::control;
  EvalueExpectation expect_null_evalues = EvalueExpectation::skip;
};

/// Throws ConfigError with "<source>:<line>: ..." or "<source>: field '<path>' ..." diagnostics.
ExperimentConfig parse_config(std::istream& in, const std::string& source_name,
                              const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Cross-field checks, re-run after command-line overrides.
void validate_config(const ExperimentConfig& cfg);

}  // namespace seqebh
