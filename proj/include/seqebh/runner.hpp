#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqebh/config.hpp"

namespace seqebh {

struct Verdict {
  std::string name;
  std::string status;  // PASS, FAIL or VIOLATION-REPRODUCED
  std::string detail;

  bool ok() const { return status != "FAIL"; }
};

struct RunReport {
  nlohmann::json summary;  // config echo, results, verdicts; deterministic given the config
  std::vector<Verdict> verdicts;
  double wall_seconds = 0.0;

  bool passed() const;
};

/// Executes the experiment: exact enumeration (trials = 0), a single trajectory
/// (trials = 1) or Monte Carlo. When write_files is set, creates cfg.output with
/// summary.json, metadata.json, trajectory.tsv, stream.tsv and (Monte Carlo)
/// trials.tsv.
RunReport run_experiment(const ExperimentConfig& cfg, bool write_files = true);

/// Reads summary.json (and metadata.json when present) from a results directory.
RunReport load_report(const std::filesystem::path& results_dir);

void print_report(std::ostream& out, const RunReport& report);

}  // namespace seqebh
