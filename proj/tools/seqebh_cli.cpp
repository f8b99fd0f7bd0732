// seqebh: run stopped e-BH experiments, verification suites, and reports.
//
//   seqebh run <config> [--trials N] [--seed S] [--alpha A]
//   seqebh verify <ebh|adjusters|stepwise|counterexample|all>
//   seqebh report <results-dir>
//
// Exit status: 0 when every verdict passes, 1 when a verdict fails,
// 2 on configuration or usage errors.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seqebh/config.hpp"
#include "seqebh/errors.hpp"
#include "seqebh/runner.hpp"
#include "seqebh/verify.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int run_command(const std::string& config_path, std::optional<std::size_t> trials,
                std::optional<std::uint64_t> seed, std::optional<double> alpha) {
  auto cfg = seqebh::load_config(config_path);
  if (trials) cfg.trials = *trials;
  if (seed) cfg.scenario.seed = *seed;
  if (alpha) cfg.alpha = *alpha;
  seqebh::validate_config(cfg);
  const auto report = seqebh::run_experiment(cfg);
  seqebh::print_report(std::cout, report);
  std::cout << "results written to " << cfg.output.string() << '\n';
  return report.passed() ? 0 : kExitFail;
}

int verify_command(const std::string& suite) {
  const auto checks = seqebh::verify(suite);
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.suite << ": " << c.name;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ")";
    std::cout << '\n';
    ok = ok && c.passed;
  }
  std::cout << checks.size() << " checks, " << (ok ? "all passed" : "FAILURES") << '\n';
  return ok ? 0 : kExitFail;
}

int report_command(const std::string& dir) {
  const auto report = seqebh::load_report(dir);
  seqebh::print_report(std::cout, report);
  return report.passed() ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential multiple testing with stopped e-BH"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Experiment config (INFO key-value tree)")->required();
  run->add_option("--trials", trials, "Override the number of trials (0 = exact enumeration)");
  run->add_option("--seed", seed, "Override the top-level seed");
  run->add_option("--alpha", alpha, "Override the FDR level");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run built-in invariant checks");
  verify->add_option("suite", suite, "ebh | adjusters | stepwise | counterexample | all")
      ->required()
      ->check(CLI::IsMember({"ebh", "adjusters", "stepwise", "counterexample", "all"}));

  std::string results_dir;
  auto* report = app.add_subcommand("report", "Summarise a results directory");
  report->add_option("results-dir", results_dir, "Directory written by `run`")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*run) return run_command(config_path, trials, seed, alpha);
    if (*verify) return verify_command(suite);
    if (*report) return report_command(results_dir);
  } catch (const seqebh::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const seqebh::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
