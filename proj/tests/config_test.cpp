#include "seqebh/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "seqebh/errors.hpp"
#include "seqebh/runner.hpp"

namespace {

std::filesystem::path source_dir() {
  const char* dir = std::getenv("SEQEBH_SOURCE_DIR");
  return dir ? std::filesystem::path(dir) : std::filesystem::current_path();
}

seqebh::ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return seqebh::parse_config(in, "test.cfg", ".");
}

const std::string kMinimal = R"(
seed 3
alpha 0.1
trials 1
horizon 10
scenario
{
  kind correlated_coins
  theta "0.5 0.9"
}
processes
{
  default
  {
    family betting
  }
  h2
  {
    family gaussian
    variance 1
    eta 0.5
    adjuster power
    k 0.5
  }
}
rule
{
  kind threshold
  hypothesis 2
  level 4
}
)";

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const seqebh::ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  if (pos == std::string::npos) return text;
  return text.replace(pos, from.size(), to);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TEST(ParseConfig, MinimalConfig) {
  const auto cfg = parse(kMinimal);
  EXPECT_EQ(cfg.scenario.seed, 3u);
  EXPECT_EQ(cfg.trials, 1u);
  ASSERT_EQ(cfg.processes.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<seqebh::BettingSpec>(cfg.processes[0].factor));
  EXPECT_TRUE(std::holds_alternative<seqebh::GaussianSpec>(cfg.processes[1].factor));
  EXPECT_TRUE(cfg.processes[1].adjuster.has_value());
  const auto& rule = std::get<seqebh::ThresholdRule>(cfg.rule.kind);
  EXPECT_EQ(rule.hypothesis, 1u);
  EXPECT_EQ(rule.level, 4.0);
}

TEST(ParseConfig, Diagnostics) {
  EXPECT_NE(error_of(replace(kMinimal, "alpha 0.1\n", "")).find("field 'alpha': missing"), std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "alpha 0.1", "alpha 0.1\nbogus 1")).find("field 'bogus': unknown key"),
            std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "alpha 0.1", "alpha 1.5")).find("alpha"), std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "eta 0.5", "eta fast")).find("processes.h2.eta"), std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "h2", "h3")).find("processes.h3"), std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "k 0.5", "k 1.5")).find("processes.h2.adjuster"), std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "trials 1", "trials 50")).find("trials"), std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "trials 1", "trials 0")).find("trials"), std::string::npos);
  EXPECT_NE(error_of(replace(kMinimal, "hypothesis 2", "hypothesis 0")).find("rule.hypothesis"), std::string::npos);
  // Syntax errors carry a line number.
  EXPECT_NE(error_of("seed 1\nscenario\n{\n").find("test.cfg:"), std::string::npos);
}

TEST(ParseConfig, BundledConfigsLoad) {
  for (const char* name : {"counterexample.cfg", "foreteller_lifted.cfg", "allnull_coins.cfg", "mvn_mixed.cfg",
                           "nb_glm.cfg"}) {
    EXPECT_NO_THROW(seqebh::load_config(source_dir() / "configs" / name)) << name;
  }
  EXPECT_THROW(seqebh::load_config(source_dir() / "tests" / "data" / "missing_alpha.cfg"), seqebh::ConfigError);
}

TEST(RunExperiment, CounterexampleReproducesViolation) {
  const auto cfg = seqebh::load_config(source_dir() / "configs" / "counterexample.cfg");
  const auto report = seqebh::run_experiment(cfg, false);
  EXPECT_EQ(report.summary["mode"], "exact");
  EXPECT_DOUBLE_EQ(report.summary["results"]["expectation"].get<double>(), 1.25);
  ASSERT_EQ(report.verdicts.size(), 1u);
  EXPECT_EQ(report.verdicts[0].status, "VIOLATION-REPRODUCED");
  EXPECT_TRUE(report.passed());
}

TEST(RunExperiment, LiftedForetellerIsValid) {
  const auto cfg = seqebh::load_config(source_dir() / "configs" / "foreteller_lifted.cfg");
  const auto report = seqebh::run_experiment(cfg, false);
  for (const auto& v : report.verdicts) EXPECT_EQ(v.status, "PASS") << v.name << ": " << v.detail;
}

TEST(RunExperiment, AllNullCoinsPass) {
  const auto cfg = seqebh::load_config(source_dir() / "configs" / "allnull_coins.cfg");
  const auto report = seqebh::run_experiment(cfg, false);
  ASSERT_EQ(report.verdicts.size(), 2u);
  for (const auto& v : report.verdicts) EXPECT_EQ(v.status, "PASS") << v.name << ": " << v.detail;
}

TEST(RunExperiment, RerunsAreByteIdentical) {
  auto cfg = seqebh::load_config(source_dir() / "configs" / "mvn_mixed.cfg");
  cfg.trials = 200;
  const auto base = std::filesystem::temp_directory_path() / "seqebh_rerun";
  std::filesystem::remove_all(base);
  cfg.output = base / "a";
  seqebh::run_experiment(cfg);
  cfg.output = base / "b";
  seqebh::run_experiment(cfg);
  for (const char* file : {"summary.json", "trajectory.tsv", "stream.tsv", "trials.tsv"}) {
    const auto a = slurp(base / "a" / file);
    EXPECT_FALSE(a.empty()) << file;
    EXPECT_EQ(a, slurp(base / "b" / file)) << file;
  }
  EXPECT_TRUE(std::filesystem::exists(base / "a" / "metadata.json"));
  const auto loaded = seqebh::load_report(base / "a");
  EXPECT_EQ(loaded.summary, seqebh::run_experiment(cfg, false).summary);
  std::filesystem::remove_all(base);
}

TEST(RunExperiment, SingleTrajectoryMode) {
  const auto report = seqebh::run_experiment(parse(kMinimal), false);
  EXPECT_EQ(report.summary["mode"], "single");
  EXPECT_TRUE(report.summary["results"].contains("tau"));
}

}  // namespace
