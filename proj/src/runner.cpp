#include "seqebh/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "seqebh/counterexample.hpp"
#include "seqebh/errors.hpp"
#include "seqebh/monte_carlo.hpp"
#include "seqebh/rng.hpp"

namespace seqebh {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json scenario_echo(const ScenarioKind& kind) {
  return std::visit(overloaded{
                        [](const CorrelatedCoins& s) {
                          return json{{"kind", "correlated_coins"}, {"theta", s.theta}, {"rho", s.rho}};
                        },
                        [](const MvnScenario& s) {
                          return json{{"kind", "mvn"}, {"mean", s.mean}, {"covariance", s.covariance}};
                        },
                        [](const NbGlmScenario& s) {
                          json arms = json::array();
                          for (const auto& a : s.arms) {
                            arms.push_back({{"beta", a.beta}, {"gamma", a.gamma}, {"dispersion", a.dispersion}});
                          }
                          return json{{"kind", "nb_glm"},
                                      {"arms", arms},
                                      {"rho", s.rho},
                                      {"covariate", s.policy == CovariatePolicy::bernoulli ? "bernoulli"
                                                                                            : "alternating"},
                                      {"group_probability", s.group_probability}};
                        },
                        [](const Foreteller& s) {
                          return json{{"kind", "foreteller"}, {"d", s.d}, {"theta", s.theta}};
                        },
                    },
                    kind);
}

std::string expect_name(FdrExpectation e) { return e == FdrExpectation::control ? "control" : "skip"; }

std::string expect_name(EvalueExpectation e) {
  switch (e) {
    case EvalueExpectation::valid: return "valid";
    case EvalueExpectation::violated: return "violated";
    case EvalueExpectation::skip: return "skip";
  }
  return "skip";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

json optional_array(const std::vector<std::optional<double>>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(v ? json(*v) : json(nullptr));
  return out;
}

void add_evalue_verdict(const ExperimentConfig& cfg, const NullIndicator& truth,
                        const std::vector<double>& means, const std::vector<double>& slack,
                        std::vector<Verdict>& verdicts) {
  if (cfg.expect_null_evalues == EvalueExpectation::skip) return;
  bool any_null = false;
  bool all_valid = true;
  std::ostringstream detail;
  for (std::size_t g = 0; g < truth.size(); ++g) {
    if (!truth[g]) continue;
    any_null = true;
    const bool valid = means[g] <= 1.0 + slack[g];
    all_valid = all_valid && valid;
    detail << "h" << g + 1 << " mean stopped e-value " << fmt(means[g]) << " (bound "
           << fmt(1.0 + slack[g]) << "); ";
  }
  if (!any_null) {
    verdicts.push_back({"null_evalues", "FAIL", "no true-null hypotheses in the scenario"});
    return;
  }
  std::string status;
  if (cfg.expect_null_evalues == EvalueExpectation::valid) {
    status = all_valid ? "PASS" : "FAIL";
  } else {
    status = all_valid ? "FAIL" : "VIOLATION-REPRODUCED";
  }
  verdicts.push_back({"null_evalues", status, detail.str()});
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

bool RunReport::passed() const {
  for (const auto& v : verdicts) {
    if (!v.ok()) return false;
  }
  return true;
}

RunReport run_experiment(const ExperimentConfig& cfg, bool write_files) {
  validate_config(cfg);
  const auto start = std::chrono::steady_clock::now();
  const ProcessFactory factory = make_factory(cfg.processes);

  RunReport report;
  json& s = report.summary;
  s["config"] = {{"seed", cfg.scenario.seed},
                 {"alpha", cfg.alpha},
                 {"trials", cfg.trials},
                 {"horizon", cfg.scenario.horizon},
                 {"scenario", scenario_echo(cfg.scenario.kind)},
                 {"processes", cfg.process_descriptions},
                 {"rule", describe(cfg.rule)},
                 {"expect", {{"fdr", expect_name(cfg.expect_fdr)},
                             {"null_evalues", expect_name(cfg.expect_null_evalues)}}}};
  s["generator"] = kGeneratorName;

  const NullIndicator truth = null_indicator(cfg.scenario.kind);
  std::vector<Verdict>& verdicts = report.verdicts;
  std::string trajectory_text, stream_text, trials_text;

  // The first replicate's stream doubles as the exported example trajectory.
  const std::uint64_t first_seed = derive_seed(cfg.scenario.seed, 0);
  {
    const auto stream = generate(cfg.scenario.kind, cfg.scenario.horizon, first_seed);
    Session session(factory(), cfg.alpha);
    const auto result = run(session, stream, cfg.rule);
    std::ostringstream traj, str;
    write_trajectory(traj, result.trajectory);
    write_stream(str, stream);
    trajectory_text = traj.str();
    stream_text = str.str();
    if (cfg.trials == 1) {
      s["mode"] = "single";
      s["results"] = {{"tau", result.tau},
                      {"rule_fired", result.rule_fired},
                      {"evalues", result.evalues},
                      {"rejected", result.rejections.bitmask()},
                      {"fdp", fdp(result.rejections, truth)}};
    }
  }

  if (cfg.trials == 0) {
    const auto& fore = std::get<Foreteller>(cfg.scenario.kind);
    const auto exact = enumerate_foreteller(fore, cfg.scenario.horizon, factory, cfg.rule, cfg.alpha);
    s["mode"] = "exact";
    s["results"] = {{"outcomes", exact.outcomes},
                    {"expectation", exact.mean_evalue[0]},
                    {"mean_stopped_evalue", exact.mean_evalue},
                    {"mean_stopped_base_value", exact.mean_base_value},
                    {"rejection_probability", exact.rejection_probability},
                    {"fdr", exact.fdr},
                    {"mean_tau", exact.mean_tau}};
    if (cfg.expect_fdr == FdrExpectation::control) {
      verdicts.push_back({"fdr_control", exact.fdr <= cfg.alpha ? "PASS" : "FAIL",
                          "exact FDR " + fmt(exact.fdr) + " vs alpha " + fmt(cfg.alpha)});
    }
    add_evalue_verdict(cfg, truth, exact.mean_evalue, std::vector<double>(2, 1e-12), verdicts);
  } else if (cfg.trials >= 100) {
    const auto mc = mc_fdr(cfg.scenario, factory, cfg.rule, cfg.trials, cfg.alpha, true);
    s["mode"] = "monte_carlo";
    s["results"] = {{"trials", mc.trials},
                    {"mean_fdr", mc.mean_fdr},
                    {"std_error", mc.std_error},
                    {"mean_tau", mc.mean_tau},
                    {"rejection_frequency", mc.rejection_frequency},
                    {"truth_null", mc.truth},
                    {"mean_null_evalue", optional_array(mc.mean_null_evalue)},
                    {"null_evalue_std_error", optional_array(mc.null_evalue_std_error)}};
    if (cfg.expect_fdr == FdrExpectation::control) {
      const double bound = cfg.alpha + 3.0 * mc.std_error;
      verdicts.push_back({"fdr_control", mc.mean_fdr <= bound ? "PASS" : "FAIL",
                          "mean FDR " + fmt(mc.mean_fdr) + " vs alpha + 3 SE = " + fmt(bound)});
    }
    std::vector<double> means(truth.size(), 0.0), slack(truth.size(), 0.0);
    for (std::size_t g = 0; g < truth.size(); ++g) {
      if (mc.mean_null_evalue[g]) {
        means[g] = *mc.mean_null_evalue[g];
        slack[g] = 3.0 * *mc.null_evalue_std_error[g];
      }
    }
    add_evalue_verdict(cfg, truth, means, slack, verdicts);
    std::ostringstream tr;
    write_trials(tr, mc.records);
    trials_text = tr.str();
  }

  json jv = json::array();
  for (const auto& v : verdicts) jv.push_back({{"name", v.name}, {"status", v.status}, {"detail", v.detail}});
  s["verdicts"] = jv;
  s["passed"] = report.passed();

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (write_files) {
    std::filesystem::create_directories(cfg.output);
    write_text(cfg.output / "summary.json", s.dump(2) + "\n");
    json meta = {{"seed", cfg.scenario.seed},
                 {"generator", kGeneratorName},
                 {"wall_seconds", report.wall_seconds}};
    write_text(cfg.output / "metadata.json", meta.dump(2) + "\n");
    write_text(cfg.output / "trajectory.tsv", trajectory_text);
    write_text(cfg.output / "stream.tsv", stream_text);
    if (!trials_text.empty()) write_text(cfg.output / "trials.tsv", trials_text);
  }
  return report;
}

RunReport load_report(const std::filesystem::path& results_dir) {
  std::ifstream in(results_dir / "summary.json");
  if (!in) throw InputError("no summary.json in " + results_dir.string());
  RunReport report;
  try {
    in >> report.summary;
    for (const auto& v : report.summary.at("verdicts")) {
      report.verdicts.push_back(
          {v.at("name").get<std::string>(), v.at("status").get<std::string>(), v.at("detail").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed summary.json: " + std::string(e.what()));
  }
  std::ifstream meta_in(results_dir / "metadata.json");
  if (meta_in) {
    json meta;
    meta_in >> meta;
    report.wall_seconds = meta.value("wall_seconds", 0.0);
  }
  return report;
}

void print_report(std::ostream& out, const RunReport& report) {
  const auto& s = report.summary;
  out << "mode: " << s.value("mode", "?") << '\n';
  if (s.contains("config")) {
    const auto& c = s["config"];
    out << "scenario: " << c["scenario"].value("kind", "?") << "  alpha: " << c["alpha"]
        << "  seed: " << c["seed"] << "  rule: " << c.value("rule", "?") << '\n';
  }
  if (s.contains("results")) {
    for (const auto& [key, value] : s["results"].items()) out << "  " << key << ": " << value.dump() << '\n';
  }
  out << "generator: " << s.value("generator", "?") << "  wall time: " << report.wall_seconds << " s\n";
  for (const auto& v : report.verdicts) {
    out << "[" << v.status << "] " << v.name << ": " << v.detail << '\n';
  }
  out << (report.passed() ? "OVERALL: PASS" : "OVERALL: FAIL") << '\n';
}

}  // namespace seqebh
