#include "seqebh/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/info_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "seqebh/counterexample.hpp"
#include "seqebh/errors.hpp"

namespace seqebh {

namespace {

using boost::property_tree::ptree;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw ConfigError(source_ + ": field '" + path + "': " + message);
  }

  void only_keys(const ptree& node, const std::string& path,
                 std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, child] : node) {
      bool ok = false;
      for (auto a : allowed) ok = ok || key == a;
      if (!ok) fail(join(path, key), "unknown key");
    }
  }

  const ptree& child(const ptree& node, const std::string& path, const std::string& key) const {
    auto it = node.find(key);
    if (it == node.not_found()) fail(join(path, key), "missing required field");
    if (node.count(key) > 1) fail(join(path, key), "given more than once");
    return it->second;
  }

  const ptree* optional_child(const ptree& node, const std::string& path,
                              const std::string& key) const {
    auto it = node.find(key);
    if (it == node.not_found()) return nullptr;
    if (node.count(key) > 1) fail(join(path, key), "given more than once");
    return &it->second;
  }

  std::string text(const ptree& node, const std::string& path, const std::string& key) const {
    const auto& c = child(node, path, key);
    if (!c.empty()) fail(join(path, key), "expected a value, found a block");
    return c.data();
  }

  double number(const ptree& node, const std::string& path, const std::string& key) const {
    return to_double(text(node, path, key), join(path, key));
  }

  double number_or(const ptree& node, const std::string& path, const std::string& key,
                   double fallback) const {
    return optional_child(node, path, key) ? number(node, path, key) : fallback;
  }

  std::uint64_t integer(const ptree& node, const std::string& path, const std::string& key) const {
    const auto s = text(node, path, key);
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      fail(join(path, key), "expected a nonnegative integer, got '" + s + "'");
    }
    return v;
  }

  std::vector<double> list(const ptree& node, const std::string& path, const std::string& key) const {
    auto s = text(node, path, key);
    for (auto& ch : s) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream is(s);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(to_double(tok, join(path, key)));
    if (out.empty()) fail(join(path, key), "expected a list of numbers");
    return out;
  }

  double to_double(const std::string& s, const std::string& path) const {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      fail(path, "expected a number, got '" + s + "'");
    }
    return v;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  std::string source_;
};

ScenarioKind read_scenario(const Reader& r, const ptree& node) {
  const std::string path = "scenario";
  const auto kind = r.text(node, path, "kind");
  if (kind == "correlated_coins") {
    r.only_keys(node, path, {"kind", "theta", "rho"});
    return CorrelatedCoins{r.list(node, path, "theta"), r.number_or(node, path, "rho", 0.0)};
  }
  if (kind == "mvn") {
    r.only_keys(node, path, {"kind", "mean", "covariance"});
    MvnScenario s;
    s.mean = r.list(node, path, "mean");
    const auto flat = r.list(node, path, "covariance");
    const std::size_t g = s.mean.size();
    if (flat.size() != g * g) {
      r.fail(path + ".covariance", "expected " + std::to_string(g * g) + " entries (row-major G x G)");
    }
    for (std::size_t i = 0; i < g; ++i) {
      s.covariance.emplace_back(flat.begin() + static_cast<long>(i * g),
                                flat.begin() + static_cast<long>((i + 1) * g));
    }
    return s;
  }
  if (kind == "nb_glm") {
    r.only_keys(node, path,
                {"kind", "beta", "gamma", "dispersion", "rho", "covariate", "group_probability"});
    const auto beta = r.list(node, path, "beta");
    const auto gamma = r.list(node, path, "gamma");
    const auto dispersion = r.list(node, path, "dispersion");
    if (gamma.size() != beta.size() || dispersion.size() != beta.size()) {
      r.fail(path, "beta, gamma and dispersion must have one entry per hypothesis");
    }
    NbGlmScenario s;
    for (std::size_t g = 0; g < beta.size(); ++g) s.arms.push_back({beta[g], gamma[g], dispersion[g]});
    s.rho = r.number_or(node, path, "rho", 0.0);
    s.group_probability = r.number_or(node, path, "group_probability", 0.5);
    if (r.optional_child(node, path, "covariate")) {
      const auto policy = r.text(node, path, "covariate");
      if (policy == "bernoulli") {
        s.policy = CovariatePolicy::bernoulli;
      } else if (policy == "alternating") {
        s.policy = CovariatePolicy::alternating;
      } else {
        r.fail(path + ".covariate", "expected bernoulli or alternating");
      }
    }
    return s;
  }
  if (kind == "foreteller") {
    r.only_keys(node, path, {"kind", "d", "theta"});
    return Foreteller{static_cast<int>(r.integer(node, path, "d")), r.number_or(node, path, "theta", 0.5)};
  }
  r.fail(path + ".kind", "unknown scenario kind '" + kind + "'");
}

ProcessSpec read_process(const Reader& r, const ptree& node, const std::string& path,
                         const std::filesystem::path& base_dir, std::string& description) {
  const auto family = r.text(node, path, "family");
  ProcessSpec spec;
  description = family;
  std::set<std::string_view> common{"family", "adjuster", "k", "table"};
  auto allow = [&](std::initializer_list<std::string_view> extra) {
    std::vector<std::string_view> keys(common.begin(), common.end());
    keys.insert(keys.end(), extra);
    for (const auto& [key, child] : node) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        r.fail(Reader::join(path, key), "unknown key for family " + family);
      }
    }
  };
  if (family == "betting") {
    allow({"null_theta"});
    spec.factor = BettingSpec{r.number_or(node, path, "null_theta", 0.5)};
  } else if (family == "gaussian") {
    allow({"variance", "eta"});
    spec.factor = GaussianSpec{r.number(node, path, "variance"),
                               constant_rate(r.number(node, path, "eta"))};
  } else if (family == "sprt") {
    allow({"law", "null_p", "alt_p", "null_mean", "alt_mean", "sd"});
    const auto law = r.text(node, path, "law");
    if (law == "bernoulli") {
      spec.factor = SprtSpec{bernoulli_density(r.number(node, path, "null_p")),
                             bernoulli_density(r.number(node, path, "alt_p"))};
    } else if (law == "normal") {
      const double sd = r.number(node, path, "sd");
      spec.factor = SprtSpec{normal_density(r.number(node, path, "null_mean"), sd),
                             normal_density(r.number(node, path, "alt_mean"), sd)};
    } else {
      r.fail(path + ".law", "expected bernoulli or normal");
    }
  } else if (family == "universal_nb") {
    allow({"dispersion"});
    spec.factor = UniversalNbSpec{r.number(node, path, "dispersion")};
  } else if (family == "catoni") {
    allow({"mu", "variance_bound", "lambda", "side"});
    CatoniSpec c;
    c.mu = constant_function(r.number_or(node, path, "mu", 0.0));
    c.variance_bound = constant_function(r.number(node, path, "variance_bound"));
    c.lambda = constant_rate(r.number(node, path, "lambda"));
    const std::string side = r.optional_child(node, path, "side") ? r.text(node, path, "side") : "upper";
    if (side == "upper") {
      c.side = CatoniSide::upper;
    } else if (side == "lower") {
      c.side = CatoniSide::lower;
    } else if (side == "two_sided") {
      c.side = CatoniSide::two_sided;
    } else {
      r.fail(path + ".side", "expected upper, lower or two_sided");
    }
    spec.factor = c;
  } else {
    r.fail(path + ".family", "unknown family '" + family + "'");
  }

  if (r.optional_child(node, path, "adjuster")) {
    const auto adj = r.text(node, path, "adjuster");
    if (adj == "sqrt_minus_one") {
      spec.adjuster = SqrtMinusOneAdjuster{};
    } else if (adj == "power") {
      spec.adjuster = PowerAdjuster{r.number(node, path, "k")};
    } else if (adj == "table") {
      auto table_path = std::filesystem::path(r.text(node, path, "table"));
      if (table_path.is_relative()) table_path = base_dir / table_path;
      spec.adjuster = load_adjuster_table(table_path);
    } else if (adj != "none") {
      r.fail(path + ".adjuster", "expected none, sqrt_minus_one, power or table");
    }
    if (spec.adjuster) {
      try {
        validate_adjuster(*spec.adjuster);
      } catch (const SpecError& e) {
        r.fail(path + ".adjuster", e.what());
      }
      description += "+" + describe(*spec.adjuster);
    }
  }
  return spec;
}

StoppingRule read_rule(const Reader& r, const ptree& node, const std::string& path) {
  const auto kind = r.text(node, path, "kind");
  if (kind == "fixed_horizon") {
    r.only_keys(node, path, {"kind", "steps"});
    return StoppingRule{FixedHorizon{r.integer(node, path, "steps")}};
  }
  if (kind == "threshold") {
    r.only_keys(node, path, {"kind", "hypothesis", "level"});
    const auto h = r.integer(node, path, "hypothesis");
    if (h == 0) r.fail(path + ".hypothesis", "hypotheses are numbered from 1");
    return StoppingRule{ThresholdRule{h - 1, r.number(node, path, "level")}};
  }
  if (kind == "rejection_count") {
    r.only_keys(node, path, {"kind", "k"});
    return StoppingRule{RejectionCount{r.integer(node, path, "k")}};
  }
  if (kind == "first_of") {
    r.only_keys(node, path, {"kind", "rule"});
    FirstOf f;
    for (const auto& [key, child] : node) {
      if (key == "rule") f.rules.push_back(read_rule(r, child, path + ".rule"));
    }
    if (f.rules.empty()) r.fail(path, "first_of needs at least one nested rule");
    return StoppingRule{std::move(f)};
  }
  if (kind == "foreteller") {
    r.only_keys(node, path, {"kind"});
    return foreteller_rule();
  }
  r.fail(path + ".kind", "unknown rule kind '" + kind + "'");
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& source_name,
                              const std::filesystem::path& base_dir) {
  ptree root;
  try {
    boost::property_tree::read_info(in, root);
  } catch (const boost::property_tree::info_parser_error& e) {
    throw ConfigError(source_name + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  Reader r(source_name);
  r.only_keys(root, "",
              {"seed", "alpha", "trials", "horizon", "output", "scenario", "processes", "rule",
               "expect"});

  ExperimentConfig cfg;
  cfg.scenario.seed = r.integer(root, "", "seed");
  cfg.alpha = r.number(root, "", "alpha");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) r.fail("alpha", "must lie in (0,1)");
  cfg.trials = r.integer(root, "", "trials");
  cfg.scenario.horizon = r.integer(root, "", "horizon");
  if (cfg.scenario.horizon == 0) r.fail("horizon", "must be positive");
  if (r.optional_child(root, "", "output")) cfg.output = r.text(root, "", "output");

  cfg.scenario.kind = read_scenario(r, r.child(root, "", "scenario"));
  try {
    validate_scenario(cfg.scenario.kind);
  } catch (const ParameterError& e) {
    r.fail("scenario", e.what());
  }
  const std::size_t hypotheses = hypothesis_count(cfg.scenario.kind);

  const auto& procs = r.child(root, "", "processes");
  std::vector<std::optional<ProcessSpec>> specs(hypotheses);
  std::vector<std::string> descriptions(hypotheses);
  std::optional<ProcessSpec> fallback;
  std::string fallback_description;
  for (const auto& [key, child] : procs) {
    const std::string path = "processes." + key;
    if (key == "default") {
      if (fallback) r.fail(path, "given more than once");
      fallback = read_process(r, child, path, base_dir, fallback_description);
      continue;
    }
    std::size_t g = 0;
    auto res = std::from_chars(key.data() + 1, key.data() + key.size(), g);
    if (key.size() < 2 || key[0] != 'h' || res.ec != std::errc() ||
        res.ptr != key.data() + key.size() || g == 0) {
      r.fail(path, "expected 'default' or h<index>");
    }
    if (g > hypotheses) {
      r.fail(path, "scenario has only " + std::to_string(hypotheses) + " hypotheses");
    }
    if (specs[g - 1]) r.fail(path, "given more than once");
    specs[g - 1] = read_process(r, child, path, base_dir, descriptions[g - 1]);
  }
  for (std::size_t g = 0; g < hypotheses; ++g) {
    if (!specs[g]) {
      if (!fallback) {
        r.fail("processes", "no process for hypothesis h" + std::to_string(g + 1) +
                                " and no default block");
      }
      specs[g] = fallback;
      descriptions[g] = fallback_description;
    }
    cfg.processes.push_back(*specs[g]);
  }
  cfg.process_descriptions = std::move(descriptions);

  cfg.rule = read_rule(r, r.child(root, "", "rule"), "rule");

  if (const auto* expect = r.optional_child(root, "", "expect")) {
    r.only_keys(*expect, "expect", {"fdr", "null_evalues"});
    if (r.optional_child(*expect, "expect", "fdr")) {
      const auto v = r.text(*expect, "expect", "fdr");
      if (v == "control") {
        cfg.expect_fdr = FdrExpectation::control;
      } else if (v == "skip") {
        cfg.expect_fdr = FdrExpectation::skip;
      } else {
        r.fail("expect.fdr", "expected control or skip");
      }
    }
    if (r.optional_child(*expect, "expect", "null_evalues")) {
      const auto v = r.text(*expect, "expect", "null_evalues");
      if (v == "valid") {
        cfg.expect_null_evalues = EvalueExpectation::valid;
      } else if (v == "violated") {
        cfg.expect_null_evalues = EvalueExpectation::violated;
      } else if (v == "skip") {
        cfg.expect_null_evalues = EvalueExpectation::skip;
      } else {
        r.fail("expect.null_evalues", "expected valid, violated or skip");
      }
    }
  }

  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(source_name + ": " + e.what());
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("field 'alpha': must lie in (0,1)");
  if (cfg.trials == 0 && !std::holds_alternative<Foreteller>(cfg.scenario.kind)) {
    throw ConfigError(
        "field 'trials': 0 (exact enumeration) is only available for the foreteller scenario");
  }
  if (cfg.trials >= 2 && cfg.trials < 100) {
    throw ConfigError("field 'trials': Monte Carlo runs need at least 100 trials");
  }
  if (cfg.processes.size() != hypothesis_count(cfg.scenario.kind)) {
    throw ConfigError("field 'processes': arity does not match the scenario");
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  auto cfg = parse_config(in, path.string(), path.parent_path());
  if (cfg.output.empty()) cfg.output = path.stem().string() + "_results";
  return cfg;
}

}  // namespace seqebh
