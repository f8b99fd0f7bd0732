#include "seqebh/monte_carlo.hpp"

#include <cmath>
#include <ostream>

#include "seqebh/errors.hpp"
#include "seqebh/rng.hpp"
#include "seqebh/text.hpp"

namespace seqebh {

namespace {

struct RunningMoments {
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  double std_error() const {
    if (count < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(count - 1) / static_cast<double>(count));
  }
};

}  // namespace

MonteCarloSummary mc_fdr(const ScenarioSpec& scenario, const ProcessFactory& factory,
                         const StoppingRule& rule, std::size_t trials, double alpha,
                         bool keep_records) {
  if (trials < 100) throw ParameterError("mc_fdr needs at least 100 trials");
  validate_alpha(alpha);
  validate_scenario(scenario.kind);
  const std::size_t hypotheses = hypothesis_count(scenario.kind);

  MonteCarloSummary summary;
  summary.trials = trials;
  summary.truth = null_indicator(scenario.kind);
  summary.rejection_frequency.assign(hypotheses, 0.0);

  RunningMoments fdr;
  RunningMoments tau;
  std::vector<RunningMoments> null_evalues(hypotheses);

  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t seed = derive_seed(scenario.seed, t);
    const auto stream = generate(scenario.kind, scenario.horizon, seed);
    Session session(factory(), alpha);
    if (session.hypotheses() != hypotheses) {
      throw InputError("scenario has " + std::to_string(hypotheses) + " hypotheses but the factory built " +
                       std::to_string(session.hypotheses()) + " processes");
    }
    auto result = run(session, stream, rule);
    const double trial_fdp = fdp(result.rejections, summary.truth);
    fdr.add(trial_fdp);
    tau.add(static_cast<double>(result.tau));
    for (std::size_t g = 0; g < hypotheses; ++g) {
      if (result.rejections.contains(g)) summary.rejection_frequency[g] += 1.0;
      if (summary.truth[g]) null_evalues[g].add(result.evalues[g]);
    }
    if (keep_records) {
      summary.records.push_back(TrialRecord{t, seed, result.tau, result.rule_fired, trial_fdp,
                                            std::move(result.rejections), std::move(result.evalues)});
    }
  }

  summary.mean_fdr = fdr.mean;
  summary.std_error = fdr.std_error();
  summary.mean_tau = tau.mean;
  for (auto& f : summary.rejection_frequency) f /= static_cast<double>(trials);
  for (std::size_t g = 0; g < hypotheses; ++g) {
    if (summary.truth[g]) {
      summary.mean_null_evalue.emplace_back(null_evalues[g].mean);
      summary.null_evalue_std_error.emplace_back(null_evalues[g].std_error());
    } else {
      summary.mean_null_evalue.emplace_back();
      summary.null_evalue_std_error.emplace_back();
    }
  }
  return summary;
}

void write_trials(std::ostream& out, const std::vector<TrialRecord>& records) {
  if (records.empty()) return;
  out << "trial\tseed\ttau\trule_fired\tfdp\trejected";
  for (std::size_t g = 0; g < records.front().evalues.size(); ++g) out << "\tE_" << g + 1;
  out << '\n';
  for (const auto& r : records) {
    out << r.trial << '\t' << r.seed << '\t' << r.tau << '\t' << (r.rule_fired ? 1 : 0) << '\t'
        << format_number(r.fdp) << '\t' << r.rejections.bitmask();
    for (double e : r.evalues) out << '\t' << format_number(e);
    out << '\n';
  }
}

}  // namespace seqebh
