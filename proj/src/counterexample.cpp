#include "seqebh/counterexample.hpp"

#include <cmath>

#include "seqebh/errors.hpp"

namespace seqebh {

StoppingRule foreteller_rule() {
  return StoppingRule{CustomRule{"foreteller", [](const RuleContext& ctx) {
                                   if (ctx.base_values.size() < 2) {
                                     throw InputError("foreteller rule needs two streams");
                                   }
                                   return ctx.n >= 2 || (ctx.n == 1 && ctx.base_values[1] < 1.0);
                                 }}};
}

CounterexampleTable enumerate_counterexample() {
  CounterexampleTable table;
  const ProcessFactory factory = make_factory({ProcessSpec{BettingSpec{}, {}}, ProcessSpec{BettingSpec{}, {}}});
  const StoppingRule rule = foreteller_rule();
  std::size_t i = 0;
  for (int y1 : {1, -1}) {
    for (int y2 : {1, -1}) {
      CounterexampleRow row;
      row.y1 = y1;
      row.y2 = y2;
      auto m = product_update(initial_state(Family::betting), betting_factor(y1));
      row.m1 = m.value();
      m = product_update(m, betting_factor(y2));
      row.m2 = m.value();

      // Tick n carries (Y^1_n, Y^1_{n+1}); Y^1_3 never reaches stream 1 before tau.
      const std::vector<Observation> stream{{std::nullopt, {double(y1), double(y2)}},
                                            {std::nullopt, {double(y2), 1.0}}};
      Session session(factory(), 0.5);
      const auto result = run(session, stream, rule);
      row.tau = result.tau;
      row.m_tau = result.base_values[0];
      table.rows[i++] = row;
      table.expectation += 0.25 * row.m_tau;
    }
  }
  return table;
}

ExactSummary enumerate_foreteller(const Foreteller& scenario, std::size_t horizon,
                                  const ProcessFactory& factory, const StoppingRule& rule,
                                  double alpha) {
  validate_scenario(scenario);
  if (horizon == 0 || horizon > 20) throw ParameterError("exact enumeration needs 1 <= horizon <= 20");
  const std::size_t tosses = horizon + static_cast<std::size_t>(scenario.d);
  ExactSummary out;
  out.truth = null_indicator(scenario);
  out.mean_evalue.assign(2, 0.0);
  out.mean_base_value.assign(2, 0.0);
  out.rejection_probability.assign(2, 0.0);

  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << tosses); ++bits) {
    std::vector<double> first(tosses);
    double probability = 1.0;
    for (std::size_t t = 0; t < tosses; ++t) {
      const bool heads = (bits >> t) & 1U;
      first[t] = heads ? 1.0 : -1.0;
      probability *= heads ? scenario.theta : 1.0 - scenario.theta;
    }
    ++out.outcomes;
    if (probability == 0.0) continue;
    std::vector<Observation> stream;
    for (std::size_t t = 0; t < horizon; ++t) {
      stream.push_back(
          Observation{std::nullopt, {first[t], first[t + static_cast<std::size_t>(scenario.d)]}});
    }
    Session session(factory(), alpha);
    if (session.hypotheses() != 2) throw InputError("foreteller enumeration needs two processes");
    const auto result = run(session, stream, rule);
    for (std::size_t g = 0; g < 2; ++g) {
      out.mean_evalue[g] += probability * result.evalues[g];
      out.mean_base_value[g] += probability * result.base_values[g];
      if (result.rejections.contains(g)) out.rejection_probability[g] += probability;
    }
    out.fdr += probability * fdp(result.rejections, out.truth);
    out.mean_tau += probability * static_cast<double>(result.tau);
  }
  return out;
}

}  // namespace seqebh
