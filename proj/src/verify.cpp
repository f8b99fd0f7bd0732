#include "seqebh/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "seqebh/adjuster.hpp"
#include "seqebh/counterexample.hpp"
#include "seqebh/ebh.hpp"
#include "seqebh/eprocess.hpp"
#include "seqebh/errors.hpp"
#include "seqebh/factors.hpp"
#include "seqebh/negative_binomial.hpp"

namespace seqebh {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kQuadratureTol = 1e-6;

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

double normal_pdf(double y, double mean, double variance) {
  const double z = y - mean;
  return std::exp(-0.5 * z * z / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

double integrate_real_line(const std::function<double(double)>& f) {
  const double inf = std::numeric_limits<double>::infinity();
  return gauss_kronrod<double, 61>::integrate(f, -inf, inf, 15, 1e-13);
}

std::vector<double> random_evalues(std::mt19937_64& rng, std::size_t g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> e(g);
  for (auto& v : e) {
    const double r = u(rng);
    if (r < 0.05) {
      v = 0.0;
    } else if (r < 0.08) {
      v = std::numeric_limits<double>::infinity();
    } else {
      v = std::exp(u(rng) * 8.0 - 2.0);
    }
  }
  return e;
}

void ebh_suite(std::vector<CheckResult>& out) {
  const auto add = [&out](std::string name, bool ok, std::string detail = {}) {
    out.push_back({"ebh", std::move(name), ok, std::move(detail)});
  };
  add("ebh (40,10,5) alpha 0.1 rejects {1}",
      ebh(std::vector<double>{40, 10, 5}, 0.1) == RejectionSet(3, {0}));
  add("ebh (4,4) alpha 0.5 rejects both", ebh(std::vector<double>{4, 4}, 0.5) == RejectionSet(2, {0, 1}));
  add("ebh zeros reject nothing", ebh(std::vector<double>{0, 0, 0}, 0.3).empty());

  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  std::uniform_real_distribution<double> level(0.01, 0.5);
  std::size_t duality_fail = 0, mono_fail = 0, self_fail = 0, round_fail = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto e = random_evalues(rng, size(rng));
    const double alpha = level(rng);
    const auto r = ebh(e, alpha);
    if (!(r == bh(reciprocals(e), alpha))) ++duality_fail;

    auto bumped = e;
    const std::size_t g = std::uniform_int_distribution<std::size_t>(0, e.size() - 1)(rng);
    bumped[g] = bumped[g] * 2.0 + 0.5;
    const auto r2 = ebh(bumped, alpha);
    for (auto m : r.members()) {
      if (!r2.contains(m)) {
        ++mono_fail;
        break;
      }
    }

    if (!r.empty()) {
      const double t = ebh_threshold(e.size(), alpha, r.size());
      for (auto m : r.members()) {
        if (e[m] < t) ++self_fail;
      }
    }

    std::vector<std::size_t> members;
    for (std::size_t h = 0; h < e.size(); ++h) {
      if (rng() & 1U) members.push_back(h);
    }
    const RejectionSet set(e.size(), members);
    if (!(ebh(compound_from_rejection(set, alpha), alpha) == set)) ++round_fail;
  }
  add("duality ebh(E) == bh(1/E) on 1000 random vectors", duality_fail == 0,
      std::to_string(duality_fail) + " mismatches");
  add("monotonicity under single-entry increase on 1000 vectors", mono_fail == 0,
      std::to_string(mono_fail) + " violations");
  add("self-consistency of every rejection", self_fail == 0, std::to_string(self_fail) + " violations");
  add("compound_from_rejection round-trip on 1000 sets", round_fail == 0,
      std::to_string(round_fail) + " mismatches");
}

void adjuster_suite(std::vector<CheckResult>& out) {
  const auto add = [&out](std::string name, bool ok, std::string detail = {}) {
    out.push_back({"adjusters", std::move(name), ok, std::move(detail)});
  };
  const auto check_unit = [&](const std::string& name, const AdjusterSpec& spec) {
    const auto r = adjuster_validity(spec, kQuadratureTol);
    add(name + " integrates to 1", r.pass && std::abs(r.integral_estimate - 1.0) <= kQuadratureTol,
        "integral " + num(r.integral_estimate));
  };
  check_unit("sqrt_minus_one", SqrtMinusOneAdjuster{});
  for (double k : {0.25, 0.5, 0.75}) check_unit("power k=" + num(k), PowerAdjuster{k});
  const auto identity = adjuster_validity(TableAdjuster{{1.0, 2.0}, {1.0, 2.0}}, kQuadratureTol);
  add("identity table flagged divergent", identity.divergent && !identity.pass,
      "partial integral " + num(identity.integral_estimate));
  const auto compound = compound_adjuster_validity(
      CompoundAdjusterSpec{{SqrtMinusOneAdjuster{}, SqrtMinusOneAdjuster{}}, {2.0, 0.0}}, kQuadratureTol);
  add("weighted compound (2,0) of sqrt_minus_one integrates to 2",
      compound.pass && std::abs(compound.integral_estimate - 2.0) <= 2.0 * kQuadratureTol,
      "integral " + num(compound.integral_estimate));
}

void stepwise_suite(std::vector<CheckResult>& out) {
  const auto add = [&out](std::string name, bool ok, std::string detail = {}) {
    out.push_back({"stepwise", std::move(name), ok, std::move(detail)});
  };

  const double betting = 0.5 * betting_factor(1.0) + 0.5 * betting_factor(-1.0);
  add("betting two-point mean equals 1", betting == 1.0, num(betting));

  double worst = 0.0;
  for (double eta : {0.25, 1.0, 2.0}) {
    for (double var : {0.5, 1.0, 2.0}) {
      const double v = integrate_real_line(
          [=](double y) { return gaussian_factor(eta, var, y) * normal_pdf(y, 0.0, var); });
      worst = std::max(worst, std::abs(v - 1.0));
    }
  }
  add("gaussian factor integrates to 1 under N(0, var)", worst <= kQuadratureTol,
      "max deviation " + num(worst));

  worst = 0.0;
  for (double p : {0.2, 0.5, 0.7}) {
    for (double q : {0.1, 0.6, 0.75}) {
      const auto pd = bernoulli_density(p);
      const auto qd = bernoulli_density(q);
      double s = 0.0;
      for (double y : {0.0, 1.0}) s += pd(std::nullopt, y) * sprt_factor(pd, qd, std::nullopt, y);
      worst = std::max(worst, std::abs(s - 1.0));
    }
  }
  add("bernoulli sprt factor sums to 1 under the null", worst <= kQuadratureTol,
      "max deviation " + num(worst));

  worst = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    for (double null_gamma : {0.0, std::log(3.0)}) {
      for (NbCoefficients plug : {NbCoefficients{0.0, 0.0}, NbCoefficients{std::log(2.0), 0.5}}) {
        for (int x : {0, 1}) {
          double s = 0.0;
          double plug_mass = 0.0;
          for (std::int64_t y = 0; y < 200000 && plug_mass < 1.0 - 1e-14; ++y) {
            const double pn = std::exp(nb_logpmf(y, std::exp(null_gamma), a));
            s += pn * universal_nb_factor(NbSample{x, y}, plug, null_gamma, a);
            plug_mass += std::exp(nb_logpmf(y, std::exp(x * plug.beta + plug.gamma), a));
          }
          worst = std::max(worst, std::abs(s - 1.0));
        }
      }
    }
  }
  add("universal NB factor sums to 1 under the null", worst <= kQuadratureTol,
      "max deviation " + num(worst));

  double highest = 0.0;
  for (double lambda : {0.1, 0.5, 1.0}) {
    const double normal0 = integrate_real_line(
        [=](double y) { return catoni_factor(lambda, 0.0, 1.0, y) * normal_pdf(y, 0.0, 1.0); });
    const double shifted = integrate_real_line(
        [=](double y) { return catoni_factor(lambda, 0.0, 1.0, y) * normal_pdf(y, -0.5, 1.0); });
    const double coin = 0.5 * catoni_factor(lambda, 0.0, 1.0, 1.0) + 0.5 * catoni_factor(lambda, 0.0, 1.0, -1.0);
    highest = std::max({highest, normal0, shifted, coin});
  }
  add("catoni factor mean at most 1 under three null laws", highest <= 1.0 + kQuadratureTol,
      "largest mean " + num(highest));

  std::mt19937_64 rng(7);
  double drift = 0.0;
  for (int h = 0; h < 200; ++h) {
    const double a = std::uniform_real_distribution<double>(0.2, 2.0)(rng);
    const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
    std::vector<NbSample> hist;
    auto state = initial_state(Family::universal_nb);
    for (std::size_t i = 0; i < len; ++i) {
      const NbSample s{static_cast<int>(rng() & 1U),
                       std::uniform_int_distribution<std::int64_t>(0, 12)(rng)};
      hist.push_back(s);
      state = universal_nb_update(state, s, a);
      double num_log = 0.0;
      for (std::size_t j = 0; j < hist.size(); ++j) {
        const NbCoefficients plug =
            j == 0 ? NbCoefficients{} : nb_mle_full(std::span(hist).first(j), a);
        num_log += nb_logpmf(hist[j].count, std::exp(hist[j].group * plug.beta + plug.gamma), a);
      }
      const double den_log = nb_loglik(hist, NbCoefficients{0.0, nb_mle_null(hist, a)}, a);
      drift = std::max(drift, std::abs(state.log_value - (num_log - den_log)));
    }
  }
  add("universal NB incremental state matches recomputation (200 histories)", drift <= 1e-9,
      "max log drift " + num(drift));
}

void counterexample_suite(std::vector<CheckResult>& out) {
  const auto table = enumerate_counterexample();
  const std::size_t taus[4] = {2, 1, 2, 1};
  const double m_tau[4] = {2.25, 1.5, 0.75, 0.5};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& row = table.rows[i];
    const std::string label = "(" + std::to_string(row.y1) + "," + std::to_string(row.y2) + ")";
    out.push_back({"counterexample", "tau " + label, row.tau == taus[i], std::to_string(row.tau)});
    out.push_back({"counterexample", "M1_tau " + label, row.m_tau == m_tau[i], num(row.m_tau)});
  }
  out.push_back({"counterexample", "E[M1_tau] = 1.25", table.expectation == 1.25, num(table.expectation)});
}

}  // namespace

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> suites{"ebh", "adjusters", "stepwise", "counterexample"};
  return suites;
}

std::vector<CheckResult> verify(std::string_view suite) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  bool matched = all;
  if (all || suite == "ebh") { ebh_suite(out); matched = true; }
  if (all || suite == "adjusters") { adjuster_suite(out); matched = true; }
  if (all || suite == "stepwise") { stepwise_suite(out); matched = true; }
  if (all || suite == "counterexample") { counterexample_suite(out); matched = true; }
  if (!matched) throw InputError("unknown verify suite '" + std::string(suite) + "'");
  return out;
}

}  // namespace seqebh
