#include "seqebh/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "seqebh/errors.hpp"

namespace seqebh {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double log_sum_exp(const std::vector<double>& terms) {
  const double top = *std::max_element(terms.begin(), terms.end());
  if (top == kNegInf) return kNegInf;
  if (std::isinf(top)) return top;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - top);
  return top + std::log(s);
}

double checked_rate(const RateSchedule& schedule, const EProcessState& before, const char* what) {
  const double rate = schedule(before);
  if (!std::isfinite(rate) || rate < 0.0) {
    throw ParameterError(std::string(what) + " schedule produced an invalid rate");
  }
  return rate;
}

StepFactor catoni_step(const CatoniSpec& spec, bool lower) {
  return [spec, lower](const EProcessState& before, const Covariate& x, double y) {
    const double lambda = checked_rate(spec.lambda, before, "catoni lambda");
    const double mu = spec.mu(x);
    const double v = spec.variance_bound(x);
    return lower ? catoni_factor(lambda, -mu, v, -y) : catoni_factor(lambda, mu, v, y);
  };
}

}  // namespace

RateSchedule constant_rate(double rate) {
  return [rate](const EProcessState&) { return rate; };
}

CovariateFunction constant_function(double value) {
  return [value](const Covariate&) { return value; };
}

double LocalProcess::evalue() const { return std::exp(log_evalue()); }
double LocalProcess::base_value() const { return std::exp(log_base_value()); }

ProductProcess::ProductProcess(Family family, StepFactor factor)
    : factor_(std::move(factor)), state_(initial_state(family)) {}

void ProductProcess::observe(const Covariate& x, double y) {
  const double f = factor_(state_, x, y);
  state_ = product_update(std::move(state_), f);
}

UniversalNbProcess::UniversalNbProcess(double dispersion)
    : dispersion_(dispersion), state_(initial_state(Family::universal_nb)) {
  validate_dispersion(dispersion);
}

void UniversalNbProcess::observe(const Covariate& x, double y) {
  if (!x || (*x != 0.0 && *x != 1.0)) {
    throw InputError("universal NB process needs a 0/1 covariate");
  }
  if (!(y >= 0.0) || y != std::floor(y)) {
    throw InputError("universal NB process needs a nonnegative integer response");
  }
  NbSample sample{static_cast<int>(*x), static_cast<std::int64_t>(y)};
  state_ = universal_nb_update(std::move(state_), sample, dispersion_);
}

InfimumProcess::InfimumProcess(std::vector<std::unique_ptr<LocalProcess>> grid)
    : grid_(std::move(grid)), state_(initial_state(Family::composite)) {
  if (grid_.empty()) throw InputError("infimum over an empty null grid");
  if (grid_.size() == 1) state_.family = grid_.front()->state().family;
}

void InfimumProcess::observe(const Covariate& x, double y) {
  double lowest = std::numeric_limits<double>::infinity();
  for (auto& p : grid_) {
    p->observe(x, y);
    lowest = std::min(lowest, p->log_evalue());
  }
  state_.n += 1;
  state_.log_value = lowest;
  state_.log_running_max = std::max(state_.log_running_max, lowest);
}

MixtureProcess::MixtureProcess(std::vector<std::unique_ptr<LocalProcess>> members,
                               std::vector<double> weights)
    : members_(std::move(members)), state_(initial_state(Family::composite)) {
  if (members_.empty() || members_.size() != weights.size()) {
    throw InputError("mixture needs one weight per member");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double w : weights) {
    if (!(w >= 0.0)) throw ParameterError("mixture weights must be nonnegative");
  }
  if (std::abs(total - 1.0) > 1e-12) throw ParameterError("mixture weights must sum to one");
  for (double w : weights) log_weights_.push_back(w == 0.0 ? kNegInf : std::log(w));
}

void MixtureProcess::observe(const Covariate& x, double y) {
  std::vector<double> terms;
  terms.reserve(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    members_[i]->observe(x, y);
    terms.push_back(log_weights_[i] == kNegInf ? kNegInf
                                               : log_weights_[i] + members_[i]->log_evalue());
  }
  state_.n += 1;
  state_.log_value = log_sum_exp(terms);
  state_.log_running_max = std::max(state_.log_running_max, state_.log_value);
}

LiftedProcess::LiftedProcess(std::unique_ptr<LocalProcess> inner, AdjusterSpec adjuster)
    : inner_(std::move(inner)), adjuster_(std::move(adjuster)) {
  validate_adjuster(adjuster_);
}

double LiftedProcess::log_evalue() const {
  const double v = elift(inner_->state(), adjuster_);
  return v == 0.0 ? kNegInf : std::log(v);
}

Family family_of(const StepwiseFactorSpec& spec) {
  return std::visit(overloaded{
                        [](const BettingSpec&) { return Family::betting; },
                        [](const GaussianSpec&) { return Family::gaussian; },
                        [](const SprtSpec&) { return Family::sprt; },
                        [](const UniversalNbSpec&) { return Family::universal_nb; },
                        [](const CatoniSpec&) { return Family::catoni; },
                    },
                    spec);
}

std::unique_ptr<LocalProcess> make_process(const StepwiseFactorSpec& spec) {
  return std::visit(
      overloaded{
          [](const BettingSpec& s) -> std::unique_ptr<LocalProcess> {
            if (!(s.null_theta >= 0.0 && s.null_theta <= 1.0)) {
              throw ParameterError("betting null theta must lie in [0,1]");
            }
            const double theta = s.null_theta;
            return std::make_unique<ProductProcess>(
                Family::betting, [theta](const EProcessState&, const Covariate&, double y) {
                  return betting_factor(y, theta);
                });
          },
          [](const GaussianSpec& s) -> std::unique_ptr<LocalProcess> {
            if (!(s.variance > 0.0)) throw ParameterError("gaussian variance must be positive");
            return std::make_unique<ProductProcess>(
                Family::gaussian, [s](const EProcessState& before, const Covariate&, double y) {
                  return gaussian_factor(checked_rate(s.eta, before, "gaussian eta"), s.variance, y);
                });
          },
          [](const SprtSpec& s) -> std::unique_ptr<LocalProcess> {
            if (!s.null_density || !s.alt_density) {
              throw ParameterError("sprt needs both null and alternative densities");
            }
            return std::make_unique<ProductProcess>(
                Family::sprt, [s](const EProcessState&, const Covariate& x, double y) {
                  return sprt_factor(s.null_density, s.alt_density, x, y);
                });
          },
          [](const UniversalNbSpec& s) -> std::unique_ptr<LocalProcess> {
            return std::make_unique<UniversalNbProcess>(s.dispersion);
          },
          [](const CatoniSpec& s) -> std::unique_ptr<LocalProcess> {
            if (s.side != CatoniSide::two_sided) {
              return std::make_unique<ProductProcess>(Family::catoni,
                                                      catoni_step(s, s.side == CatoniSide::lower));
            }
            std::vector<std::unique_ptr<LocalProcess>> sides;
            sides.push_back(std::make_unique<ProductProcess>(Family::catoni, catoni_step(s, false)));
            sides.push_back(std::make_unique<ProductProcess>(Family::catoni, catoni_step(s, true)));
            return std::make_unique<MixtureProcess>(std::move(sides), std::vector<double>{0.5, 0.5});
          },
      },
      spec);
}

std::unique_ptr<LocalProcess> make_process(const ProcessSpec& spec) {
  auto base = make_process(spec.factor);
  if (!spec.adjuster) return base;
  return std::make_unique<LiftedProcess>(std::move(base), *spec.adjuster);
}

std::unique_ptr<LocalProcess> make_infimum_process(const std::vector<StepwiseFactorSpec>& grid) {
  if (grid.empty()) throw InputError("infimum over an empty null grid");
  std::vector<std::unique_ptr<LocalProcess>> members;
  for (const auto& s : grid) members.push_back(make_process(s));
  return std::make_unique<InfimumProcess>(std::move(members));
}

ConditionalDensity bernoulli_density(double success_probability) {
  if (!(success_probability >= 0.0 && success_probability <= 1.0)) {
    throw ParameterError("bernoulli probability must lie in [0,1]");
  }
  return [success_probability](const Covariate&, double y) {
    return y > 0.0 ? success_probability : 1.0 - success_probability;
  };
}

ConditionalDensity normal_density(double mean, double sd) {
  if (!(sd > 0.0)) throw ParameterError("normal density needs a positive sd");
  return [mean, sd](const Covariate&, double y) {
    const double z = (y - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
  };
}

}  // namespace seqebh
