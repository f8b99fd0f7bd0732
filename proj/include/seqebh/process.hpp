#pragma once

// Runtime e-processes driven by a shared observation stream. Each process sees
// only its own response and the tick's covariate.

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "seqebh/adjuster.hpp"
#include "seqebh/eprocess.hpp"
#include "seqebh/factors.hpp"
#include "seqebh/observation.hpp"

namespace seqebh {

/// A predictable rate: evaluated on the state before the next response is seen.
using RateSchedule = std::function<double(const EProcessState& before)>;
RateSchedule constant_rate(double rate);

using CovariateFunction = std::function<double(const Covariate&)>;
CovariateFunction constant_function(double value);

struct BettingSpec {
  double null_theta = 0.5;
};

struct GaussianSpec {
  double variance = 1.0;
  RateSchedule eta = constant_rate(1.0);
};

struct SprtSpec {
  ConditionalDensity null_density;
  ConditionalDensity alt_density;
};

struct UniversalNbSpec {
  double dispersion = 1.0;
};

/// upper tests E[Y|X] <= mu(X); lower tests E[Y|X] >= mu(X); two_sided averages both.
enum class CatoniSide { upper, lower, two_sided };

struct CatoniSpec {
  CovariateFunction mu = constant_function(0.0);
  CovariateFunction variance_bound = constant_function(1.0);
  RateSchedule lambda = constant_rate(0.5);
  CatoniSide side = CatoniSide::upper;
};

using StepwiseFactorSpec = std::variant<BettingSpec, GaussianSpec, SprtSpec, UniversalNbSpec, CatoniSpec>;

struct ProcessSpec {
  StepwiseFactorSpec factor;
  std::optional<AdjusterSpec> adjuster;
};

class LocalProcess {
 public:
  virtual ~LocalProcess() = default;

  virtual void observe(const Covariate& x, double y) = 0;
  /// Log of the value reported to e-BH.
  virtual double log_evalue() const = 0;
  /// Log of the underlying process value before any adjuster is applied.
  virtual double log_base_value() const { return log_evalue(); }
  virtual const EProcessState& state() const = 0;

  double evalue() const;
  double base_value() const;
};

using StepFactor = std::function<double(const EProcessState& before, const Covariate& x, double y)>;

/// M_n = prod of stepwise factors.
class ProductProcess final : public LocalProcess {
 public:
  ProductProcess(Family family, StepFactor factor);
  void observe(const Covariate& x, double y) override;
  double log_evalue() const override { return state_.log_value; }
  const EProcessState& state() const override { return state_; }

 private:
  StepFactor factor_;
  EProcessState state_;
};

/// Universal-inference e-process for beta = 0 in the NB GLM. Needs a 0/1
/// covariate and a nonnegative integer response.
class UniversalNbProcess final : public LocalProcess {
 public:
  explicit UniversalNbProcess(double dispersion);
  void observe(const Covariate& x, double y) override;
  double log_evalue() const override { return state_.log_value; }
  const EProcessState& state() const override { return state_; }

 private:
  double dispersion_;
  EProcessState state_;
};

/// Minimum over a finite grid of null parameter points.
class InfimumProcess final : public LocalProcess {
 public:
  explicit InfimumProcess(std::vector<std::unique_ptr<LocalProcess>> grid);
  void observe(const Covariate& x, double y) override;
  double log_evalue() const override { return state_.log_value; }
  const EProcessState& state() const override { return state_; }

 private:
  std::vector<std::unique_ptr<LocalProcess>> grid_;
  EProcessState state_;
};

/// Convex combination of e-processes for the same null.
class MixtureProcess final : public LocalProcess {
 public:
  MixtureProcess(std::vector<std::unique_ptr<LocalProcess>> members, std::vector<double> weights);
  void observe(const Covariate& x, double y) override;
  double log_evalue() const override { return state_.log_value; }
  const EProcessState& state() const override { return state_; }

 private:
  std::vector<std::unique_ptr<LocalProcess>> members_;
  std::vector<double> log_weights_;
  EProcessState state_;
};

/// e-lifting: reports A(running max of the wrapped process), 1 before any data.
class LiftedProcess final : public LocalProcess {
 public:
  LiftedProcess(std::unique_ptr<LocalProcess> inner, AdjusterSpec adjuster);
  void observe(const Covariate& x, double y) override { inner_->observe(x, y); }
  double log_evalue() const override;
  double log_base_value() const override { return inner_->log_evalue(); }
  const EProcessState& state() const override { return inner_->state(); }

 private:
  std::unique_ptr<LocalProcess> inner_;
  AdjusterSpec adjuster_;
};

Family family_of(const StepwiseFactorSpec& spec);

std::unique_ptr<LocalProcess> make_process(const StepwiseFactorSpec& spec);
std::unique_ptr<LocalProcess> make_process(const ProcessSpec& spec);

/// Infimum over one process per grid point. Throws InputError on an empty grid.
std::unique_ptr<LocalProcess> make_infimum_process(const std::vector<StepwiseFactorSpec>& grid);

/// Bernoulli mass on {0,1}; any response > 0 counts as a success so +/-1 coins work too.
ConditionalDensity bernoulli_density(double success_probability);
ConditionalDensity normal_density(double mean, double sd);

}  // namespace seqebh
