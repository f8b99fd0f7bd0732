#pragma once

// NB2 negative binomial model (mean m, dispersion a, size r = 1/a, variance
// m + a m^2) with a binary group covariate: mean = exp(x * beta + gamma).

#include <cstddef>
#include <cstdint>
#include <span>

namespace seqebh {

/// Floor applied to sample means before taking logs.
inline constexpr double kMeanFloor = 1e-8;

struct NbSample {
  int group = 0;             // covariate, 0 or 1
  std::int64_t count = 0;    // response, >= 0
};

struct NbCoefficients {
  double beta = 0.0;   // group effect
  double gamma = 0.0;  // log baseline mean
};

/// Running sums that determine both MLEs and the null log-likelihood.
struct NbSufficientStats {
  std::size_t count[2] = {0, 0};
  double sum[2] = {0.0, 0.0};
  double log_numerator = 0.0;          // sum of predictive plug-in log-pmfs
  double sum_lgamma_y_plus_r = 0.0;
  double sum_lgamma_y_plus_1 = 0.0;

  std::size_t total_count() const { return count[0] + count[1]; }
  double total_sum() const { return sum[0] + sum[1]; }
  friend bool operator==(const NbSufficientStats&, const NbSufficientStats&) = default;
};

double nb_logpmf(std::int64_t y, double mean, double dispersion);

/// Null (beta = 0) MLE of gamma: log of the floored sample mean.
double nb_mle_null(std::span<const NbSample> history, double dispersion);

/// Full-model MLE from per-group sample means. An empty group contributes no
/// information: its coefficient defaults so the fit reduces to the pooled mean.
NbCoefficients nb_mle_full(std::span<const NbSample> history, double dispersion);

NbCoefficients nb_mle_full(const NbSufficientStats& stats);
double nb_mle_null(const NbSufficientStats& stats);

/// Null log-likelihood at the null MLE, evaluated in closed form from the sums.
double nb_null_loglik(const NbSufficientStats& stats, double dispersion);

/// Log-likelihood of a history under fixed coefficients. Used by oracles.
double nb_loglik(std::span<const NbSample> history, NbCoefficients coefficients,
                 double dispersion);

/// Single universal-inference factor p(y | plug-in) / p(y | null gamma).
double universal_nb_factor(const NbSample& sample, NbCoefficients plug_in, double null_gamma,
                           double dispersion);

void validate_dispersion(double dispersion);

}  // namespace seqebh
