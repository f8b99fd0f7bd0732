#include "seqebh/negative_binomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqebh/errors.hpp"

namespace seqebh {

namespace {

void validate_sample(const NbSample& s) {
  if (s.group != 0 && s.group != 1) {
    throw InputError("negative binomial covariate must be 0 or 1, got " + std::to_string(s.group));
  }
  if (s.count < 0) throw InputError("negative binomial count must be nonnegative");
}

NbSufficientStats accumulate(std::span<const NbSample> history) {
  NbSufficientStats stats;
  for (const auto& s : history) {
    validate_sample(s);
    stats.count[s.group] += 1;
    stats.sum[s.group] += static_cast<double>(s.count);
  }
  return stats;
}

double floored_log_mean(double sum, std::size_t count) {
  return std::log(std::max(sum / static_cast<double>(count), kMeanFloor));
}

}  // namespace

void validate_dispersion(double dispersion) {
  if (!(dispersion > 0.0) || !std::isfinite(dispersion)) {
    throw ParameterError("negative binomial dispersion must be positive and finite");
  }
}

double nb_logpmf(std::int64_t y, double mean, double dispersion) {
  validate_dispersion(dispersion);
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw ParameterError("negative binomial mean must be positive and finite");
  }
  if (y < 0) throw InputError("negative binomial count must be nonnegative");
  const double r = 1.0 / dispersion;
  const double yd = static_cast<double>(y);
  double out = std::lgamma(yd + r) - std::lgamma(r) - std::lgamma(yd + 1.0) -
               r * std::log1p(mean / r);
  if (y > 0) out += yd * (std::log(mean) - std::log(r + mean));
  return out;
}

NbCoefficients nb_mle_full(const NbSufficientStats& stats) {
  const std::size_t n = stats.total_count();
  if (n == 0) throw InputError("negative binomial MLE needs a non-empty history");
  NbCoefficients c;
  if (stats.count[0] == 0 || stats.count[1] == 0) {
    c.gamma = floored_log_mean(stats.total_sum(), n);
    c.beta = 0.0;
    return c;
  }
  c.gamma = floored_log_mean(stats.sum[0], stats.count[0]);
  c.beta = floored_log_mean(stats.sum[1], stats.count[1]) - c.gamma;
  return c;
}

double nb_mle_null(const NbSufficientStats& stats) {
  const std::size_t n = stats.total_count();
  if (n == 0) throw InputError("negative binomial MLE needs a non-empty history");
  return floored_log_mean(stats.total_sum(), n);
}

double nb_mle_null(std::span<const NbSample> history, double dispersion) {
  validate_dispersion(dispersion);
  return nb_mle_null(accumulate(history));
}

NbCoefficients nb_mle_full(std::span<const NbSample> history, double dispersion) {
  validate_dispersion(dispersion);
  return nb_mle_full(accumulate(history));
}

double nb_null_loglik(const NbSufficientStats& stats, double dispersion) {
  validate_dispersion(dispersion);
  const double r = 1.0 / dispersion;
  const double n = static_cast<double>(stats.total_count());
  const double s = stats.total_sum();
  const double mean = std::exp(nb_mle_null(stats));
  double out = stats.sum_lgamma_y_plus_r - n * std::lgamma(r) - stats.sum_lgamma_y_plus_1 -
               n * r * std::log1p(mean / r);
  if (s > 0.0) out += s * (std::log(mean) - std::log(r + mean));
  return out;
}

double nb_loglik(std::span<const NbSample> history, NbCoefficients coefficients,
                 double dispersion) {
  double out = 0.0;
  for (const auto& s : history) {
    validate_sample(s);
    out += nb_logpmf(s.count, std::exp(s.group * coefficients.beta + coefficients.gamma),
                     dispersion);
  }
  return out;
}

double universal_nb_factor(const NbSample& sample, NbCoefficients plug_in, double null_gamma,
                           double dispersion) {
  validate_sample(sample);
  const double num =
      nb_logpmf(sample.count, std::exp(sample.group * plug_in.beta + plug_in.gamma), dispersion);
  const double den = nb_logpmf(sample.count, std::exp(null_gamma), dispersion);
  return std::exp(num - den);
}

}  // namespace seqebh
