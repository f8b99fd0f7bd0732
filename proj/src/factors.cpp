#include "seqebh/factors.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "seqebh/errors.hpp"

namespace seqebh {

namespace {

void require_coin(double y) {
  if (y != 1.0 && y != -1.0) {
    throw InputError("betting factor needs a response in {-1,+1}, got " + std::to_string(y));
  }
}

}  // namespace

double betting_factor(double y) {
  require_coin(y);
  return 1.0 + y / 2.0;
}

double betting_factor(double y, double null_theta) {
  require_coin(y);
  if (!(null_theta >= 0.0 && null_theta <= 1.0)) {
    throw ParameterError("betting null theta must lie in [0,1]");
  }
  return 1.0 + (y - (2.0 * null_theta - 1.0)) / 2.0;
}

double gaussian_factor(double eta, double variance, double y) {
  if (!(variance > 0.0)) throw ParameterError("gaussian factor needs a positive variance");
  if (!std::isfinite(eta)) throw ParameterError("gaussian factor needs a finite rate");
  return std::exp(eta * y - eta * eta * variance / 2.0);
}

double sprt_factor(const ConditionalDensity& null_density, const ConditionalDensity& alt_density,
                   const Covariate& x, double y) {
  const double p = null_density(x, y);
  const double q = alt_density(x, y);
  if (std::isnan(p) || std::isnan(q) || p < 0.0 || q < 0.0) {
    throw InputError("sprt densities must be nonnegative numbers");
  }
  if (p == 0.0) {
    if (q == 0.0) throw InputError("sprt: both densities vanish at the observed response");
    return std::numeric_limits<double>::infinity();
  }
  return q / p;
}

double catoni_phi(double x) {
  if (x >= 0.0) return std::log1p(x + x * x / 2.0);
  return -std::log1p(-x + x * x / 2.0);
}

double catoni_factor(double lambda, double mu, double variance_bound, double y) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("catoni factor needs a positive finite lambda");
  }
  if (!(variance_bound >= 0.0)) throw ParameterError("catoni variance bound must be nonnegative");
  return std::exp(catoni_phi(lambda * (y - mu)) - lambda * lambda * variance_bound / 2.0);
}

}  // namespace seqebh
