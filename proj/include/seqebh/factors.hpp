#pragma once

// Stepwise e-value factors. Each is nonnegative and integrates to at most one
// against the null law of a single response given its covariate.

#include <functional>

#include "seqebh/observation.hpp"

namespace seqebh {

/// 1 + y/2 for a fair-coin null; y must be -1 or +1.
double betting_factor(double y);

/// 1 + (y - (2 theta0 - 1)) / 2: the same bet centred at the mean of a
/// Rademacher(theta0) coin. Reduces to betting_factor at theta0 = 1/2.
double betting_factor(double y, double null_theta);

/// exp(eta * y - eta^2 * variance / 2).
double gaussian_factor(double eta, double variance, double y);

/// Density (or mass) of one response given its covariate.
using ConditionalDensity = std::function<double(const Covariate&, double)>;

/// q(y|x) / p(y|x). Returns +inf when only the null density vanishes; throws
/// InputError when both vanish.
double sprt_factor(const ConditionalDensity& null_density, const ConditionalDensity& alt_density,
                   const Covariate& x, double y);

/// Influence function log(1 + x + x^2/2) for x >= 0 and -log(1 - x + x^2/2) below.
double catoni_phi(double x);

/// exp(phi(lambda (y - mu)) - lambda^2 v / 2); valid when E[y] <= mu and Var[y] <= v.
double catoni_factor(double lambda, double mu, double variance_bound, double y);

}  // namespace seqebh
