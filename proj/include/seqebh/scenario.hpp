#pragma once

// Data generators for Monte Carlo experiments. Cross-hypothesis dependence
// within a tick comes from a Gaussian copula; ticks are independent given
// their covariates except in the foreteller scenario, which is built to break
// that.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "seqebh/ebh.hpp"
#include "seqebh/observation.hpp"

namespace seqebh {

/// Y^g = +1 with probability theta^g, latent correlation rho across g.
struct CorrelatedCoins {
  std::vector<double> theta;
  double rho = 0.0;
};

/// i.i.d. N(mean, covariance) responses, no covariate.
struct MvnScenario {
  std::vector<double> mean;
  std::vector<std::vector<double>> covariance;
};

struct NbArm {
  double beta = 0.0;
  double gamma = 0.0;
  double dispersion = 1.0;
};

enum class CovariatePolicy {
  bernoulli,   // x_n ~ Bernoulli(group_probability), independent of everything
  alternating  // 0, 1, 0, 1, ...
};

struct NbGlmScenario {
  std::vector<NbArm> arms;
  CovariatePolicy policy = CovariatePolicy::bernoulli;
  double group_probability = 0.5;
  double rho = 0.0;
};

/// Two coin streams with Y^2_n = Y^1_{n+d}.
struct Foreteller {
  int d = 1;
  double theta = 0.5;
};

using ScenarioKind = std::variant<CorrelatedCoins, MvnScenario, NbGlmScenario, Foreteller>;

struct ScenarioSpec {
  ScenarioKind kind;
  std::size_t horizon = 50;
  std::uint64_t seed = 0;
};

/// Throws ParameterError on invalid parameters (|rho| > 1, non-PSD matrices, ...).
void validate_scenario(const ScenarioKind& kind);

std::size_t hypothesis_count(const ScenarioKind& kind);

/// Ground truth for the canonical nulls: fair coin (theta = 1/2), mean <= 0
/// for mvn, beta = 0 for the NB GLM, theta = 1/2 for both foreteller streams.
NullIndicator null_indicator(const ScenarioKind& kind);

std::vector<Observation> gen_correlated_coins(const CorrelatedCoins& spec, std::size_t n,
                                              std::uint64_t seed);
std::vector<Observation> gen_mvn(const MvnScenario& spec, std::size_t n, std::uint64_t seed);
std::vector<Observation> gen_nb_glm(const NbGlmScenario& spec, std::size_t n, std::uint64_t seed);
/// Tick n carries (Y^1_n, Y^1_{n+d}).
std::vector<Observation> gen_foreteller(int d, double theta, std::size_t n, std::uint64_t seed);

std::vector<Observation> generate(const ScenarioKind& kind, std::size_t n, std::uint64_t seed);
std::vector<Observation> generate(const ScenarioSpec& spec);

/// Matrix root L with L L^T = covariance, via the symmetric eigendecomposition
/// so semidefinite (e.g. comonotone) matrices work. Throws ParameterError if
/// the matrix is not symmetric PSD.
Eigen::MatrixXd covariance_root(const Eigen::MatrixXd& covariance);
Eigen::MatrixXd equicorrelation(std::size_t dimension, double rho);

double standard_normal_cdf(double z);

/// Smallest k with NB2 cdf(k) >= u, by summing the pmf.
std::int64_t nb_quantile(double u, double mean, double dispersion);

/// Header "n\tx\ty_1..y_G" then one row per tick; x is empty when absent.
void write_stream(std::ostream& out, std::span<const Observation> stream);

}  // namespace seqebh
