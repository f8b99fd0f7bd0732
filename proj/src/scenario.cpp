#include "seqebh/scenario.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "seqebh/errors.hpp"
#include "seqebh/rng.hpp"
#include "seqebh/text.hpp"

namespace seqebh {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError(std::string(what) + " must lie in [0,1]");
}

void require_rho(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw ParameterError("correlation rho must lie in [-1,1]");
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  const auto dim = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (rows[i].size() != rows.size()) throw ParameterError("covariance matrix must be square");
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::VectorXd draw_latent(const Eigen::MatrixXd& root, std::normal_distribution<double>& normal,
                            Rng& rng) {
  Eigen::VectorXd eps(root.cols());
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps(i) = normal(rng);
  return root * eps;
}

}  // namespace

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

Eigen::MatrixXd covariance_root(const Eigen::MatrixXd& covariance) {
  if (covariance.rows() != covariance.cols() || covariance.rows() == 0) {
    throw ParameterError("covariance matrix must be square and non-empty");
  }
  if (!covariance.allFinite()) throw ParameterError("covariance matrix has non-finite entries");
  const double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ParameterError("covariance matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  Eigen::VectorXd eigenvalues = solver.eigenvalues();
  if (eigenvalues.minCoeff() < -1e-10 * scale) {
    throw ParameterError("covariance matrix is not positive semidefinite");
  }
  eigenvalues = eigenvalues.cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * eigenvalues.asDiagonal();
}

Eigen::MatrixXd equicorrelation(std::size_t dimension, double rho) {
  require_rho(rho);
  const auto dim = static_cast<Eigen::Index>(dimension);
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(dim, dim, rho);
  m.diagonal().setOnes();
  return m;
}

std::int64_t nb_quantile(double u, double mean, double dispersion) {
  if (!(mean > 0.0) || !(dispersion > 0.0)) {
    throw ParameterError("nb_quantile needs positive mean and dispersion");
  }
  const double r = 1.0 / dispersion;
  const double p = mean / (r + mean);
  double pmf = std::exp(-r * std::log1p(mean / r));
  double cdf = pmf;
  std::int64_t k = 0;
  while (cdf < u && 1.0 - cdf > 1e-15) {
    ++k;
    pmf *= (static_cast<double>(k) - 1.0 + r) / static_cast<double>(k) * p;
    cdf += pmf;
    if (pmf == 0.0 && k > mean) break;
  }
  return k;
}

void validate_scenario(const ScenarioKind& kind) {
  std::visit(overloaded{
                 [](const CorrelatedCoins& s) {
                   if (s.theta.empty()) throw ParameterError("coins need at least one stream");
                   for (double t : s.theta) require_probability(t, "coin theta");
                   require_rho(s.rho);
                   covariance_root(equicorrelation(s.theta.size(), s.rho));
                 },
                 [](const MvnScenario& s) {
                   if (s.mean.empty() || s.mean.size() != s.covariance.size()) {
                     throw ParameterError("mvn mean and covariance dimensions disagree");
                   }
                   for (double m : s.mean) {
                     if (!std::isfinite(m)) throw ParameterError("mvn mean must be finite");
                   }
                   covariance_root(to_matrix(s.covariance));
                 },
                 [](const NbGlmScenario& s) {
                   if (s.arms.empty()) throw ParameterError("nb_glm needs at least one arm");
                   for (const auto& a : s.arms) {
                     if (!(a.dispersion > 0.0)) throw ParameterError("nb dispersion must be positive");
                     if (!std::isfinite(a.beta) || !std::isfinite(a.gamma)) {
                       throw ParameterError("nb coefficients must be finite");
                     }
                   }
                   require_probability(s.group_probability, "group probability");
                   require_rho(s.rho);
                   covariance_root(equicorrelation(s.arms.size(), s.rho));
                 },
                 [](const Foreteller& s) {
                   if (s.d != 0 && s.d != 1) throw ParameterError("foreteller d must be 0 or 1");
                   require_probability(s.theta, "foreteller theta");
                 },
             },
             kind);
}

std::size_t hypothesis_count(const ScenarioKind& kind) {
  return std::visit(overloaded{
                        [](const CorrelatedCoins& s) { return s.theta.size(); },
                        [](const MvnScenario& s) { return s.mean.size(); },
                        [](const NbGlmScenario& s) { return s.arms.size(); },
                        [](const Foreteller&) { return std::size_t{2}; },
                    },
                    kind);
}

NullIndicator null_indicator(const ScenarioKind& kind) {
  return std::visit(overloaded{
                        [](const CorrelatedCoins& s) {
                          NullIndicator out;
                          for (double t : s.theta) out.push_back(t == 0.5);
                          return out;
                        },
                        [](const MvnScenario& s) {
                          NullIndicator out;
                          for (double m : s.mean) out.push_back(m <= 0.0);
                          return out;
                        },
                        [](const NbGlmScenario& s) {
                          NullIndicator out;
                          for (const auto& a : s.arms) out.push_back(a.beta == 0.0);
                          return out;
                        },
                        [](const Foreteller& s) { return NullIndicator(2, s.theta == 0.5); },
                    },
                    kind);
}

std::vector<Observation> gen_correlated_coins(const CorrelatedCoins& spec, std::size_t n,
                                              std::uint64_t seed) {
  validate_scenario(spec);
  const Eigen::MatrixXd root = covariance_root(equicorrelation(spec.theta.size(), spec.rho));
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Observation> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const Eigen::VectorXd z = draw_latent(root, normal, rng);
    Observation obs;
    obs.y.resize(spec.theta.size());
    for (std::size_t g = 0; g < spec.theta.size(); ++g) {
      obs.y[g] = standard_normal_cdf(z(static_cast<Eigen::Index>(g))) > 1.0 - spec.theta[g] ? 1.0
                                                                                            : -1.0;
    }
    out.push_back(std::move(obs));
  }
  return out;
}

std::vector<Observation> gen_mvn(const MvnScenario& spec, std::size_t n, std::uint64_t seed) {
  validate_scenario(spec);
  const Eigen::MatrixXd root = covariance_root(to_matrix(spec.covariance));
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Observation> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const Eigen::VectorXd z = draw_latent(root, normal, rng);
    Observation obs;
    obs.y.resize(spec.mean.size());
    for (std::size_t g = 0; g < spec.mean.size(); ++g) {
      obs.y[g] = spec.mean[g] + z(static_cast<Eigen::Index>(g));
    }
    out.push_back(std::move(obs));
  }
  return out;
}

std::vector<Observation> gen_nb_glm(const NbGlmScenario& spec, std::size_t n, std::uint64_t seed) {
  validate_scenario(spec);
  const Eigen::MatrixXd root = covariance_root(equicorrelation(spec.arms.size(), spec.rho));
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<Observation> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    Observation obs;
    const double x = spec.policy == CovariatePolicy::alternating
                         ? static_cast<double>(t % 2)
                         : (uniform(rng) < spec.group_probability ? 1.0 : 0.0);
    obs.x = x;
    const Eigen::VectorXd z = draw_latent(root, normal, rng);
    obs.y.resize(spec.arms.size());
    for (std::size_t g = 0; g < spec.arms.size(); ++g) {
      const auto& arm = spec.arms[g];
      const double mean = std::exp(x * arm.beta + arm.gamma);
      obs.y[g] = static_cast<double>(
          nb_quantile(standard_normal_cdf(z(static_cast<Eigen::Index>(g))), mean, arm.dispersion));
    }
    out.push_back(std::move(obs));
  }
  return out;
}

std::vector<Observation> gen_foreteller(int d, double theta, std::size_t n, std::uint64_t seed) {
  validate_scenario(Foreteller{d, theta});
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> first(n + static_cast<std::size_t>(d));
  for (auto& y : first) y = uniform(rng) < theta ? 1.0 : -1.0;
  std::vector<Observation> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    out.push_back(Observation{std::nullopt, {first[t], first[t + static_cast<std::size_t>(d)]}});
  }
  return out;
}

std::vector<Observation> generate(const ScenarioKind& kind, std::size_t n, std::uint64_t seed) {
  return std::visit(overloaded{
                        [&](const CorrelatedCoins& s) { return gen_correlated_coins(s, n, seed); },
                        [&](const MvnScenario& s) { return gen_mvn(s, n, seed); },
                        [&](const NbGlmScenario& s) { return gen_nb_glm(s, n, seed); },
                        [&](const Foreteller& s) { return gen_foreteller(s.d, s.theta, n, seed); },
                    },
                    kind);
}

std::vector<Observation> generate(const ScenarioSpec& spec) {
  return generate(spec.kind, spec.horizon, spec.seed);
}

void write_stream(std::ostream& out, std::span<const Observation> stream) {
  if (stream.empty()) return;
  out << "n\tx";
  for (std::size_t g = 0; g < stream.front().y.size(); ++g) out << "\ty_" << g + 1;
  out << '\n';
  for (std::size_t t = 0; t < stream.size(); ++t) {
    out << t + 1 << '\t';
    if (stream[t].x) out << format_number(*stream[t].x);
    for (double y : stream[t].y) out << '\t' << format_number(y);
    out << '\n';
  }
}

}  // namespace seqebh
