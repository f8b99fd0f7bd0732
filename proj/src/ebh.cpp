#include "seqebh/ebh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "seqebh/errors.hpp"

namespace seqebh {

RejectionSet::RejectionSet(std::size_t hypotheses, std::vector<std::size_t> members)
    : hypotheses_(hypotheses), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!members_.empty() && members_.back() >= hypotheses_) {
    throw InputError("rejection set member " + std::to_string(members_.back()) +
                     " out of range for G=" + std::to_string(hypotheses_));
  }
}

bool RejectionSet::contains(std::size_t g) const {
  return std::binary_search(members_.begin(), members_.end(), g);
}

std::string RejectionSet::bitmask() const {
  std::string mask(hypotheses_, '0');
  for (auto g : members_) mask[g] = '1';
  return mask;
}

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ParameterError("alpha must lie in (0,1), got " + std::to_string(alpha));
  }
}

void validate_evalues(std::span<const double> evalues) {
  if (evalues.empty()) throw InputError("e-value vector is empty");
  for (std::size_t g = 0; g < evalues.size(); ++g) {
    if (std::isnan(evalues[g])) throw InputError("e-value " + std::to_string(g) + " is NaN");
    if (evalues[g] < 0.0) throw InputError("e-value " + std::to_string(g) + " is negative");
  }
}

double ebh_threshold(std::size_t hypotheses, double alpha, std::size_t k) {
  return (static_cast<double>(hypotheses) / alpha) / static_cast<double>(k);
}

RejectionSet ebh(std::span<const double> evalues, double alpha) {
  validate_alpha(alpha);
  validate_evalues(evalues);
  const std::size_t hypotheses = evalues.size();

  std::vector<double> sorted(evalues.begin(), evalues.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // Largest k whose k-th largest e-value clears the step-up threshold.
  std::size_t k_star = 0;
  for (std::size_t k = hypotheses; k >= 1; --k) {
    if (sorted[k - 1] >= ebh_threshold(hypotheses, alpha, k)) {
      k_star = k;
      break;
    }
  }
  if (k_star == 0) return RejectionSet(hypotheses);

  const double cut = sorted[k_star - 1];
  std::vector<std::size_t> members;
  for (std::size_t g = 0; g < hypotheses; ++g) {
    if (evalues[g] >= cut) members.push_back(g);
  }
  return RejectionSet(hypotheses, std::move(members));
}

RejectionSet bh(std::span<const double> pvalues, double alpha) {
  validate_alpha(alpha);
  if (pvalues.empty()) throw InputError("p-value vector is empty");
  for (std::size_t g = 0; g < pvalues.size(); ++g) {
    if (std::isnan(pvalues[g])) throw InputError("p-value " + std::to_string(g) + " is NaN");
    if (pvalues[g] < 0.0) throw InputError("p-value " + std::to_string(g) + " is negative");
  }
  const std::size_t hypotheses = pvalues.size();
  std::vector<double> sorted(pvalues.begin(), pvalues.end());
  std::sort(sorted.begin(), sorted.end());

  std::size_t k_star = 0;
  for (std::size_t k = hypotheses; k >= 1; --k) {
    if (sorted[k - 1] <= static_cast<double>(k) * alpha / static_cast<double>(hypotheses)) {
      k_star = k;
      break;
    }
  }
  if (k_star == 0) return RejectionSet(hypotheses);

  const double cut = sorted[k_star - 1];
  std::vector<std::size_t> members;
  for (std::size_t g = 0; g < hypotheses; ++g) {
    if (pvalues[g] <= cut) members.push_back(g);
  }
  return RejectionSet(hypotheses, std::move(members));
}

std::vector<double> reciprocals(std::span<const double> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) {
    if (v == 0.0) {
      out.push_back(std::numeric_limits<double>::infinity());
    } else if (std::isinf(v)) {
      out.push_back(0.0);
    } else {
      out.push_back(1.0 / v);
    }
  }
  return out;
}

double fdp(const RejectionSet& rejections, const NullIndicator& truth) {
  if (truth.size() != rejections.hypotheses()) {
    throw InputError("fdp: rejection set has G=" + std::to_string(rejections.hypotheses()) +
                     " but null indicator has " + std::to_string(truth.size()) + " entries");
  }
  std::size_t false_rejections = 0;
  for (auto g : rejections.members()) {
    if (truth[g]) ++false_rejections;
  }
  return static_cast<double>(false_rejections) /
         static_cast<double>(std::max<std::size_t>(1, rejections.size()));
}

EValueVector compound_from_rejection(const RejectionSet& rejections, double alpha) {
  validate_alpha(alpha);
  EValueVector out(rejections.hypotheses(), 0.0);
  if (rejections.empty()) return out;
  const double value = ebh_threshold(rejections.hypotheses(), alpha, rejections.size());
  for (auto g : rejections.members()) out[g] = value;
  return out;
}

CompoundValidityEstimate compound_validity_mc(const CompoundSampler& sampler, std::size_t trials,
                                              std::uint64_t seed) {
  if (trials < 100) throw ParameterError("compound_validity_mc needs at least 100 trials");
  std::mt19937_64 rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t hypotheses = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto [evalues, truth] = sampler(rng);
    if (evalues.size() != truth.size()) {
      throw InputError("compound sampler returned mismatched e-value and truth lengths");
    }
    validate_evalues(evalues);
    if (t == 0) hypotheses = evalues.size();
    double sum = 0.0;
    for (std::size_t g = 0; g < evalues.size(); ++g) {
      if (truth[g]) sum += evalues[g];
    }
    // Welford
    const double delta = sum - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (sum - mean);
  }
  CompoundValidityEstimate est;
  est.trials = trials;
  est.mean_sum = mean;
  est.std_error = std::sqrt(m2 / static_cast<double>(trials - 1) / static_cast<double>(trials));
  est.pass = est.mean_sum <= static_cast<double>(hypotheses) + 3.0 * est.std_error;
  return est;
}

}  // namespace seqebh
