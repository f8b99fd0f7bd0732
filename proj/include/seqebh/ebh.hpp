#pragma once

// Fixed-time e-value machinery: the e-BH and BH step-up rules, false discovery
// proportion accounting, and compound e-values.
//
// Hypotheses are indexed 0..G-1 throughout the C++ API. Files and configs
// written for humans use 1-based indices.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace seqebh {

/// Per-hypothesis nonnegative scores; +infinity is allowed, NaN is not.
using EValueVector = std::vector<double>;

/// Ground truth per hypothesis (true means the null holds). Simulation-side only.
using NullIndicator = std::vector<bool>;

class RejectionSet {
 public:
  RejectionSet() = default;
  explicit RejectionSet(std::size_t hypotheses) : hypotheses_(hypotheses) {}
  /// Throws InputError if a member is out of range. Members are sorted and deduplicated.
  RejectionSet(std::size_t hypotheses, std::vector<std::size_t> members);

  std::size_t hypotheses() const { return hypotheses_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(std::size_t g) const;
  const std::vector<std::size_t>& members() const { return members_; }

  /// One '0'/'1' character per hypothesis, position g for hypothesis g.
  std::string bitmask() const;

  friend bool operator==(const RejectionSet&, const RejectionSet&) = default;

 private:
  std::size_t hypotheses_ = 0;
  std::vector<std::size_t> members_;
};

/// Throws InputError on an empty vector, a negative entry or NaN.
void validate_evalues(std::span<const double> evalues);

/// (G / alpha) / k, the e-value a hypothesis needs when k rejections are made.
double ebh_threshold(std::size_t hypotheses, double alpha, std::size_t k);

/// e-BH at level alpha: rejects {g : E_g >= E_(k*)} where k* is the largest k
/// with k * E_(k) / G >= 1 / alpha, or nothing if no k qualifies.
RejectionSet ebh(std::span<const double> evalues, double alpha);

/// Benjamini-Hochberg step-up on p-values in [0, inf]; values above 1 never reject.
RejectionSet bh(std::span<const double> pvalues, double alpha);

/// Elementwise reciprocal with 1/0 = inf and 1/inf = 0.
std::vector<double> reciprocals(std::span<const double> values);

/// (#true-null rejections) / max(1, |R|).
double fdp(const RejectionSet& rejections, const NullIndicator& truth);

/// Entry g is (G / alpha) / max(1, |R|) when g is in R and 0 otherwise.
/// e-BH at the same alpha maps the result back to R.
EValueVector compound_from_rejection(const RejectionSet& rejections, double alpha);

struct CompoundValidityEstimate {
  double mean_sum = 0.0;  // Monte Carlo mean of sum_g 1{null g} E_g
  double std_error = 0.0;
  std::size_t trials = 0;
  bool pass = false;      // mean_sum <= G + 3 * std_error
};

using CompoundSampler = std::function<std::pair<EValueVector, NullIndicator>(std::mt19937_64&)>;

/// Monte Carlo check of the compound e-value condition. Requires trials >= 100.
CompoundValidityEstimate compound_validity_mc(const CompoundSampler& sampler, std::size_t trials,
                                              std::uint64_t seed);

void validate_alpha(double alpha);

}  // namespace seqebh
