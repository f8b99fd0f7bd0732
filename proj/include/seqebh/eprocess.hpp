#pragma once

// Per-hypothesis e-process state kept in the log domain, the product
// (supermartingale) update, the universal-inference NB update, and the
// infimum over a finite grid of null parameters.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "seqebh/negative_binomial.hpp"

namespace seqebh {

enum class Family { betting, gaussian, sprt, universal_nb, catoni, composite };

std::string_view family_name(Family family);
Family parse_family(std::string_view name);

struct EProcessState {
  Family family = Family::betting;
  std::size_t n = 0;
  double log_value = 0.0;        // log M_n, may be -inf
  double log_running_max = 0.0;  // log max_{0<=i<=n} M_i, never below 0
  std::variant<std::monostate, NbSufficientStats> suff_stats;

  double value() const;
  double running_max() const;

  friend bool operator==(const EProcessState&, const EProcessState&) = default;
};

EProcessState initial_state(Family family);

/// Multiplies the process by a nonnegative factor (0 absorbs, +inf allowed).
/// Throws InputError on a negative or NaN factor.
EProcessState product_update(EProcessState state, double factor);

/// Same update from a log-factor; -inf absorbs.
EProcessState product_update_log(EProcessState state, double log_factor);

/// Universal-inference step for the NB GLM: the numerator gains the
/// predictive log-pmf under the MLE of the first n samples ((0,0) before any
/// data), the denominator is recomputed at the refreshed null MLE.
EProcessState universal_nb_update(EProcessState state, const NbSample& sample, double dispersion);

/// min over the grid of current process values. Throws InputError on an empty grid.
double infimum_process(std::span<const EProcessState> states);
double log_infimum_process(std::span<const EProcessState> states);

/// Single-line checkpoint record:
///   family=<tag>;n=<n>;log_value=<v>;log_running_max=<v>;suff=<fields>
/// suff is empty or, for universal_nb, the comma-separated fields
///   count0,count1,sum0,sum1,log_numerator,sum_lgamma_y_plus_r,sum_lgamma_y_plus_1
/// Doubles use the shortest round-trip representation, so parsing restores the
/// state bit for bit.
std::string serialize_state(const EProcessState& state);
EProcessState parse_state(std::string_view record);

}  // namespace seqebh
