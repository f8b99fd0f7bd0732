#include "seqebh/eprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "seqebh/errors.hpp"
#include "seqebh/text.hpp"

namespace seqebh {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double parse_double(std::string_view text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InputError("state record: malformed number '" + std::string(text) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view text) {
  std::size_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InputError("state record: malformed count '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

void advance(EProcessState& state, double log_value) {
  state.n += 1;
  state.log_value = log_value;
  state.log_running_max = std::max(state.log_running_max, log_value);
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::betting: return "betting";
    case Family::gaussian: return "gaussian";
    case Family::sprt: return "sprt";
    case Family::universal_nb: return "universal_nb";
    case Family::catoni: return "catoni";
    case Family::composite: return "composite";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (auto f : {Family::betting, Family::gaussian, Family::sprt, Family::universal_nb,
                 Family::catoni, Family::composite}) {
    if (family_name(f) == name) return f;
  }
  throw InputError("unknown process family '" + std::string(name) + "'");
}

double EProcessState::value() const { return std::exp(log_value); }
double EProcessState::running_max() const { return std::exp(log_running_max); }

EProcessState initial_state(Family family) {
  EProcessState state;
  state.family = family;
  if (family == Family::universal_nb) state.suff_stats = NbSufficientStats{};
  return state;
}

EProcessState product_update(EProcessState state, double factor) {
  if (std::isnan(factor) || factor < 0.0) {
    throw InputError("product update needs a nonnegative factor, got " + std::to_string(factor));
  }
  return product_update_log(std::move(state), factor == 0.0 ? kNegInf : std::log(factor));
}

EProcessState product_update_log(EProcessState state, double log_factor) {
  if (std::isnan(log_factor)) throw InputError("product update: NaN log-factor");
  // Once absorbed at zero the process stays there, even against an infinite factor.
  const double next = state.log_value == kNegInf ? kNegInf : state.log_value + log_factor;
  advance(state, next);
  return state;
}

EProcessState universal_nb_update(EProcessState state, const NbSample& sample, double dispersion) {
  validate_dispersion(dispersion);
  if (sample.group != 0 && sample.group != 1) {
    throw InputError("universal NB update needs a binary covariate");
  }
  if (sample.count < 0) throw InputError("universal NB update needs a nonnegative count");
  auto* stats = std::get_if<NbSufficientStats>(&state.suff_stats);
  if (state.family != Family::universal_nb || stats == nullptr) {
    throw InputError("universal NB update applied to a non-NB process state");
  }

  const NbCoefficients plug_in = state.n == 0 ? NbCoefficients{} : nb_mle_full(*stats);
  const double mean = std::exp(sample.group * plug_in.beta + plug_in.gamma);
  stats->log_numerator += nb_logpmf(sample.count, mean, dispersion);

  const double r = 1.0 / dispersion;
  const double y = static_cast<double>(sample.count);
  stats->count[sample.group] += 1;
  stats->sum[sample.group] += y;
  stats->sum_lgamma_y_plus_r += std::lgamma(y + r);
  stats->sum_lgamma_y_plus_1 += std::lgamma(y + 1.0);

  advance(state, stats->log_numerator - nb_null_loglik(*stats, dispersion));
  return state;
}

double log_infimum_process(std::span<const EProcessState> states) {
  if (states.empty()) throw InputError("infimum over an empty null grid");
  double out = std::numeric_limits<double>::infinity();
  for (const auto& s : states) out = std::min(out, s.log_value);
  return out;
}

double infimum_process(std::span<const EProcessState> states) {
  return std::exp(log_infimum_process(states));
}

std::string serialize_state(const EProcessState& state) {
  std::string out = "family=";
  out += family_name(state.family);
  out += ";n=" + std::to_string(state.n);
  out += ";log_value=" + format_number(state.log_value);
  out += ";log_running_max=" + format_number(state.log_running_max);
  out += ";suff=";
  if (const auto* s = std::get_if<NbSufficientStats>(&state.suff_stats)) {
    out += std::to_string(s->count[0]) + "," + std::to_string(s->count[1]) + "," +
           format_number(s->sum[0]) + "," + format_number(s->sum[1]) + "," +
           format_number(s->log_numerator) + "," + format_number(s->sum_lgamma_y_plus_r) + "," +
           format_number(s->sum_lgamma_y_plus_1);
  }
  return out;
}

EProcessState parse_state(std::string_view record) {
  static constexpr std::string_view keys[] = {"family", "n", "log_value", "log_running_max",
                                              "suff"};
  auto fields = split(record, ';');
  if (fields.size() != std::size(keys)) {
    throw InputError("state record must have 5 ';'-separated fields");
  }
  std::string_view values[std::size(keys)];
  for (std::size_t i = 0; i < fields.size(); ++i) {
    auto eq = fields[i].find('=');
    if (eq == std::string_view::npos || fields[i].substr(0, eq) != keys[i]) {
      throw InputError("state record: expected field '" + std::string(keys[i]) + "' at position " +
                       std::to_string(i));
    }
    values[i] = fields[i].substr(eq + 1);
  }
  EProcessState state;
  state.family = parse_family(values[0]);
  state.n = parse_count(values[1]);
  state.log_value = parse_double(values[2]);
  state.log_running_max = parse_double(values[3]);
  if (state.family == Family::universal_nb) {
    auto parts = split(values[4], ',');
    if (parts.size() != 7) throw InputError("universal_nb state needs 7 sufficient statistics");
    NbSufficientStats s;
    s.count[0] = parse_count(parts[0]);
    s.count[1] = parse_count(parts[1]);
    s.sum[0] = parse_double(parts[2]);
    s.sum[1] = parse_double(parts[3]);
    s.log_numerator = parse_double(parts[4]);
    s.sum_lgamma_y_plus_r = parse_double(parts[5]);
    s.sum_lgamma_y_plus_1 = parse_double(parts[6]);
    state.suff_stats = s;
  } else if (!values[4].empty()) {
    throw InputError("state record: family " + std::string(values[0]) +
                     " carries no sufficient statistics");
  }
  if (state.log_running_max < 0.0 || state.log_running_max < state.log_value) {
    throw InputError("state record: running max below current value or below 1");
  }
  return state;
}

}  // namespace seqebh
