#pragma once

// Adjusters: non-decreasing A on [1, inf) with integral_1^inf A(x)/x^2 dx <= 1.
// Applied to the running maximum of a local e-process ("e-lifting") they give
// an e-process on any finer filtration.

#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "seqebh/eprocess.hpp"

namespace seqebh {

struct PowerAdjuster {
  double k = 0.5;  // in (0,1); A(x) = k x^(1-k)
};

struct SqrtMinusOneAdjuster {};  // A(x) = sqrt(x) - 1

/// Piecewise-linear interpolation through knots with strictly increasing x.
/// Below the first knot the first value is used; beyond the last knot the
/// final segment is extended linearly.
struct TableAdjuster {
  std::vector<double> x;
  std::vector<double> a;
};

using AdjusterSpec = std::variant<PowerAdjuster, SqrtMinusOneAdjuster, TableAdjuster>;

std::string describe(const AdjusterSpec& spec);

/// Throws SpecError on a malformed spec (k outside (0,1), non-monotone or negative table).
void validate_adjuster(const AdjusterSpec& spec);

/// A(x) for x >= 1. Throws InputError for x < 1.
double adjuster_value(const AdjusterSpec& spec, double x);

struct IntegralCheck {
  double integral_estimate = 0.0;
  bool divergent = false;
  bool pass = false;
};

/// Integrates A(x)/x^2 over [1, inf) after the substitution u = 1/x, summing
/// dyadic panels of (0,1] towards zero with a geometric tail estimate.
/// Divergence is declared once the partial sum exceeds 10.
IntegralCheck adjuster_validity(const AdjusterSpec& spec, double tol);

/// Monotone nonnegative components with optional nonnegative weights (default 1).
struct CompoundAdjusterSpec {
  std::vector<AdjusterSpec> components;
  std::vector<double> weights;
};

/// Quadrature of sum_g w_g A_g(x) / x^2; passes iff the result is <= G (1 + tol).
IntegralCheck compound_adjuster_validity(const CompoundAdjusterSpec& spec, double tol);

/// A(max_{i<=n} M_i), with the convention 1 at n = 0.
double elift(const EProcessState& state, const AdjusterSpec& spec);

/// Two whitespace-separated columns (x, A(x)) per line; '#' starts a comment.
TableAdjuster load_adjuster_table(const std::filesystem::path& path);

}  // namespace seqebh
