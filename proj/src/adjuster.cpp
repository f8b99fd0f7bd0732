#include "seqebh/adjuster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "seqebh/errors.hpp"

namespace seqebh {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double table_value(const TableAdjuster& t, double x) {
  if (t.x.size() == 1 || x <= t.x.front()) return t.a.front();
  auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
  std::size_t hi = it == t.x.end() ? t.x.size() - 1 : static_cast<std::size_t>(it - t.x.begin());
  std::size_t lo = hi - 1;
  const double slope = (t.a[hi] - t.a[lo]) / (t.x[hi] - t.x[lo]);
  return t.a[lo] + slope * (x - t.x[lo]);
}

double raw_value(const AdjusterSpec& spec, double x) {
  return std::visit(overloaded{
                        [x](const PowerAdjuster& p) { return p.k * std::pow(x, 1.0 - p.k); },
                        [x](const SqrtMinusOneAdjuster&) { return std::sqrt(x) - 1.0; },
                        [x](const TableAdjuster& t) { return table_value(t, x); },
                    },
                    spec);
}

constexpr int kMaxPanels = 1000;
constexpr double kDivergenceFactor = 10.0;

// integrand(u) = sum_g w_g A_g(1/u) over u in (0,1]; `scale` is G.
template <class F>
IntegralCheck dyadic_integral(F integrand, double scale, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  IntegralCheck out;
  double total = 0.0;
  double previous = 0.0;
  for (int j = 0; j < kMaxPanels; ++j) {
    const double hi = std::ldexp(1.0, -j);
    const double lo = std::ldexp(1.0, -(j + 1));
    const double piece = gauss_kronrod<double, 15>::integrate(integrand, lo, hi, 10, 1e-13);
    total += piece;
    if (!std::isfinite(total) || total > kDivergenceFactor * scale) {
      out.integral_estimate = total;
      out.divergent = true;
      return out;
    }
    if (j >= 2 && previous > 0.0) {
      const double ratio = piece / previous;
      if (ratio < 1.0) {
        const double tail = piece * ratio / (1.0 - ratio);
        if (tail < 1e-3 * tol * scale) {
          out.integral_estimate = total + tail;
          out.pass = out.integral_estimate <= scale * (1.0 + tol);
          return out;
        }
      }
    }
    previous = piece;
  }
  // Contributions stopped shrinking geometrically but never blew up; accept
  // only if the last panel is negligible.
  out.integral_estimate = total;
  if (previous > 1e-3 * tol * scale) {
    out.divergent = true;
    return out;
  }
  out.pass = total <= scale * (1.0 + tol);
  return out;
}

}  // namespace

std::string describe(const AdjusterSpec& spec) {
  return std::visit(overloaded{
                        [](const PowerAdjuster& p) {
                          std::ostringstream os;
                          os << "power(k=" << p.k << ")";
                          return os.str();
                        },
                        [](const SqrtMinusOneAdjuster&) { return std::string("sqrt_minus_one"); },
                        [](const TableAdjuster& t) {
                          return "table(" + std::to_string(t.x.size()) + " knots)";
                        },
                    },
                    spec);
}

void validate_adjuster(const AdjusterSpec& spec) {
  if (const auto* p = std::get_if<PowerAdjuster>(&spec)) {
    if (!(p->k > 0.0 && p->k < 1.0)) throw SpecError("power adjuster needs k in (0,1)");
  } else if (const auto* t = std::get_if<TableAdjuster>(&spec)) {
    if (t->x.empty() || t->x.size() != t->a.size()) {
      throw SpecError("adjuster table needs matching, non-empty x and A(x) columns");
    }
    for (std::size_t i = 0; i < t->x.size(); ++i) {
      if (!std::isfinite(t->x[i]) || !std::isfinite(t->a[i])) {
        throw SpecError("adjuster table entries must be finite");
      }
      if (t->a[i] < 0.0) throw SpecError("adjuster table values must be nonnegative");
      if (i > 0 && !(t->x[i] > t->x[i - 1])) {
        throw SpecError("adjuster table x column must be strictly increasing");
      }
      if (i > 0 && t->a[i] < t->a[i - 1]) {
        throw SpecError("adjuster table is not non-decreasing");
      }
    }
  }
}

double adjuster_value(const AdjusterSpec& spec, double x) {
  if (std::isnan(x) || x < 1.0) throw InputError("adjusters are defined on [1, inf)");
  validate_adjuster(spec);
  return raw_value(spec, x);
}

IntegralCheck adjuster_validity(const AdjusterSpec& spec, double tol) {
  if (!(tol > 0.0)) throw ParameterError("quadrature tolerance must be positive");
  validate_adjuster(spec);
  return dyadic_integral([&spec](double u) { return raw_value(spec, 1.0 / u); }, 1.0, tol);
}

IntegralCheck compound_adjuster_validity(const CompoundAdjusterSpec& spec, double tol) {
  if (!(tol > 0.0)) throw ParameterError("quadrature tolerance must be positive");
  if (spec.components.empty()) throw SpecError("compound adjuster needs at least one component");
  if (!spec.weights.empty() && spec.weights.size() != spec.components.size()) {
    throw SpecError("compound adjuster weights must match the component count");
  }
  for (const auto& c : spec.components) validate_adjuster(c);
  for (double w : spec.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw SpecError("compound weights must be nonnegative");
  }
  auto weight = [&spec](std::size_t g) { return spec.weights.empty() ? 1.0 : spec.weights[g]; };
  auto integrand = [&](double u) {
    double s = 0.0;
    for (std::size_t g = 0; g < spec.components.size(); ++g) {
      const double w = weight(g);
      if (w != 0.0) s += w * raw_value(spec.components[g], 1.0 / u);
    }
    return s;
  };
  return dyadic_integral(integrand, static_cast<double>(spec.components.size()), tol);
}

double elift(const EProcessState& state, const AdjusterSpec& spec) {
  validate_adjuster(spec);
  if (state.n == 0) return 1.0;
  return raw_value(spec, std::max(1.0, state.running_max()));
}

TableAdjuster load_adjuster_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open adjuster table " + path.string());
  TableAdjuster t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x = 0.0, a = 0.0;
    if (!(ls >> x)) continue;
    std::string extra;
    if (!(ls >> a) || (ls >> extra)) {
      throw SpecError(path.string() + ":" + std::to_string(lineno) +
                      ": expected two columns (x, A(x))");
    }
    t.x.push_back(x);
    t.a.push_back(a);
  }
  validate_adjuster(t);
  return t;
}

}  // namespace seqebh
