#include "seqebh/stopping.hpp"

#include <sstream>

#include "seqebh/errors.hpp"

namespace seqebh {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

bool evaluate_rule(const StoppingRule& rule, const RuleContext& context) {
  return std::visit(
      overloaded{
          [&](const FixedHorizon& r) { return context.n >= r.steps; },
          [&](const ThresholdRule& r) {
            if (r.hypothesis >= context.evalues.size()) {
              throw InputError("threshold rule names hypothesis " + std::to_string(r.hypothesis) +
                               " but G=" + std::to_string(context.evalues.size()));
            }
            return context.evalues[r.hypothesis] >= r.level;
          },
          [&](const RejectionCount& r) {
            return context.rejections != nullptr && context.rejections->size() >= r.k;
          },
          [&](const FirstOf& r) {
            for (const auto& child : r.rules) {
              if (evaluate_rule(child, context)) return true;
            }
            return false;
          },
          [&](const CustomRule& r) {
            if (!r.predicate) throw RuleError("custom rule '" + r.name + "' has no predicate");
            try {
              return r.predicate(context);
            } catch (const std::exception& e) {
              throw RuleError("custom rule '" + r.name + "' failed: " + e.what());
            }
          },
      },
      rule.kind);
}

std::string describe(const StoppingRule& rule) {
  return std::visit(overloaded{
                        [](const FixedHorizon& r) {
                          return "fixed_horizon(" + std::to_string(r.steps) + ")";
                        },
                        [](const ThresholdRule& r) {
                          std::ostringstream os;
                          os << "threshold(h" << r.hypothesis + 1 << " >= " << r.level << ")";
                          return os.str();
                        },
                        [](const RejectionCount& r) {
                          return "rejection_count(" + std::to_string(r.k) + ")";
                        },
                        [](const FirstOf& r) {
                          std::string out = "first_of(";
                          for (std::size_t i = 0; i < r.rules.size(); ++i) {
                            if (i) out += ", ";
                            out += describe(r.rules[i]);
                          }
                          return out + ")";
                        },
                        [](const CustomRule& r) { return "custom(" + r.name + ")"; },
                    },
                    rule.kind);
}

}  // namespace seqebh
