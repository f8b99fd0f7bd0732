#include "seqebh/session.hpp"

#include <ostream>
#include <string>

#include "seqebh/errors.hpp"
#include "seqebh/text.hpp"

namespace seqebh {

Session::Session(std::vector<std::unique_ptr<LocalProcess>> processes, double alpha)
    : processes_(std::move(processes)), alpha_(alpha) {
  validate_alpha(alpha);
  if (processes_.empty()) throw InputError("session needs at least one process");
  for (const auto& p : processes_) {
    if (!p) throw InputError("session given a null process");
  }
  evalues_.assign(processes_.size(), 1.0);
  base_values_.assign(processes_.size(), 1.0);
  rejections_ = ebh(evalues_, alpha_);
}

const TrajectoryRecord& Session::step(const Observation& observation, Covariate next_covariate) {
  if (observation.y.size() != processes_.size()) {
    throw InputError("observation carries " + std::to_string(observation.y.size()) +
                     " responses for " + std::to_string(processes_.size()) + " hypotheses");
  }
  // Each process touches only its own state; a parallel loop would need just a
  // barrier before e-BH.
  for (std::size_t g = 0; g < processes_.size(); ++g) {
    processes_[g]->observe(observation.x, observation.y[g]);
    evalues_[g] = processes_[g]->evalue();
    base_values_[g] = processes_[g]->base_value();
  }
  rejections_ = ebh(evalues_, alpha_);
  next_covariate_ = next_covariate;
  history_.push_back(TrajectoryRecord{history_.size() + 1, evalues_, rejections_});
  return history_.back();
}

RuleContext Session::context() const {
  RuleContext ctx;
  ctx.n = n();
  ctx.evalues = evalues_;
  ctx.base_values = base_values_;
  ctx.rejections = &rejections_;
  ctx.next_covariate = next_covariate_;
  return ctx;
}

bool evaluate_stop(const StoppingRule& rule, const Session& session) {
  return evaluate_rule(rule, session.context());
}

std::optional<Observation> VectorStream::next() {
  if (exhausted()) return std::nullopt;
  return observations_[position_++];
}

Covariate VectorStream::peek_covariate() const {
  if (exhausted()) return std::nullopt;
  return observations_[position_].x;
}

StoppedResult run(Session& session, ObservationStream& stream, const StoppingRule& rule) {
  if (stream.exhausted()) throw InputError("run needs a stream with at least one observation");
  StoppedResult result;
  while (auto obs = stream.next()) {
    session.step(*obs, stream.peek_covariate());
    if (evaluate_stop(rule, session)) {
      result.rule_fired = true;
      break;
    }
  }
  result.tau = session.n();
  result.evalues = session.evalues();
  result.base_values = session.base_values();
  result.rejections = session.rejections();
  result.trajectory = session.history();
  return result;
}

StoppedResult run(Session& session, std::span<const Observation> stream, const StoppingRule& rule) {
  VectorStream s(stream);
  return run(session, s, rule);
}

void write_trajectory(std::ostream& out, std::span<const TrajectoryRecord> trajectory) {
  if (trajectory.empty()) return;
  out << "n";
  for (std::size_t g = 0; g < trajectory.front().evalues.size(); ++g) out << "\tE_" << g + 1;
  out << "\trejected\n";
  for (const auto& rec : trajectory) {
    out << rec.n;
    for (double e : rec.evalues) out << '\t' << format_number(e);
    out << '\t' << rec.rejections.bitmask() << '\n';
  }
}

}  // namespace seqebh

namespace seqebh {

ProcessFactory make_factory(std::vector<ProcessSpec> specs) {
  return [specs = std::move(specs)] {
    std::vector<std::unique_ptr<LocalProcess>> out;
    out.reserve(specs.size());
    for (const auto& s : specs) out.push_back(make_process(s));
    return out;
  };
}

}  // namespace seqebh
