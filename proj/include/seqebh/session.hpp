#pragma once

// Stopped e-BH: G e-processes advanced against one observation stream, with
// the e-BH rejection set recomputed after every tick.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "seqebh/ebh.hpp"
#include "seqebh/observation.hpp"
#include "seqebh/process.hpp"
#include "seqebh/stopping.hpp"

namespace seqebh {

struct TrajectoryRecord {
  std::size_t n = 0;
  EValueVector evalues;
  RejectionSet rejections;
};

class Session {
 public:
  Session(std::vector<std::unique_ptr<LocalProcess>> processes, double alpha);

  /// Advances every process with (x_n, y_n^g), recomputes e-BH, and stores
  /// the look-ahead covariate for rule evaluation.
  const TrajectoryRecord& step(const Observation& observation, Covariate next_covariate);

  std::size_t hypotheses() const { return processes_.size(); }
  std::size_t n() const { return history_.size(); }
  double alpha() const { return alpha_; }

  /// Current reported e-values (all 1 before the first step).
  const EValueVector& evalues() const { return evalues_; }
  const EValueVector& base_values() const { return base_values_; }
  const RejectionSet& rejections() const { return rejections_; }
  const Covariate& next_covariate() const { return next_covariate_; }
  const std::vector<TrajectoryRecord>& history() const { return history_; }
  const LocalProcess& process(std::size_t g) const { return *processes_.at(g); }

  RuleContext context() const;

 private:
  std::vector<std::unique_ptr<LocalProcess>> processes_;
  double alpha_;
  EValueVector evalues_;
  EValueVector base_values_;
  RejectionSet rejections_;
  Covariate next_covariate_;
  std::vector<TrajectoryRecord> history_;
};

bool evaluate_stop(const StoppingRule& rule, const Session& session);

class ObservationStream {
 public:
  virtual ~ObservationStream() = default;
  virtual std::optional<Observation> next() = 0;
  /// Covariate of the next tick if one exists; its responses stay hidden.
  virtual Covariate peek_covariate() const = 0;
  virtual bool exhausted() const = 0;
};

class VectorStream final : public ObservationStream {
 public:
  explicit VectorStream(std::span<const Observation> observations) : observations_(observations) {}
  std::optional<Observation> next() override;
  Covariate peek_covariate() const override;
  bool exhausted() const override { return position_ >= observations_.size(); }

 private:
  std::span<const Observation> observations_;
  std::size_t position_ = 0;
};

struct StoppedResult {
  std::size_t tau = 0;
  EValueVector evalues;
  EValueVector base_values;
  RejectionSet rejections;
  std::vector<TrajectoryRecord> trajectory;
  bool rule_fired = false;  // false when the stream ran out first
};

/// Steps until the rule fires or the stream is exhausted. Throws InputError on
/// an empty stream.
StoppedResult run(Session& session, ObservationStream& stream, const StoppingRule& rule);
StoppedResult run(Session& session, std::span<const Observation> stream, const StoppingRule& rule);

/// Header "n\tE_1..E_G\trejected" then one row per step; `rejected` is the
/// bitmask of R_n with character g for hypothesis g+1.
void write_trajectory(std::ostream& out, std::span<const TrajectoryRecord> trajectory);

}  // namespace seqebh

namespace seqebh {

/// Builds a fresh set of G processes for one replicate.
using ProcessFactory = std::function<std::vector<std::unique_ptr<LocalProcess>>()>;

ProcessFactory make_factory(std::vector<ProcessSpec> specs);

}  // namespace seqebh
