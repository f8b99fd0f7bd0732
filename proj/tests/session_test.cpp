#include "seqebh/session.hpp"

#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "seqebh/errors.hpp"
#include "seqebh/scenario.hpp"

namespace {

using seqebh::Observation;
using seqebh::Session;
using seqebh::StoppingRule;

std::vector<std::unique_ptr<seqebh::LocalProcess>> betting(std::size_t g) {
  std::vector<std::unique_ptr<seqebh::LocalProcess>> out;
  for (std::size_t i = 0; i < g; ++i) out.push_back(seqebh::make_process(seqebh::BettingSpec{}));
  return out;
}

std::vector<Observation> all_heads(std::size_t g, std::size_t n) {
  return std::vector<Observation>(n, Observation{std::nullopt, std::vector<double>(g, 1.0)});
}

TEST(SessionTest, StartsAtOne) {
  Session s(betting(3), 0.1);
  EXPECT_EQ(s.evalues(), (std::vector<double>(3, 1.0)));
  EXPECT_TRUE(s.rejections().empty());
  EXPECT_EQ(s.n(), 0u);
}

TEST(SessionTest, StepUpdatesAndRejects) {
  Session s(betting(2), 0.5);
  s.step({std::nullopt, {1.0, -1.0}}, std::nullopt);
  EXPECT_EQ(s.evalues(), (std::vector<double>{1.5, 0.5}));
  EXPECT_TRUE(s.rejections().empty());
  s.step({std::nullopt, {1.0, 1.0}}, std::nullopt);
  s.step({std::nullopt, {1.0, 1.0}}, std::nullopt);
  // 1.5^3 = 3.375 >= G / (alpha * 1) = 4? No. 1.5^4 = 5.0625 is.
  EXPECT_TRUE(s.rejections().empty());
  s.step({std::nullopt, {1.0, 1.0}}, std::nullopt);
  EXPECT_EQ(s.rejections(), seqebh::RejectionSet(2, {0}));
  EXPECT_EQ(s.history().size(), 4u);
}

TEST(SessionTest, ArityMismatchThrows) {
  Session s(betting(2), 0.1);
  EXPECT_THROW(s.step({std::nullopt, {1.0}}, std::nullopt), seqebh::InputError);
  EXPECT_THROW(Session({}, 0.1), seqebh::InputError);
  EXPECT_THROW(Session(betting(1), 1.5), seqebh::ParameterError);
}

TEST(SessionTest, RejectionsAlwaysRecomputedFromEvalues) {
  const auto stream = seqebh::gen_correlated_coins({{0.8, 0.5, 0.7, 0.5}, 0.3}, 80, 5);
  Session s(betting(4), 0.2);
  for (const auto& obs : stream) {
    const auto& rec = s.step(obs, std::nullopt);
    ASSERT_EQ(rec.rejections, seqebh::ebh(rec.evalues, 0.2));
  }
}

TEST(Stopping, FixedHorizonAndRejectionCount) {
  const auto stream = all_heads(2, 20);
  {
    Session s(betting(2), 0.5);
    const auto r = seqebh::run(s, stream, StoppingRule{seqebh::FixedHorizon{3}});
    EXPECT_EQ(r.tau, 3u);
    EXPECT_TRUE(r.rule_fired);
    EXPECT_EQ(r.trajectory.size(), 3u);
  }
  {
    // Both processes equal 1.5^n; e-BH rejects both once 1.5^n >= 2 / 0.5 / 2 = 2.
    Session s(betting(2), 0.5);
    const auto r = seqebh::run(s, stream, StoppingRule{seqebh::RejectionCount{2}});
    EXPECT_EQ(r.tau, 2u);
    EXPECT_EQ(r.rejections.size(), 2u);
  }
}

TEST(Stopping, ThresholdAndFirstOf) {
  const auto stream = all_heads(1, 20);
  Session s(betting(1), 0.1);
  const auto r = seqebh::run(
      s, stream,
      StoppingRule{seqebh::FirstOf{{StoppingRule{seqebh::ThresholdRule{0, 5.0}}, StoppingRule{seqebh::FixedHorizon{10}}}}});
  // 1.5^3 = 3.375, 1.5^4 = 5.0625.
  EXPECT_EQ(r.tau, 4u);
}

TEST(Stopping, StreamExhaustionIsNotAFiring) {
  const auto stream = all_heads(1, 5);
  Session s(betting(1), 0.1);
  const auto r = seqebh::run(s, stream, StoppingRule{seqebh::FixedHorizon{50}});
  EXPECT_EQ(r.tau, 5u);
  EXPECT_FALSE(r.rule_fired);
  Session empty(betting(1), 0.1);
  EXPECT_THROW(seqebh::run(empty, std::vector<Observation>{}, StoppingRule{seqebh::FixedHorizon{1}}),
               seqebh::InputError);
}

TEST(Stopping, RuleSeesNextCovariateOnly) {
  std::vector<Observation> stream{{0.0, {1.0}}, {7.0, {-1.0}}, {3.0, {1.0}}};
  std::vector<seqebh::Covariate> seen;
  seqebh::CustomRule rule{"peek", [&seen](const seqebh::RuleContext& ctx) {
                            seen.push_back(ctx.next_covariate);
                            return false;
                          }};
  Session s(betting(1), 0.1);
  seqebh::run(s, stream, StoppingRule{rule});
  ASSERT_EQ(seen.size(), 3u);
  EXPECT_EQ(seen[0], 7.0);
  EXPECT_EQ(seen[1], 3.0);
  EXPECT_FALSE(seen[2].has_value());
}

TEST(Stopping, CustomRuleErrorsAreWrapped) {
  Session s(betting(1), 0.1);
  seqebh::CustomRule rule{"boom", [](const seqebh::RuleContext&) -> bool { throw std::logic_error("bad"); }};
  EXPECT_THROW(seqebh::run(s, all_heads(1, 3), StoppingRule{rule}), seqebh::RuleError);
  Session t(betting(1), 0.1);
  EXPECT_THROW(seqebh::evaluate_stop(StoppingRule{seqebh::ThresholdRule{4, 1.0}}, t), seqebh::InputError);
}

TEST(Stopping, DescribeNamesRules) {
  EXPECT_NE(seqebh::describe(StoppingRule{seqebh::FixedHorizon{7}}).find('7'), std::string::npos);
}

TEST(SessionTest, DeterministicReplay) {
  const auto stream = seqebh::gen_mvn({{0.2, 0.0}, {{1.0, 0.5}, {0.5, 1.0}}}, 40, 9);
  auto factory = seqebh::make_factory({{seqebh::GaussianSpec{}, std::nullopt}, {seqebh::GaussianSpec{}, std::nullopt}});
  Session a(factory(), 0.1);
  Session b(factory(), 0.1);
  const auto ra = seqebh::run(a, stream, StoppingRule{seqebh::FixedHorizon{40}});
  const auto rb = seqebh::run(b, stream, StoppingRule{seqebh::FixedHorizon{40}});
  EXPECT_EQ(ra.evalues, rb.evalues);
  EXPECT_EQ(ra.rejections, rb.rejections);
}

TEST(Trajectory, TabSeparatedFormat) {
  Session s(betting(2), 0.5);
  const auto r = seqebh::run(s, all_heads(2, 2), StoppingRule{seqebh::FixedHorizon{2}});
  std::ostringstream out;
  seqebh::write_trajectory(out, r.trajectory);
  EXPECT_EQ(out.str(), "n\tE_1\tE_2\trejected\n1\t1.5\t1.5\t00\n2\t2.25\t2.25\t11\n");
}

}  // namespace
