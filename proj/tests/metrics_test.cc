// Copyright 2026 The pridda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pridda/metrics.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "pridda/engine.h"
#include "pridda/error.h"
#include "pridda/reference.h"
#include "test_util.h"

namespace pridda {
namespace {

BoundParams Params(double lipschitz, double beta, double iota, double mu,
                   Schedule schedule) {
  BoundParams p;
  p.lipschitz = lipschitz;
  p.beta = beta;
  p.iota = iota;
  p.mu = mu;
  p.schedule = schedule;
  return p;
}

TEST(ConstantMTest, Examples) {
  EXPECT_DOUBLE_EQ(ConstantM(Params(1, 0.5, 1, 0, Schedule::Convex(1))), 4.5);
  EXPECT_DOUBLE_EQ(ConstantM(Params(2, 0.5, 0.25, 0, Schedule::Convex(1))), 8.5);
  EXPECT_LT(ConstantM(Params(1, 0.5, 1e-12, 0, Schedule::Convex(1))), 1e-5);
  EXPECT_THROW(ConstantM(Params(1, 1.0, 1, 0, Schedule::Convex(1))), Error);
}

TEST(SuboptimalityEnvelopeTest, SingleStep) {
  BoundParams p = Params(1, 0.5, 1, 1, Schedule::StronglyConvex(1));
  EXPECT_DOUBLE_EQ(Theorem2Envelope(p, 1), 4.5);
}

TEST(SuboptimalityEnvelopeTest, MatchesDirectSum) {
  BoundParams p = Params(1.3, 0.7, 0.3, 0.2, Schedule::ConstantGamma(2.0, 0.2));
  p.sigma = 0.8;
  p.dimension = 5;
  p.d_xstar = 1.7;
  const double m = 5.0;
  const double c = 0.3 * 1.69 / 2 + 2 * std::sqrt(0.3) * 1.69 / 0.3 +
                   m * 0.3 * 0.64 / 2 + 2 * std::sqrt(m * 0.3) * 1.3 * 0.8 / 0.3;
  double sum = 0.0;
  for (int t = 1; t <= 50; ++t) {
    const double big_a = t * (t + 1) / 2.0;
    sum += double(t) * t / (0.2 * 0.3 * big_a + 2.0);
    const double want = (2.0 * 1.7 / 0.3 + sum * c) / big_a;
    ASSERT_NEAR(Theorem2Envelope(p, t), want, 1e-12 * want);
  }
}

TEST(SuboptimalityEnvelopeTest, ConvexScheduleBelowClosedForm) {
  BoundParams p = Params(1, 0.5, 0.4, 0, Schedule::Convex(1.0));
  p.d_xstar = 2.0;
  Theorem2Tracker tracker(p);
  for (int64_t t = 1; t <= 10000; ++t) {
    const double env = tracker.Advance();
    ASSERT_LE(env, CorollaryEnvelope(p, Corollary::kConvexSuboptimality, t) * (1 + 1e-12));
  }
}

TEST(SuboptimalityEnvelopeTest, PartialSumInequality) {
  BoundParams p = Params(1, 0.5, 0.1, 0.05, Schedule::StronglyConvex(0.05));
  Theorem2Tracker tracker(p);
  const double m = ConstantM(p);
  for (int64_t t = 1; t <= 100000; ++t) {
    const double env = tracker.Advance();
    const double big_a = p.schedule.CumulativeWeight(t);
    ASSERT_LE(env, 2.0 * t / (0.05 * 0.1) * m / big_a * (1 + 1e-12)) << t;
  }
}

TEST(SuboptimalityEnvelopeTest, ZeroAndDegenerate) {
  BoundParams p = Params(0, 0.5, 1, 1, Schedule::StronglyConvex(1));
  EXPECT_EQ(Theorem2Envelope(p, 10), 0.0);
  BoundParams bad = Params(1, 0.5, 1, 0, Schedule::StronglyConvex(0));
  EXPECT_THROW(Theorem2Envelope(bad, 1), Error);
  EXPECT_THROW(Lemma4Envelope(bad, 1), Error);
  EXPECT_THROW(Theorem2Envelope(p, 0), Error);
}

TEST(ConsensusEnvelopeTest, ConvexClosedForm) {
  BoundParams p = Params(1.5, 0.6, 0.25, 0, Schedule::Convex(0.3));
  for (int64_t t : {1, 4, 100, 12345}) {
    ConsensusEnvelope e = Lemma4Envelope(p, t);
    const double want = 1.5 * 0.5 / (0.3 * 0.4 * std::sqrt(double(t)));
    EXPECT_NEAR(e.mean, want, 1e-12 * want);
    EXPECT_NEAR(e.mean_square, want * want, 1e-12 * want * want);
    EXPECT_NEAR(CorollaryEnvelope(p, Corollary::kConvexConsensus, t), 2 * want,
                1e-12 * want);
  }
}

TEST(ConsensusEnvelopeTest, VanishesUnderStrongConvexity) {
  BoundParams p = Params(1, 0.5, 0.5, 0.1, Schedule::StronglyConvex(0.1));
  p.sigma = 2.0;
  p.dimension = 4;
  EXPECT_LT(Lemma4Envelope(p, 1000000).mean, Lemma4Envelope(p, 1000).mean / 500);
  EXPECT_EQ(Lemma4Envelope(Params(0, 0.5, 0.5, 0.1, Schedule::StronglyConvex(0.1)), 5).mean,
            0.0);
}

TEST(ClosedFormEnvelopeTest, Examples) {
  BoundParams c1 = Params(1, 0.5, 1, 1, Schedule::StronglyConvex(1));
  EXPECT_DOUBLE_EQ(CorollaryEnvelope(c1, Corollary::kStronglyConvexDistance, 1), 68.0);
  BoundParams c2 = Params(1, 0.5, 1, 0, Schedule::Convex(1));
  EXPECT_DOUBLE_EQ(CorollaryEnvelope(c2, Corollary::kConvexConsensus, 4), 2.0);
  EXPECT_THROW(CorollaryEnvelope(c2, Corollary::kStronglyConvexDistance, 4), Error);
  EXPECT_THROW(CorollaryEnvelope(c1, Corollary::kConvexSuboptimality, 4), Error);
  BoundParams tiny = c2;
  tiny.d_xstar = 1.0;
  tiny.iota = 1e-300;
  EXPECT_GT(CorollaryEnvelope(tiny, Corollary::kConvexSuboptimality, 4), 1e100);
  tiny.iota = 0.0;
  EXPECT_TRUE(std::isinf(CorollaryEnvelope(tiny, Corollary::kConvexSuboptimality, 4)));
}

TEST(LogLogSlopeTest, PowerLaws) {
  std::vector<double> x, y;
  for (int i = 1; i <= 100; ++i) {
    x.push_back(10.0 * i);
    y.push_back(3.0 * std::pow(10.0 * i, -0.75));
  }
  EXPECT_NEAR(LogLogSlope(x, y, 0, 1e9), -0.75, 1e-12);
  EXPECT_NEAR(LogLogSlope(x, y, 100, 500), -0.75, 1e-12);
  EXPECT_TRUE(std::isnan(LogLogSlope(x, y, 2000, 3000)));
  y[5] = -1.0;
  EXPECT_NEAR(LogLogSlope(x, y, 0, 1e9), -0.75, 1e-12);
}

TEST(SummarizeTest, AreaAndFinal) {
  RunTrace trace;
  for (int t : {1, 2, 4}) {
    TraceRow row;
    row.t = t;
    row.objective_mean_ergodic = 1.0 + 1.0 / t;
    trace.rows.push_back(row);
  }
  UtilitySummary s = Summarize(trace, 1.0);
  EXPECT_DOUBLE_EQ(s.first_subopt, 1.0);
  EXPECT_DOUBLE_EQ(s.final_subopt, 0.25);
  EXPECT_DOUBLE_EQ(s.area_under_curve, 0.75 + 0.75);
  EXPECT_NEAR(s.loglog_slope, -1.0, 1e-12);
  EXPECT_TRUE(std::isnan(s.final_mean_sq_dist));
  EXPECT_TRUE(std::isnan(Summarize(RunTrace{}, 0.0).final_subopt));
}

TEST(SummarizeTest, ConvergedRunIsNonnegativeAndDeterministic) {
  auto problem = testing::SyntheticProblem(5, 10, 4, Regularizer::L2Half(0.1));
  const ReferenceSolution ref = SolveReference(*problem);
  RunConfig config = MakeRunConfig(problem, Schedule::StronglyConvex(0.1),
                                   testing::Matching(5, 1), 2000, 3);
  config.trace_stride = 100;
  config.reference = Reference{ref.x, ref.objective};
  UtilitySummary a = Summarize(pridda::Run(config), ref.objective);
  UtilitySummary b = Summarize(pridda::Run(config), ref.objective);
  EXPECT_LT(a.loglog_slope, 0.0);
  EXPECT_GE(a.final_subopt, -1e-9);
  EXPECT_LE(a.final_subopt, a.first_subopt);
  EXPECT_EQ(a.subopt, b.subopt);
  EXPECT_EQ(a.final_mean_sq_dist, b.final_mean_sq_dist);
}

// Monte Carlo over seeds on a 10-node, m = 10 instance.
class EnvelopeCheckTest : public ::testing::TestWithParam<bool> {};

TEST_P(EnvelopeCheckTest, MeanStaysBelowEnvelopes) {
  const bool noisy = GetParam();
  auto problem = testing::SyntheticProblem(10, 20, 10, Regularizer::L2Half(0.1));
  const ReferenceSolution ref = SolveReference(*problem);
  RunConfig config = MakeRunConfig(problem, Schedule::StronglyConvex(0.1),
                                   testing::Matching(10, 1), 300, 0);
  config.trace_stride = 10;
  config.reference = Reference{ref.x, ref.objective};
  config.beta = *config.sampler->AnalyticBeta();
  if (noisy) config.privacy = testing::Calibrated(config, 1.0, 0.01);
  const int seeds = 50;
  std::vector<RunTrace> traces;
  for (int s = 1; s <= seeds; ++s) {
    config.seed = s;
    traces.push_back(pridda::Run(config));
    ASSERT_TRUE(traces.back().mean_dual_ok);
  }
  for (size_t r = 0; r < traces[0].rows.size(); ++r) {
    double sum = 0, sum_sq = 0, c_sum = 0, c_sq = 0;
    for (const auto& tr : traces) {
      const TraceRow& row = tr.rows[r];
      const double v = row.cumulative_weight * row.subopt_y_ergodic;
      sum += v;
      sum_sq += v * v;
      c_sum += row.consensus_error;
      c_sq += row.consensus_error * row.consensus_error;
    }
    const double mean = sum / seeds;
    const double se = std::sqrt(std::max(0.0, sum_sq / seeds - mean * mean) / (seeds - 1));
    const double c_mean = c_sum / seeds;
    const double c_se = std::sqrt(std::max(0.0, c_sq / seeds - c_mean * c_mean) / (seeds - 1));
    const TraceRow& row = traces[0].rows[r];
    EXPECT_LE(mean - 2 * se, row.cumulative_weight * row.theorem2_envelope) << row.t;
    EXPECT_LE(c_mean - 2 * c_se, row.lemma4_envelope) << row.t;
  }
}

INSTANTIATE_TEST_SUITE_P(Noise, EnvelopeCheckTest, ::testing::Values(false, true));

}  // namespace
}  // namespace pridda
