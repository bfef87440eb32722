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

#include "pridda/engine.h"

#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "pridda/error.h"
#include "pridda/schedule.h"
#include "test_util.h"

namespace pridda {
namespace {

using testing::Calibrated;
using testing::DenseSample;
using testing::Matching;
using testing::SyntheticProblem;

TEST(ScheduleTest, Sequences) {
  Schedule sc = Schedule::StronglyConvex(0.5);
  Schedule cv = Schedule::Convex(2.0);
  Schedule cg = Schedule::ConstantGamma(20.0, 0.1);
  for (const Schedule& s : {sc, cv, cg}) {
    EXPECT_EQ(s.Weight(0), 0.0);
    EXPECT_EQ(s.CumulativeWeight(0), 0.0);
    EXPECT_EQ(s.Gamma(0), 0.0);
    double sum = 0.0;
    for (int64_t t = 1; t <= 200; ++t) {
      sum += s.Weight(t);
      ASSERT_DOUBLE_EQ(s.CumulativeWeight(t), sum);
    }
  }
  EXPECT_EQ(sc.Weight(7), 7.0);
  EXPECT_EQ(sc.CumulativeWeight(7), 28.0);
  EXPECT_EQ(sc.Gamma(7), 0.0);
  EXPECT_EQ(cv.Weight(9), 1.0);
  EXPECT_EQ(cv.CumulativeWeight(9), 9.0);
  EXPECT_DOUBLE_EQ(cv.Gamma(9), 6.0);
  EXPECT_EQ(cg.Weight(3), 3.0);
  EXPECT_EQ(cg.Gamma(3), 20.0);
}

TEST(ScheduleTest, Validation) {
  EXPECT_THROW(Schedule::StronglyConvex(0.0).Validate(), Error);
  EXPECT_THROW(Schedule::Convex(0.0).Validate(), Error);
  EXPECT_THROW(Schedule::ConstantGamma(-1.0).Validate(), Error);
  EXPECT_NO_THROW(Schedule::Convex(0.01).Validate());
  EXPECT_EQ(ParseScheduleKind("constant_gamma"), Schedule::Kind::kConstantGamma);
  EXPECT_THROW(ParseScheduleKind("adaptive"), Error);
}

// Two nodes, one sample each (y = +1, c = 1), mu = 1, a_t = t.
RunConfig TwoNodeConfig(int64_t horizon) {
  std::vector<LocalDataset> locals(2);
  locals[0].samples = {DenseSample({1.0}, 1.0)};
  locals[1].samples = {DenseSample({1.0}, 1.0)};
  locals[1].owner = 1;
  auto problem = std::make_shared<const ProblemInstance>(
      MakeProblem(locals, Regularizer::L2Half(1.0), 1));
  return MakeRunConfig(problem, Schedule::StronglyConvex(1.0), Matching(2, 1), horizon, 1);
}

TEST(StepTest, HandSimulatedTwoNodes) {
  RunConfig config = TwoNodeConfig(1);
  EXPECT_DOUBLE_EQ(config.iota, 1.0);
  std::vector<NodeState> states = InitialStates(config);
  for (const auto& s : states) EXPECT_EQ(s.x(0), 0.0);
  Rng rng(1);
  GossipMatrix w = config.sampler->Sample(rng);
  StepInfo info = Step(states, w, 1, config);
  EXPECT_EQ(info.active_count, 2);
  for (const auto& s : states) {
    EXPECT_DOUBLE_EQ(s.z(0), -1.0);
    // A_2 = 3, so x = 1 / (3 mu).
    EXPECT_DOUBLE_EQ(s.x(0), 1.0 / 3.0);
  }
  const Eigen::VectorXd y = AuxiliaryY(MeanDual(states), 2, config);
  EXPECT_DOUBLE_EQ(y(0), 1.0 / 3.0);
  EXPECT_TRUE(AuxiliaryY(Eigen::VectorXd::Zero(1), 1, config).isZero());
}

TEST(StepTest, NoActiveNodesLeavesDualsAndIteratesUntouched) {
  auto problem = SyntheticProblem(4, 5, 3, Regularizer::L1(0.1));
  RunConfig config = MakeRunConfig(problem, Schedule::Convex(0.5), Matching(4, 1), 10, 3);
  std::vector<NodeState> states = InitialStates(config);
  Rng rng(2);
  for (int t = 1; t <= 3; ++t) Step(states, config.sampler->Sample(rng), t, config);
  const std::vector<NodeState> before = states;
  GossipMatrix idle = MetropolisMatrix(config.sampler->graph(), {});
  StepInfo info = Step(states, idle, 4, config);
  EXPECT_EQ(info.active_count, 0);
  EXPECT_TRUE(info.theta.isZero());
  for (size_t i = 0; i < states.size(); ++i) {
    EXPECT_EQ(states[i].z, before[i].z);
    EXPECT_EQ(states[i].x, before[i].x);
  }
}

TEST(StepTest, InactiveNodesFrozen) {
  auto problem = SyntheticProblem(6, 4, 3, Regularizer::L1(0.1));
  RunConfig config = MakeRunConfig(problem, Schedule::Convex(0.5), Matching(6, 1), 10, 3);
  std::vector<NodeState> states = InitialStates(config);
  Rng rng(4);
  for (int t = 1; t <= 20; ++t) {
    const std::vector<NodeState> before = states;
    GossipMatrix w = config.sampler->Sample(rng);
    Step(states, w, t, config);
    for (size_t i = 0; i < states.size(); ++i) {
      if (!w.active[i]) {
        ASSERT_EQ(states[i].z, before[i].z);
        ASSERT_EQ(states[i].x, before[i].x);
      }
    }
  }
}

TEST(StepTest, IdenticalDataStaysInConsensus) {
  // Every node holds the same single sample, so sampling cannot differ.
  std::vector<LocalDataset> locals(5);
  for (int i = 0; i < 5; ++i) {
    locals[i].samples = {DenseSample({0.6, -0.8}, 1.0)};
    locals[i].owner = i;
  }
  auto problem = std::make_shared<const ProblemInstance>(
      MakeProblem(locals, Regularizer::L1(0.05), 2));
  auto sampler = std::make_shared<const GossipSampler>(BuildCompleteGraph(5),
                                                       SamplingStrategy::kAllEdges, 0);
  RunConfig config = MakeRunConfig(problem, Schedule::Convex(0.3), sampler, 200, 9);
  bool equal = true;
  config.observer = [&](int64_t, const std::vector<NodeState>& states) {
    for (const auto& s : states) {
      equal = equal && (s.x - states.front().x).norm() < 1e-12 &&
              (s.z - states.front().z).norm() < 1e-12 * (1 + s.z.norm());
    }
  };
  RunTrace trace = pridda::Run(config);
  EXPECT_TRUE(equal);
  for (const auto& row : trace.rows) EXPECT_LT(row.consensus_error, 1e-12);
}

TEST(StepTest, ErgodicSumMatchesHistory) {
  auto problem = SyntheticProblem(4, 6, 3, Regularizer::L2Half(0.2));
  RunConfig config =
      MakeRunConfig(problem, Schedule::StronglyConvex(0.2), Matching(4, 1), 60, 5);
  std::vector<std::vector<Eigen::VectorXd>> history(4);
  std::vector<NodeState> initial = InitialStates(config);
  for (int i = 0; i < 4; ++i) history[i].push_back(initial[i].x);
  std::vector<Eigen::VectorXd> last_ergodic(4);
  config.observer = [&](int64_t t, const std::vector<NodeState>& states) {
    for (int i = 0; i < 4; ++i) {
      history[i].push_back(states[i].x);
      last_ergodic[i] = states[i].Ergodic(config.schedule.CumulativeWeight(t + 1));
    }
  };
  pridda::Run(config);
  const int64_t last = 61;
  for (int i = 0; i < 4; ++i) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(3);
    for (int64_t tau = 1; tau <= last; ++tau) sum += config.schedule.Weight(tau) * history[i][tau - 1];
    const Eigen::VectorXd want = sum / config.schedule.CumulativeWeight(last);
    EXPECT_LT((last_ergodic[i] - want).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MeanDualTest, HoldsOnNoisyAndNoiselessRuns) {
  auto problem = SyntheticProblem(10, 20, 5, Regularizer::L1(0.01));
  for (bool noisy : {false, true}) {
    RunConfig config = MakeRunConfig(problem, Schedule::Convex(0.1), Matching(10, 2), 300, 4);
    if (noisy) config.privacy = Calibrated(config, 1.0, 0.01);
    std::vector<NodeState> states = InitialStates(config);
    std::vector<MeanDualSnapshot> snaps;
    Rng rng(8);
    for (int64_t t = 1; t <= config.horizon; ++t) {
      MeanDualSnapshot s;
      s.mean_before = MeanDual(states);
      s.theta = Step(states, config.sampler->Sample(rng), t, config).theta;
      s.mean_after = MeanDual(states);
      s.weight = config.schedule.Weight(t);
      snaps.push_back(s);
    }
    EXPECT_TRUE(CheckMeanDualRecursion(snaps));
    RunTrace trace = pridda::Run(config);
    EXPECT_TRUE(trace.mean_dual_ok);
    EXPECT_LE(trace.max_mean_dual_error, 1e-9);
  }
}

TEST(MeanDualTest, DetectsColumnSumViolation) {
  auto problem = SyntheticProblem(3, 4, 2, Regularizer::L1(0.01));
  RunConfig config = MakeRunConfig(problem, Schedule::Convex(0.1), Matching(3, 1), 5, 4);
  std::vector<NodeState> states = InitialStates(config);
  states[0].z = Eigen::Vector2d(1.0, 0.0);
  states[1].z = Eigen::Vector2d(0.0, 5.0);
  // Rows sum to one, columns do not.
  GossipMatrix bad;
  bad.entries.resize(3, 3);
  bad.entries << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0;
  bad.active = {true, true, true};
  MeanDualSnapshot s;
  s.mean_before = MeanDual(states);
  s.theta = Step(states, bad, 1, config).theta;
  s.mean_after = MeanDual(states);
  s.weight = config.schedule.Weight(1);
  EXPECT_GT(MeanDualError(s), 1e-9);
  EXPECT_FALSE(CheckMeanDualRecursion(std::vector<MeanDualSnapshot>{s}));
}

TEST(RunTest, RowCountAndDeterminism) {
  auto problem = SyntheticProblem(6, 10, 4, Regularizer::L1(0.01));
  RunConfig config = MakeRunConfig(problem, Schedule::Convex(0.1), Matching(6, 1), 1000, 12);
  config.trace_stride = 10;
  config.privacy = Calibrated(config, 0.5, 0.01);
  config.reference = Reference{Eigen::VectorXd::Zero(4), 0.1};
  config.beta = *config.sampler->AnalyticBeta();
  RunTrace a = pridda::Run(config), b = pridda::Run(config);
  ASSERT_EQ(a.rows.size(), 100u);
  for (size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].t, static_cast<int64_t>(10 * (i + 1)));
    EXPECT_EQ(std::memcmp(&a.rows[i], &b.rows[i], sizeof(TraceRow)), 0);
  }
  config.seed = 13;
  RunTrace c = pridda::Run(config);
  EXPECT_NE(a.rows.back().objective_mean_ergodic, c.rows.back().objective_mean_ergodic);
  config.trace_stride = 7;
  EXPECT_EQ(pridda::Run(config).rows.size(), 142u);
}

TEST(RunTest, SingleNodeHasNoConsensusError) {
  std::vector<LocalDataset> locals(1);
  Rng rng(3);
  locals[0].samples = GenerateSynthetic(30, 3, 0.1, rng);
  auto problem = std::make_shared<const ProblemInstance>(
      MakeProblem(locals, Regularizer::L1(0.01), 3));
  auto sampler = std::make_shared<const GossipSampler>(Graph(1, {}),
                                                       SamplingStrategy::kAllEdges, 0);
  RunConfig config = MakeRunConfig(problem, Schedule::Convex(0.2), sampler, 300, 1);
  config.trace_stride = 3;
  RunTrace trace = pridda::Run(config);
  ASSERT_EQ(trace.rows.size(), 100u);
  for (const auto& row : trace.rows) {
    EXPECT_EQ(row.consensus_error, 0.0);
    EXPECT_EQ(row.ergodic_consensus_error, 0.0);
  }
  EXPECT_LT(trace.rows.back().objective_mean_ergodic, trace.rows.front().objective_mean_ergodic);
}

TEST(RunTest, EpsHatColumnFollowsLossCurve) {
  auto problem = SyntheticProblem(10, 10, 3, Regularizer::L2Half(0.05));
  RunConfig config =
      MakeRunConfig(problem, Schedule::StronglyConvex(0.05), Matching(10, 1), 400, 2);
  config.trace_stride = 40;
  config.privacy = Calibrated(config, 1.0, 0.01);
  RunTrace trace = pridda::Run(config);
  double prev = 0.0;
  for (const auto& row : trace.rows) {
    EXPECT_GE(row.eps_hat, prev);
    prev = row.eps_hat;
  }
  EXPECT_NEAR(trace.rows.back().eps_hat, std::sqrt(0.6) + 0.2, 1e-12);
  config.privacy.reset();
  EXPECT_TRUE(std::isnan(pridda::Run(config).rows.back().eps_hat));
}

TEST(RunConfigTest, Validation) {
  auto l1 = SyntheticProblem(4, 5, 3, Regularizer::L1(0.1));
  RunConfig ok = MakeRunConfig(l1, Schedule::Convex(0.5), Matching(4, 1), 100, 1);
  EXPECT_NO_THROW(ok.Validate());

  RunConfig iota = ok;
  iota.iota = 1.0;
  EXPECT_THROW(iota.Validate(), Error);

  // gamma_t = 0 with a curvature-free regularizer.
  RunConfig degenerate = MakeRunConfig(l1, Schedule::StronglyConvex(1.0), Matching(4, 1), 100, 1);
  try {
    degenerate.Validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::kInvalidSchedule ||
                e.code() == ErrorCode::kDegenerateSubproblem);
  }

  RunConfig horizon = ok;
  horizon.privacy = Calibrated(ok, 1.0, 0.01);
  horizon.horizon = 200;
  EXPECT_THROW(horizon.Validate(), Error);

  RunConfig stride = ok;
  stride.trace_stride = 0;
  EXPECT_THROW(stride.Validate(), Error);

  RunConfig nodes = ok;
  nodes.sampler = Matching(6, 1);
  EXPECT_THROW(nodes.Validate(), Error);
}

}  // namespace
}  // namespace pridda
