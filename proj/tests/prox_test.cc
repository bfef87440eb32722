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

#include "pridda/prox.h"

#include <cmath>

#include <gtest/gtest.h>

#include "pridda/error.h"
#include "pridda/random.h"

namespace pridda {
namespace {

Eigen::VectorXd Vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Eigen::VectorXd Solve(const Eigen::VectorXd& z, double c, double gamma,
                      Regularizer reg) {
  return ProxSolve({z, c, gamma, reg});
}

TEST(ProxSolveTest, L1Example) {
  Eigen::VectorXd x = Solve(Vec({3.0, -0.5}), 1.0, 2.0, Regularizer::L1(1.0));
  EXPECT_NEAR(x(0), -1.0, 1e-15);
  EXPECT_EQ(x(1), 0.0);
  ProxQuery q{Vec({3.0, -0.5}), 1.0, 2.0, Regularizer::L1(1.0)};
  EXPECT_LT((ProxOracle(q, 3.0, 1e-2) - x).norm(), 1e-6);
}

TEST(ProxSolveTest, L2HalfExample) {
  Eigen::VectorXd x = Solve(Vec({2.0, -4.0}), 1.0, 1.0, Regularizer::L2Half(1.0));
  EXPECT_LT((x - Vec({-1.0, 2.0})).norm(), 1e-15);
  // gamma = 0 is admissible with curvature from the regularizer.
  Eigen::VectorXd y = Solve(Vec({2.0}), 4.0, 0.0, Regularizer::L2Half(0.5));
  EXPECT_NEAR(y(0), -1.0, 1e-15);
}

TEST(ProxSolveTest, BallAndZero) {
  EXPECT_LT((Solve(Vec({-3.0, 0.0}), 1.0, 1.0, Regularizer::Ball(1.0)) - Vec({1.0, 0.0})).norm(),
            1e-15);
  EXPECT_LT((Solve(Vec({0.3, 0.4}), 7.0, 1.0, Regularizer::Ball(1.0)) - Vec({-0.3, -0.4})).norm(),
            1e-15);
  EXPECT_NEAR(Solve(Vec({1.0}), 0.0, 1.0, Regularizer::Zero())(0), -1.0, 1e-15);
  ProxQuery q{Vec({-3.0, 0.0}), 1.0, 1.0, Regularizer::Ball(1.0)};
  EXPECT_LT((ProxOracle(q, 2.0, 1e-2) - Vec({1.0, 0.0})).norm(), 1e-6);
  ProxQuery zq{Vec({1.0}), 0.0, 1.0, Regularizer::Zero()};
  EXPECT_NEAR(ProxOracle(zq, 2.0, 1e-2)(0), -1.0, 1e-6);
}

TEST(ProxSolveTest, ZeroDualGivesZero) {
  for (Regularizer reg : {Regularizer::Zero(), Regularizer::L1(0.4),
                          Regularizer::L2Half(2.0), Regularizer::Ball(0.1)}) {
    EXPECT_TRUE(Solve(Eigen::VectorXd::Zero(3), 1.5, 0.7, reg).isZero());
  }
}

TEST(ProxSolveTest, DegenerateQueries) {
  for (Regularizer reg : {Regularizer::Zero(), Regularizer::L1(0.4), Regularizer::Ball(1.0)}) {
    try {
      Solve(Vec({1.0}), 1.0, 0.0, reg);
      FAIL() << reg.Name();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kDegenerateSubproblem);
    }
  }
  EXPECT_THROW(Solve(Vec({1.0}), 0.0, 0.0, Regularizer::L2Half(1.0)), Error);
}

TEST(ProxSolveTest, L1FirstOrderConditions) {
  Rng rng(41);
  std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.05, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double c = pos(rng), gamma = pos(rng), lambda = pos(rng);
    Eigen::VectorXd z(4);
    for (int j = 0; j < 4; ++j) z(j) = u(rng);
    Eigen::VectorXd x = Solve(z, c, gamma, Regularizer::L1(lambda));
    for (int j = 0; j < 4; ++j) {
      if (x(j) != 0.0) {
        // z + c lambda sign(x) + gamma x = 0.
        ASSERT_NEAR(z(j) + c * lambda * (x(j) > 0 ? 1.0 : -1.0) + gamma * x(j), 0.0, 1e-9);
      } else {
        ASSERT_LE(std::abs(z(j)), c * lambda + 1e-9);
      }
    }
  }
}

TEST(ProxSolveTest, NonexpansiveInDual) {
  Rng rng(43);
  std::normal_distribution<double> normal(0.0, 2.0);
  const double gamma = 0.8;
  for (Regularizer reg : {Regularizer::Zero(), Regularizer::L1(0.3), Regularizer::Ball(0.7)}) {
    for (int trial = 0; trial < 1000; ++trial) {
      Eigen::VectorXd a(3), b(3);
      for (int j = 0; j < 3; ++j) {
        a(j) = normal(rng);
        b(j) = normal(rng);
      }
      const double d = (Solve(a, 1.3, gamma, reg) - Solve(b, 1.3, gamma, reg)).norm();
      ASSERT_LE(d, (a - b).norm() / gamma + 1e-12);
    }
  }
}

TEST(ProxSolveTest, L2HalfIsLinear) {
  const Eigen::VectorXd z = Vec({0.3, -1.7, 2.2});
  const Eigen::VectorXd x = Solve(z, 2.0, 0.5, Regularizer::L2Half(0.25));
  for (double alpha : {-2.0, 0.5, 3.0}) {
    EXPECT_LT((Solve(alpha * z, 2.0, 0.5, Regularizer::L2Half(0.25)) - alpha * x).norm(), 1e-14);
  }
}

TEST(ProxSolveTest, InPlaceMatches) {
  Eigen::VectorXd out;
  ProxSolveInto(Vec({1.0, -2.0}), 0.5, 1.5, Regularizer::L1(1.0), out);
  EXPECT_EQ(out, Solve(Vec({1.0, -2.0}), 0.5, 1.5, Regularizer::L1(1.0)));
}

TEST(ProxOracleTest, RejectsLargeDimensions) {
  ProxQuery q{Eigen::VectorXd::Zero(4), 1.0, 1.0, Regularizer::Zero()};
  try {
    ProxOracle(q, 1.0, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOracleScale);
  }
}

class OracleEquivalenceTest : public ::testing::TestWithParam<Regularizer::Kind> {};

TEST_P(OracleEquivalenceTest, AgreesOnRandomQueries) {
  Rng rng(47 + static_cast<int>(GetParam()));
  std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.3, 2.0), param(0.1, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 3;
    Eigen::VectorXd z(m);
    for (int j = 0; j < m; ++j) z(j) = u(rng);
    Regularizer reg;
    switch (GetParam()) {
      case Regularizer::Kind::kZero: reg = Regularizer::Zero(); break;
      case Regularizer::Kind::kL1: reg = Regularizer::L1(param(rng)); break;
      case Regularizer::Kind::kL2Half: reg = Regularizer::L2Half(param(rng)); break;
      case Regularizer::Kind::kBall: reg = Regularizer::Ball(param(rng)); break;
    }
    ProxQuery q{z, pos(rng), pos(rng), reg};
    const double box = z.norm() / q.gamma + 0.5;
    const Eigen::VectorXd want = ProxOracle(q, box, box / 20.0);
    const Eigen::VectorXd got = ProxSolve(q);
    ASSERT_LT((got - want).cwiseAbs().maxCoeff(), 1e-6)
        << reg.Name() << " m=" << m << " trial " << trial;
    ASSERT_LE(q.Objective(got), q.Objective(want) + 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Kinds, OracleEquivalenceTest,
                         ::testing::Values(Regularizer::Kind::kZero, Regularizer::Kind::kL1,
                                           Regularizer::Kind::kL2Half,
                                           Regularizer::Kind::kBall));

}  // namespace
}  // namespace pridda
