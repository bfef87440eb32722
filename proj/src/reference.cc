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

#include "pridda/reference.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "pridda/error.h"
#include "pridda/prox.h"

namespace pridda {
namespace {

// Objective at x and the full-batch loss subgradient there, in one pass.
double ValueAndSubgradient(const ProblemInstance& problem,
                           const Eigen::VectorXd& x, Eigen::VectorXd& g) {
  g.setZero(problem.dimension);
  double total = 0.0;
  for (const auto& local : problem.locals) {
    const double w = 1.0 / static_cast<double>(local.samples.size());
    double node = 0.0;
    for (const auto& s : local.samples) {
      const double margin = 1.0 - s.label * s.features.Dot(x);
      if (margin > 0.0) {
        node += margin;
        s.features.AddTo(-s.label * w, g);
      }
    }
    total += node * w;
  }
  g /= static_cast<double>(problem.node_count());
  return total / problem.node_count() + RegularizerValue(problem.regularizer, x);
}

constexpr int64_t kAverageEvalStride = 10;

}  // namespace

void ReferenceOptions::Validate() const {
  if (max_iterations < 1 || window < 1 || !(tolerance >= 0.0) ||
      !(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("invalid reference options (iterations {}, window "
                            "{}, tolerance {}, gamma {})",
                            max_iterations, window, tolerance, gamma));
  }
}

Schedule ReferenceSchedule(const ProblemInstance& problem,
                           const ReferenceOptions& options) {
  const double mu = problem.regularizer.Modulus();
  return mu > 0.0 ? Schedule::StronglyConvex(mu)
                  : Schedule::Convex(options.gamma, mu);
}

ReferenceSolution SolveReference(const ProblemInstance& problem,
                                 const ReferenceOptions& options) {
  options.Validate();
  if (problem.node_count() < 1 || problem.MinSamplesPerNode() < 1) {
    throw Error(ErrorCode::kInvalidArgument, "reference solver needs data");
  }
  const Schedule schedule = ReferenceSchedule(problem, options);
  const int m = problem.dimension;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd x, g(m);
  Eigen::VectorXd average_num = Eigen::VectorXd::Zero(m);
  ProxSolveInto(z, schedule.CumulativeWeight(1), schedule.Gamma(1),
                problem.regularizer, x);

  ReferenceSolution best;
  best.x = x;
  best.objective = std::numeric_limits<double>::infinity();
  // Objective of the weighted average at the previous window boundary.
  double window_start = std::numeric_limits<double>::infinity();

  int64_t t = 1;
  for (; t <= options.max_iterations; ++t) {
    const double value = ValueAndSubgradient(problem, x, g);
    if (value < best.objective) {
      best.objective = value;
      best.x = x;
    }
    const double a = schedule.Weight(t);
    average_num += a * x;
    const bool window_end = t % options.window == 0;
    if (t % kAverageEvalStride == 0 || window_end) {
      const Eigen::VectorXd average = average_num / schedule.CumulativeWeight(t);
      const double avg_value = ObjectiveValue(problem, average);
      if (avg_value < best.objective) {
        best.objective = avg_value;
        best.x = average;
      }
      if (window_end) {
        const double change = std::abs(window_start - avg_value) /
                              std::max(1.0, std::abs(avg_value));
        if (std::isfinite(window_start) && change < options.tolerance) {
          best.converged = true;
          break;
        }
        window_start = avg_value;
      }
    }
    z += a * g;
    ProxSolveInto(z, schedule.CumulativeWeight(t + 1), schedule.Gamma(t + 1),
                  problem.regularizer, x);
  }
  best.iterations = std::min(t, options.max_iterations);
  return best;
}

}  // namespace pridda
