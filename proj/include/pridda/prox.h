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

#ifndef PRIDDA_PROX_H_
#define PRIDDA_PROX_H_

#include <Eigen/Dense>

#include "pridda/problems.h"

namespace pridda {

// argmin_x { <z, x> + coefficient * h(x) + gamma * ||x||^2 / 2 }.
struct ProxQuery {
  Eigen::VectorXd z;
  double coefficient = 0.0;
  double gamma = 0.0;
  Regularizer regularizer;

  // gamma + coefficient * modulus(h) > 0, and gamma > 0 for regularizers
  // without curvature.
  bool IsWellPosed() const;
  double Objective(const Eigen::VectorXd& x) const;
};

// Closed-form minimizer. Throws kDegenerateSubproblem when the query is not
// strongly convex.
Eigen::VectorXd ProxSolve(const ProxQuery& query);

// In-place variant used on the hot path; `out` is resized as needed.
void ProxSolveInto(const Eigen::VectorXd& z, double coefficient, double gamma,
                   const Regularizer& regularizer, Eigen::VectorXd& out);

// Brute-force minimizer for testing: exhaustive grid over
// [-box_radius, box_radius]^m followed by line-search refinement along
// coordinate and random directions. Only dimensions 1-3 are accepted
// (kOracleScale otherwise). Never uses the closed forms above.
Eigen::VectorXd ProxOracle(const ProxQuery& query, double box_radius,
                           double resolution);

}  // namespace pridda

#endif  // PRIDDA_PROX_H_
