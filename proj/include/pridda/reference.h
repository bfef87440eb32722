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

#ifndef PRIDDA_REFERENCE_H_
#define PRIDDA_REFERENCE_H_

#include <cstdint>

#include <Eigen/Dense>

#include "pridda/problems.h"
#include "pridda/schedule.h"

namespace pridda {

struct ReferenceOptions {
  int64_t max_iterations = 200000;
  // Proximal weight for the non-strongly-convex schedule gamma * sqrt(t).
  double gamma = 0.01;
  // Stop once the objective of the weighted average moved by less than
  // tolerance (relative) over the last `window` iterations.
  double tolerance = 1e-10;
  int64_t window = 1000;

  void Validate() const;
};

struct ReferenceSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  int64_t iterations = 0;
  bool converged = false;
};

// Schedule used by the centralized solver: a_t = t with the regularizer's
// modulus when it is strongly convex, a_t = 1 and gamma sqrt(t) otherwise.
Schedule ReferenceSchedule(const ProblemInstance& problem,
                           const ReferenceOptions& options);

// Centralized full-batch dual averaging on the pooled objective. Returns the
// best point seen among the iterates and their weighted averages, so more
// iterations never give a larger objective.
ReferenceSolution SolveReference(const ProblemInstance& problem,
                                 const ReferenceOptions& options = {});

}  // namespace pridda

#endif  // PRIDDA_REFERENCE_H_
