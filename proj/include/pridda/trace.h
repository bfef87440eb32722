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

#ifndef PRIDDA_TRACE_H_
#define PRIDDA_TRACE_H_

#include <cstdint>
#include <limits>
#include <vector>

namespace pridda {

inline constexpr double kNotAvailable = std::numeric_limits<double>::quiet_NaN();

// One recorded iteration. Ergodic quantities are the a_t-weighted running
// averages over iterates 1..t; "y" refers to the consensus iterate built from
// the node-average dual variable.
struct TraceRow {
  int64_t t = 0;
  double cumulative_weight = 0.0;  // A_t

  // F(mean_i xtilde_i) and its gap to the reference objective.
  double objective_mean_ergodic = 0.0;
  double subopt_mean_ergodic = kNotAvailable;
  // F(ytilde) and its gap.
  double objective_y_ergodic = 0.0;
  double subopt_y_ergodic = kNotAvailable;

  // (1/n) sum_i ||x_i - y||.
  double consensus_error = 0.0;
  // (1/n) sum_i ||x_i - y||^2.
  double consensus_error_sq = 0.0;
  // (1/n) sum_i ||xtilde_i - ytilde||.
  double ergodic_consensus_error = 0.0;
  // (1/n) sum_i ||xtilde_i - x*||^2 when x* is known.
  double mean_sq_dist_to_optimum = kNotAvailable;

  double eps_hat = kNotAvailable;
  double theorem2_envelope = kNotAvailable;
  double lemma4_envelope = kNotAvailable;
  double lemma4_envelope_sq = kNotAvailable;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  int64_t steps = 0;
  // Node-average dual recursion verified at every step.
  bool mean_dual_ok = true;
  double max_mean_dual_error = 0.0;
  double reference_objective = kNotAvailable;
};

}  // namespace pridda

#endif  // PRIDDA_TRACE_H_
