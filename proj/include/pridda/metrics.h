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

#ifndef PRIDDA_METRICS_H_
#define PRIDDA_METRICS_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pridda/schedule.h"
#include "pridda/trace.h"

namespace pridda {

// Constants entering the convergence envelopes.
struct BoundParams {
  double lipschitz = 1.0;
  double beta = 0.5;  // [0, 1)
  double iota = 1.0;
  double mu = 0.0;
  double sigma = 0.0;
  int dimension = 1;
  double d_xstar = 0.0;  // ||x*||^2 / 2
  Schedule schedule;

  void Validate() const;
};

// iota L^2 / 2 + 2 sqrt(iota) L^2 / (1 - beta).
double ConstantM(const BoundParams& params);

// Upper bound on E[F(ytilde_t) - F(x*)]:
//   A_t^{-1} [ gamma_t d(x*) / iota
//             + sum_{tau<=t} a_tau^2 / (mu iota A_tau + gamma_tau)
//               * (M + m iota sigma^2 / 2 + 2 sqrt(m iota) L sigma / (1-beta)) ]
double Theorem2Envelope(const BoundParams& params, int64_t t);

// Incremental form of Theorem2Envelope for t = 1, 2, ...
class Theorem2Tracker {
 public:
  explicit Theorem2Tracker(const BoundParams& params);
  // Advances to t+1 and returns the envelope there.
  double Advance();
  int64_t t() const { return t_; }

 private:
  BoundParams params_;
  double per_step_constant_;
  double partial_sum_ = 0.0;
  int64_t t_ = 0;
};

// Consensus bound on the non-averaged iterates at time t.
struct ConsensusEnvelope {
  double mean = 0.0;         // bound on (1/n) sum E||x_i - y||
  double mean_square = 0.0;  // bound on (1/n) sum E||x_i - y||^2
};

ConsensusEnvelope Lemma4Envelope(const BoundParams& params, int64_t t);

enum class Corollary {
  kStronglyConvexDistance,  // mean squared distance of xtilde_i to x*
  kConvexSuboptimality,     // F(ytilde) - F(x*)
  kConvexConsensus,         // (1/n) sum ||xtilde_i - ytilde||
};

// Closed-form corollary envelopes. Returns +infinity when iota == 0 makes
// the bound diverge. Throws kInvalidArgument when the schedule does not match
// the corollary's hypothesis.
double CorollaryEnvelope(const BoundParams& params, Corollary which, int64_t t);

struct UtilitySummary {
  double first_subopt = kNotAvailable;
  double final_subopt = kNotAvailable;
  double final_mean_sq_dist = kNotAvailable;
  // Trapezoidal area under the suboptimality curve in t.
  double area_under_curve = 0.0;
  // Least-squares slope of log(subopt) against log(t) over positive rows.
  double loglog_slope = kNotAvailable;
  std::vector<double> subopt;
};

// Suboptimality of the node-mean ergodic iterate against `reference`.
UtilitySummary Summarize(const RunTrace& trace, double reference);

// Least-squares slope of log(y) on log(x), using pairs with x, y > 0 and
// lo <= x <= hi.
double LogLogSlope(std::span<const double> x, std::span<const double> y,
                   double lo, double hi);

}  // namespace pridda

#endif  // PRIDDA_METRICS_H_
