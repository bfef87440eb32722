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

#include "pridda/privacy.h"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "pridda/error.h"

namespace pridda {
namespace {

void RequireOpenUnit(double value, const char* name) {
  if (!(value > 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} must be in (0, 1], got {}", name, value));
  }
}

}  // namespace

void PrivacyBudget::Validate() const {
  RequireOpenUnit(epsilon, "epsilon");
  RequireOpenUnit(delta0, "delta0");
  RequireOpenUnit(iota, "iota");
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("lipschitz must be positive, got {}", lipschitz));
  }
  if (samples_per_node < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("samples per node must be >= 1, got {}",
                            samples_per_node));
  }
  if (horizon < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("horizon must be >= 1, got {}", horizon));
  }
}

double Sensitivity(double lipschitz, int64_t q) {
  if (lipschitz < 0.0 || q < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("sensitivity needs L >= 0 and q >= 1, got L={} q={}",
                            lipschitz, q));
  }
  return 2.0 * lipschitz / static_cast<double>(q);
}

double PerStepEpsilon(double lipschitz, int64_t q, double sigma,
                      double delta0) {
  RequireOpenUnit(delta0, "delta0");
  if (sigma < 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("sigma must be nonnegative, got {}", sigma));
  }
  const double numerator =
      Sensitivity(lipschitz, q) * std::sqrt(2.0 * std::log(2.0 / delta0));
  if (sigma == 0.0) {
    if (numerator == 0.0) return 0.0;
    throw Error(ErrorCode::kInfinitePrivacyLoss,
                "zero noise with positive sensitivity has unbounded privacy loss");
  }
  return numerator / sigma;
}

Amplification Amplify(double epsilon, double delta, double iota,
                      bool require_surrogate) {
  if (!(epsilon >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("epsilon must be nonnegative, got {}", epsilon));
  }
  RequireOpenUnit(iota, "iota");
  if (delta < 0.0 || delta > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("delta must be in [0, 1], got {}", delta));
  }
  if (require_surrogate && epsilon > kSurrogateEpsilonLimit) {
    throw Error(ErrorCode::kSurrogateInvalid,
                fmt::format("2*iota*eps does not bound iota*(e^eps - 1) for "
                            "eps={} > {}",
                            epsilon, kSurrogateEpsilonLimit));
  }
  Amplification out;
  out.exact_epsilon = iota * std::expm1(epsilon);
  out.surrogate_epsilon = 2.0 * iota * epsilon;
  out.delta = iota * delta;
  return out;
}

EpsilonDelta Compose(const std::vector<EpsilonDelta>& steps,
                     double delta_prime) {
  RequireOpenUnit(delta_prime, "delta_prime");
  double sum_sq = 0.0;
  double survive = 1.0 - delta_prime;
  for (size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    if (!(s.epsilon > 0.0 && s.epsilon <= kCompositionEpsilonLimit)) {
      throw Error(ErrorCode::kOutOfRange,
                  fmt::format("step {} has epsilon {} outside (0, {}]", i + 1,
                              s.epsilon, kCompositionEpsilonLimit));
    }
    if (!(s.delta > 0.0 && s.delta <= 1.0)) {
      throw Error(ErrorCode::kOutOfRange,
                  fmt::format("step {} has delta {} outside (0, 1]", i + 1,
                              s.delta));
    }
    sum_sq += s.epsilon * s.epsilon;
    survive *= 1.0 - s.delta;
  }
  EpsilonDelta out;
  out.epsilon =
      std::sqrt(2.0 * sum_sq *
                std::log(std::numbers::e + std::sqrt(sum_sq) / delta_prime)) +
      sum_sq;
  out.delta = 1.0 - survive;
  return out;
}

EpsilonDelta ComposeUniform(EpsilonDelta step, int64_t count,
                            double delta_prime) {
  RequireOpenUnit(delta_prime, "delta_prime");
  if (count < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("step count must be nonnegative, got {}", count));
  }
  if (count == 0) return {0.0, delta_prime};
  if (!(step.epsilon > 0.0 && step.epsilon <= kCompositionEpsilonLimit)) {
    throw Error(ErrorCode::kOutOfRange,
                fmt::format("epsilon {} outside (0, {}]", step.epsilon,
                            kCompositionEpsilonLimit));
  }
  if (!(step.delta > 0.0 && step.delta <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange,
                fmt::format("delta {} outside (0, 1]", step.delta));
  }
  const double sum_sq = static_cast<double>(count) * step.epsilon * step.epsilon;
  EpsilonDelta out;
  out.epsilon =
      std::sqrt(2.0 * sum_sq *
                std::log(std::numbers::e + std::sqrt(sum_sq) / delta_prime)) +
      sum_sq;
  // 1 - (1 - d')(1 - d)^T without cancellation for tiny d.
  const double log_survive = std::log1p(-delta_prime) +
                             static_cast<double>(count) * std::log1p(-step.delta);
  out.delta = -std::expm1(log_survive);
  return out;
}

int64_t MinimumHorizon(double epsilon, double iota) {
  RequireOpenUnit(epsilon, "epsilon");
  RequireOpenUnit(iota, "iota");
  const double bound = 5.0 * epsilon * epsilon / (4.0 * iota * iota);
  // Guard against 125.00000000000001 style rounding.
  const double rounded = std::round(bound);
  if (std::abs(bound - rounded) <= 1e-9 * std::max(1.0, bound)) {
    return std::max<int64_t>(1, static_cast<int64_t>(rounded));
  }
  return std::max<int64_t>(1, static_cast<int64_t>(std::ceil(bound)));
}

double CalibratedVariance(const PrivacyBudget& budget) {
  const double q = static_cast<double>(budget.samples_per_node);
  return 32.0 * budget.iota * budget.iota * budget.lipschitz *
         budget.lipschitz * static_cast<double>(budget.horizon) *
         std::log(2.0 / budget.delta0) / (q * q * budget.epsilon * budget.epsilon);
}

NoiseCalibration Calibrate(const PrivacyBudget& budget) {
  budget.Validate();
  NoiseCalibration cal;
  cal.minimum_horizon = MinimumHorizon(budget.epsilon, budget.iota);
  if (budget.horizon < cal.minimum_horizon) {
    throw Error(ErrorCode::kHorizonTooShort,
                fmt::format("horizon {} is below the minimum feasible T={} for "
                            "epsilon={} iota={}",
                            budget.horizon, cal.minimum_horizon, budget.epsilon,
                            budget.iota));
  }
  cal.sigma_squared = CalibratedVariance(budget);
  cal.sigma = std::sqrt(cal.sigma_squared);
  cal.per_step_epsilon = PerStepEpsilon(budget.lipschitz,
                                        budget.samples_per_node, cal.sigma,
                                        budget.delta0);
  Amplification amp = Amplify(cal.per_step_epsilon, budget.delta0, budget.iota);
  cal.amplified_epsilon = amp.surrogate_epsilon;
  cal.exact_amplified_epsilon = amp.exact_epsilon;
  cal.amplified_delta = amp.delta;
  // Slack fixed to the root of the summed squared per-step losses.
  const double sum_sq = static_cast<double>(budget.horizon) *
                        cal.amplified_epsilon * cal.amplified_epsilon;
  cal.delta_prime = std::min(1.0, std::sqrt(sum_sq));
  cal.achieved = ComposeUniform({cal.amplified_epsilon, cal.amplified_delta},
                                budget.horizon, cal.delta_prime);
  cal.guarantee_holds = cal.achieved.epsilon <= budget.epsilon;
  return cal;
}

double PrivacyLossAt(int64_t t, int64_t horizon, double epsilon) {
  if (horizon < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("horizon must be >= 1, got {}", horizon));
  }
  if (t < 0 || t > horizon) {
    throw Error(ErrorCode::kOutOfRange,
                fmt::format("t={} outside [0, {}]", t, horizon));
  }
  const double ratio = static_cast<double>(t) / static_cast<double>(horizon);
  return std::sqrt(3.0 * ratio / 5.0) * epsilon + ratio / 5.0 * epsilon * epsilon;
}

}  // namespace pridda
