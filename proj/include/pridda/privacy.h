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

#ifndef PRIDDA_PRIVACY_H_
#define PRIDDA_PRIVACY_H_

#include <cstdint>
#include <vector>

// Differential-privacy accountant for node-sampled private dual averaging:
// Gaussian mechanism on one perturbed subgradient, amplification by node
// sampling, heterogeneous advanced composition, and the noise calibration that
// strings them together. All logarithms are natural.

namespace pridda {

struct EpsilonDelta {
  double epsilon = 0.0;
  double delta = 0.0;
};

// Target guarantee and the quantities the noise level depends on.
struct PrivacyBudget {
  double epsilon = 1.0;   // (0, 1]
  double delta0 = 0.01;   // (0, 1]
  double iota = 1.0;      // fraction of nodes active per round, (0, 1]
  double lipschitz = 1.0;
  int64_t samples_per_node = 1;  // q, the smallest local dataset
  int64_t horizon = 1;           // T

  // Throws kInvalidArgument when a field is outside its domain. Does not
  // check the horizon condition; see MinimumHorizon.
  void Validate() const;
};

struct NoiseCalibration {
  double sigma = 0.0;
  double sigma_squared = 0.0;
  double per_step_epsilon = 0.0;    // epsilon_t of the Gaussian mechanism
  double amplified_epsilon = 0.0;   // 2 * iota * epsilon_t
  double exact_amplified_epsilon = 0.0;  // iota * (exp(epsilon_t) - 1)
  double amplified_delta = 0.0;     // iota * delta0
  double delta_prime = 0.0;         // slack used in the composition replay
  EpsilonDelta achieved;            // composed over the horizon
  int64_t minimum_horizon = 0;
  // achieved.epsilon <= target epsilon.
  bool guarantee_holds = false;
};

// Largest epsilon for which 2 * iota * eps bounds iota * (exp(eps) - 1) for
// every iota; root of exp(x) - 1 = 2x.
inline constexpr double kSurrogateEpsilonLimit = 1.2564;

// Per-step epsilon accepted by the composition rule.
inline constexpr double kCompositionEpsilonLimit = 0.9;

double Sensitivity(double lipschitz, int64_t q);

// epsilon_t = 2 L sqrt(2 ln(2 / delta0)) / (q sigma). sigma == 0 throws
// kInfinitePrivacyLoss.
double PerStepEpsilon(double lipschitz, int64_t q, double sigma,
                      double delta0);

struct Amplification {
  double exact_epsilon = 0.0;      // iota * (exp(eps) - 1)
  double surrogate_epsilon = 0.0;  // 2 * iota * eps
  double delta = 0.0;              // iota * delta
};

// Amplification by node sampling. With `require_surrogate`, epsilons above
// kSurrogateEpsilonLimit throw kSurrogateInvalid since 2*iota*eps would no
// longer upper-bound the exact value.
Amplification Amplify(double epsilon, double delta, double iota,
                      bool require_surrogate = true);

// Advanced composition of heterogeneous (epsilon_i, delta_i) steps with slack
// delta_prime. Every epsilon_i must lie in (0, 0.9].
EpsilonDelta Compose(const std::vector<EpsilonDelta>& steps,
                     double delta_prime);

// Same as Compose for `count` identical steps, in O(1).
EpsilonDelta ComposeUniform(EpsilonDelta step, int64_t count,
                            double delta_prime);

// ceil(5 epsilon^2 / (4 iota^2)).
int64_t MinimumHorizon(double epsilon, double iota);

// Smallest admissible sigma^2 for the budget, then replays sensitivity,
// Gaussian mechanism, amplification and composition at that sigma. Throws
// kHorizonTooShort when horizon < MinimumHorizon.
NoiseCalibration Calibrate(const PrivacyBudget& budget);

// 32 iota^2 L^2 T ln(2/delta0) / (q^2 epsilon^2).
double CalibratedVariance(const PrivacyBudget& budget);

// Cumulative loss after t of T rounds:
// sqrt(3t / (5T)) * epsilon + t / (5T) * epsilon^2.
double PrivacyLossAt(int64_t t, int64_t horizon, double epsilon);

}  // namespace pridda

#endif  // PRIDDA_PRIVACY_H_
