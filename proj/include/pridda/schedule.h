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

#ifndef PRIDDA_SCHEDULE_H_
#define PRIDDA_SCHEDULE_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace pridda {

// Step weights a_t, their partial sums A_t and the proximal weights gamma_t.
// Index 0 is the empty prefix: a_0 = A_0 = gamma_0 = 0.
struct Schedule {
  enum class Kind {
    kStronglyConvex,  // a_t = t, gamma_t = 0; needs mu > 0
    kConvex,          // a_t = 1, gamma_t = gamma * sqrt(t)
    kConstantGamma,   // a_t = t, gamma_t = gamma
  };

  Kind kind = Kind::kConvex;
  double gamma = 0.0;
  double mu = 0.0;  // modulus of the regularizer

  static Schedule StronglyConvex(double mu);
  static Schedule Convex(double gamma, double mu = 0.0);
  static Schedule ConstantGamma(double gamma, double mu = 0.0);

  // Throws kInvalidSchedule.
  void Validate() const;

  double Weight(int64_t t) const;        // a_t
  double CumulativeWeight(int64_t t) const;  // A_t
  double Gamma(int64_t t) const;         // gamma_t

  std::string Name() const;
};

Schedule::Kind ParseScheduleKind(std::string_view name);

}  // namespace pridda

#endif  // PRIDDA_SCHEDULE_H_
