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

#include "pridda/schedule.h"

#include <cmath>

#include <fmt/format.h>

#include "pridda/error.h"

namespace pridda {

Schedule Schedule::StronglyConvex(double mu) {
  return {Kind::kStronglyConvex, 0.0, mu};
}

Schedule Schedule::Convex(double gamma, double mu) {
  return {Kind::kConvex, gamma, mu};
}

Schedule Schedule::ConstantGamma(double gamma, double mu) {
  return {Kind::kConstantGamma, gamma, mu};
}

void Schedule::Validate() const {
  if (mu < 0.0) {
    throw Error(ErrorCode::kInvalidSchedule,
                fmt::format("modulus must be nonnegative, got {}", mu));
  }
  switch (kind) {
    case Kind::kStronglyConvex:
      if (!(mu > 0.0)) {
        throw Error(ErrorCode::kInvalidSchedule,
                    "strongly convex schedule (a_t = t, gamma_t = 0) needs a "
                    "strongly convex regularizer");
      }
      break;
    case Kind::kConvex:
    case Kind::kConstantGamma:
      if (!(gamma > 0.0)) {
        throw Error(ErrorCode::kInvalidSchedule,
                    fmt::format("{} schedule needs gamma > 0, got {}", Name(),
                                gamma));
      }
      break;
  }
}

double Schedule::Weight(int64_t t) const {
  if (t <= 0) return 0.0;
  return kind == Kind::kConvex ? 1.0 : static_cast<double>(t);
}

double Schedule::CumulativeWeight(int64_t t) const {
  if (t <= 0) return 0.0;
  const double tt = static_cast<double>(t);
  return kind == Kind::kConvex ? tt : tt * (tt + 1.0) / 2.0;
}

double Schedule::Gamma(int64_t t) const {
  if (t <= 0) return 0.0;
  switch (kind) {
    case Kind::kStronglyConvex:
      return 0.0;
    case Kind::kConvex:
      return gamma * std::sqrt(static_cast<double>(t));
    case Kind::kConstantGamma:
      return gamma;
  }
  return 0.0;
}

std::string Schedule::Name() const {
  switch (kind) {
    case Kind::kStronglyConvex:
      return "strongly_convex";
    case Kind::kConvex:
      return "convex";
    case Kind::kConstantGamma:
      return "constant_gamma";
  }
  return "unknown";
}

Schedule::Kind ParseScheduleKind(std::string_view name) {
  if (name == "strongly_convex") return Schedule::Kind::kStronglyConvex;
  if (name == "convex") return Schedule::Kind::kConvex;
  if (name == "constant_gamma") return Schedule::Kind::kConstantGamma;
  throw Error(ErrorCode::kConfig,
              fmt::format("unknown schedule '{}' (strongly_convex, convex, "
                          "constant_gamma)",
                          name));
}

}  // namespace pridda
