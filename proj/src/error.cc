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

#include "pridda/error.h"

namespace pridda {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kInfeasibleSampling:
      return "infeasible-sampling";
    case ErrorCode::kInfinitePrivacyLoss:
      return "infinite-privacy-loss";
    case ErrorCode::kSurrogateInvalid:
      return "surrogate-invalid";
    case ErrorCode::kOutOfRange:
      return "out-of-range";
    case ErrorCode::kHorizonTooShort:
      return "horizon-too-short";
    case ErrorCode::kParse:
      return "parse-error";
    case ErrorCode::kDegenerateSubproblem:
      return "degenerate-subproblem";
    case ErrorCode::kOracleScale:
      return "oracle-scale";
    case ErrorCode::kInvalidSchedule:
      return "invalid-schedule";
    case ErrorCode::kConfig:
      return "config-error";
    case ErrorCode::kIo:
      return "io-error";
  }
  return "unknown";
}

}  // namespace pridda
