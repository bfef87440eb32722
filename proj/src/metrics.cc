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

#include "pridda/metrics.h"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "pridda/error.h"

namespace pridda {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// mu * iota * A_t + gamma_t.
double Curvature(const BoundParams& p, int64_t t) {
  return p.mu * p.iota * p.schedule.CumulativeWeight(t) + p.schedule.Gamma(t);
}

double CheckedCurvature(const BoundParams& p, int64_t t) {
  const double c = Curvature(p, t);
  if (!(c > 0.0)) {
    throw Error(ErrorCode::kInvalidSchedule,
                fmt::format("mu*iota*A_t + gamma_t = {} at t={}; envelope "
                            "undefined",
                            c, t));
  }
  return c;
}

// Bracketed factor multiplying each a_tau^2 / curvature term.
double NoiseAdjustedConstant(const BoundParams& p) {
  const double m = static_cast<double>(p.dimension);
  return ConstantM(p) + m * p.iota * p.sigma * p.sigma / 2.0 +
         2.0 * std::sqrt(m * p.iota) * p.lipschitz * p.sigma / (1.0 - p.beta);
}

}  // namespace

void BoundParams::Validate() const {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("beta must be in [0, 1), got {}", beta));
  }
  if (iota < 0.0 || iota > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("iota must be in [0, 1], got {}", iota));
  }
  if (lipschitz < 0.0 || mu < 0.0 || sigma < 0.0 || d_xstar < 0.0 ||
      dimension < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "bound parameters must be nonnegative with dimension >= 1");
  }
}

double ConstantM(const BoundParams& params) {
  params.Validate();
  const double l2 = params.lipschitz * params.lipschitz;
  return params.iota * l2 / 2.0 +
         2.0 * std::sqrt(params.iota) * l2 / (1.0 - params.beta);
}

double Theorem2Envelope(const BoundParams& params, int64_t t) {
  Theorem2Tracker tracker(params);
  if (t < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("envelope needs t >= 1, got {}", t));
  }
  double value = 0.0;
  while (tracker.t() < t) value = tracker.Advance();
  return value;
}

Theorem2Tracker::Theorem2Tracker(const BoundParams& params)
    : params_(params), per_step_constant_(NoiseAdjustedConstant(params)) {}

double Theorem2Tracker::Advance() {
  ++t_;
  const double a = params_.schedule.Weight(t_);
  partial_sum_ += a * a / CheckedCurvature(params_, t_);
  const double head =
      params_.iota > 0.0
          ? params_.schedule.Gamma(t_) * params_.d_xstar / params_.iota
          : (params_.d_xstar > 0.0 && params_.schedule.Gamma(t_) > 0.0 ? kInfinity
                                                                        : 0.0);
  return (head + partial_sum_ * per_step_constant_) /
         params_.schedule.CumulativeWeight(t_);
}

ConsensusEnvelope Lemma4Envelope(const BoundParams& params, int64_t t) {
  params.Validate();
  if (t < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("envelope needs t >= 1, got {}", t));
  }
  const double curvature = CheckedCurvature(params, t);
  const double a = params.schedule.Weight(t);
  const double m = static_cast<double>(params.dimension);
  const double gap = 1.0 - params.beta;
  ConsensusEnvelope out;
  out.mean = a * (params.lipschitz + std::sqrt(m) * params.sigma) *
             std::sqrt(params.iota) / (gap * curvature);
  out.mean_square = a * a *
                    (params.lipschitz * params.lipschitz +
                     m * params.sigma * params.sigma) *
                    params.iota / (gap * gap * curvature * curvature);
  return out;
}

double CorollaryEnvelope(const BoundParams& params, Corollary which, int64_t t) {
  params.Validate();
  if (t < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("envelope needs t >= 1, got {}", t));
  }
  const double tt = static_cast<double>(t);
  const double gap = 1.0 - params.beta;
  const double l2 = params.lipschitz * params.lipschitz;
  switch (which) {
    case Corollary::kStronglyConvexDistance: {
      if (params.schedule.kind != Schedule::Kind::kStronglyConvex ||
          !(params.mu > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "distance envelope needs the strongly convex schedule");
      }
      if (params.iota == 0.0) return kInfinity;
      const double mu2 = params.mu * params.mu;
      return 16.0 / (tt + 1.0) *
             (l2 * (std::log(tt) + 1.0) / (mu2 * params.iota * gap * gap * tt) +
              ConstantM(params) / (mu2 * params.iota));
    }
    case Corollary::kConvexSuboptimality: {
      if (params.schedule.kind != Schedule::Kind::kConvex) {
        throw Error(ErrorCode::kInvalidArgument,
                    "suboptimality envelope needs the convex schedule");
      }
      if (params.iota == 0.0) return kInfinity;
      return (params.d_xstar + 2.0 * params.iota * ConstantM(params)) /
             (params.iota * params.schedule.gamma * std::sqrt(tt));
    }
    case Corollary::kConvexConsensus: {
      if (params.schedule.kind != Schedule::Kind::kConvex) {
        throw Error(ErrorCode::kInvalidArgument,
                    "consensus envelope needs the convex schedule");
      }
      return 2.0 * params.lipschitz * std::sqrt(params.iota) /
             (params.schedule.gamma * gap * std::sqrt(tt));
    }
  }
  return kInfinity;
}

double LogLogSlope(std::span<const double> x, std::span<const double> y,
                   double lo, double hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0) || x[i] < lo || x[i] > hi) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) return kNotAvailable;
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return kNotAvailable;
  return (count * sxy - sx * sy) / denom;
}

UtilitySummary Summarize(const RunTrace& trace, double reference) {
  UtilitySummary s;
  if (trace.rows.empty()) return s;
  std::vector<double> ts;
  for (const auto& row : trace.rows) {
    s.subopt.push_back(row.objective_mean_ergodic - reference);
    ts.push_back(static_cast<double>(row.t));
  }
  s.first_subopt = s.subopt.front();
  s.final_subopt = s.subopt.back();
  s.final_mean_sq_dist = trace.rows.back().mean_sq_dist_to_optimum;
  for (size_t i = 1; i < s.subopt.size(); ++i) {
    s.area_under_curve +=
        0.5 * (s.subopt[i] + s.subopt[i - 1]) * (ts[i] - ts[i - 1]);
  }
  s.loglog_slope = LogLogSlope(ts, s.subopt, 0.0, kInfinity);
  return s;
}

}  // namespace pridda
