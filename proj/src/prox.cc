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

#include "pridda/prox.h"

#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "pridda/error.h"

namespace pridda {
namespace {

constexpr int kMaxOracleDimension = 3;
constexpr int kMaxRefinementSweeps = 400;

double Curvature(double coefficient, double gamma, const Regularizer& reg) {
  return gamma + coefficient * reg.Modulus();
}

void RequireWellPosed(double coefficient, double gamma, const Regularizer& reg) {
  const bool ok = coefficient >= 0.0 && gamma >= 0.0 &&
                  (reg.kind == Regularizer::Kind::kL2Half
                       ? Curvature(coefficient, gamma, reg) > 0.0
                       : gamma > 0.0);
  if (!ok) {
    throw Error(ErrorCode::kDegenerateSubproblem,
                fmt::format("primal map with {} regularizer, coefficient {} and "
                            "gamma {} is not strongly convex",
                            reg.Name(), coefficient, gamma));
  }
}

// Largest s in [0, limit] with x + s*d feasible, found by bisection on the
// regularizer's domain.
double FeasibleExtent(const ProxQuery& q, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& d, double limit) {
  if (std::isfinite(RegularizerValue(q.regularizer, x + limit * d))) return limit;
  double lo = 0.0, hi = limit;
  for (int i = 0; i < 200 && hi - lo > 1e-16 * limit; ++i) {
    double mid = 0.5 * (lo + hi);
    if (std::isfinite(RegularizerValue(q.regularizer, x + mid * d))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// Pulls an infeasible point back along the segment to the origin, which lies
// in the domain of every regularizer.
Eigen::VectorXd Retract(const ProxQuery& q, const Eigen::VectorXd& y) {
  if (std::isfinite(RegularizerValue(q.regularizer, y))) return y;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 64; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::isfinite(RegularizerValue(q.regularizer, mid * y))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo * y;
}

// Golden-section search of s -> objective(x + s d) on [lo, hi], optionally
// through the retraction.
double LineMinimize(const ProxQuery& q, const Eigen::VectorXd& x,
                    const Eigen::VectorXd& d, double lo, double hi,
                    bool retract = false) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double s) {
    return q.Objective(retract ? Retract(q, x + s * d) : Eigen::VectorXd(x + s * d));
  };
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = f(c), fe = f(e);
  while (b - a > 1e-14 * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc <= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = f(e);
    }
  }
  double best = 0.5 * (a + b);
  // Never accept a worse point than staying put.
  return f(best) <= f(0.0) ? best : 0.0;
}

}  // namespace

bool ProxQuery::IsWellPosed() const {
  if (coefficient < 0.0 || gamma < 0.0) return false;
  if (regularizer.kind == Regularizer::Kind::kL2Half) {
    return Curvature(coefficient, gamma, regularizer) > 0.0;
  }
  return gamma > 0.0;
}

double ProxQuery::Objective(const Eigen::VectorXd& x) const {
  double h = RegularizerValue(regularizer, x);
  // For an indicator the coefficient does not matter: c * h == h.
  double scaled =
      regularizer.kind == Regularizer::Kind::kBall ? h : coefficient * h;
  return z.dot(x) + scaled + 0.5 * gamma * x.squaredNorm();
}

void ProxSolveInto(const Eigen::VectorXd& z, double coefficient, double gamma,
                   const Regularizer& regularizer, Eigen::VectorXd& out) {
  RequireWellPosed(coefficient, gamma, regularizer);
  out.resize(z.size());
  switch (regularizer.kind) {
    case Regularizer::Kind::kZero:
      out = -z / gamma;
      return;
    case Regularizer::Kind::kL2Half:
      out = -z / (coefficient * regularizer.parameter + gamma);
      return;
    case Regularizer::Kind::kL1: {
      const double threshold = coefficient * regularizer.parameter;
      for (Eigen::Index j = 0; j < z.size(); ++j) {
        const double shrunk = std::max(std::abs(z(j)) - threshold, 0.0);
        out(j) = z(j) > 0.0 ? -shrunk / gamma : shrunk / gamma;
      }
      return;
    }
    case Regularizer::Kind::kBall: {
      const double radius = regularizer.parameter;
      const double norm = z.norm();
      if (norm / gamma <= radius) {
        out = -z / gamma;
      } else {
        out = -radius * z / norm;
      }
      return;
    }
  }
}

Eigen::VectorXd ProxSolve(const ProxQuery& query) {
  Eigen::VectorXd out;
  ProxSolveInto(query.z, query.coefficient, query.gamma, query.regularizer, out);
  return out;
}

Eigen::VectorXd ProxOracle(const ProxQuery& query, double box_radius,
                           double resolution) {
  const int m = static_cast<int>(query.z.size());
  if (m < 1 || m > kMaxOracleDimension) {
    throw Error(ErrorCode::kOracleScale,
                fmt::format("oracle handles dimensions 1..{}, got {}",
                            kMaxOracleDimension, m));
  }
  if (!(box_radius > 0.0) || !(resolution > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "oracle box and resolution must be positive");
  }
  if (!query.IsWellPosed()) {
    throw Error(ErrorCode::kDegenerateSubproblem, "oracle query is not strongly convex");
  }

  // Exhaustive grid.
  const int per_axis = static_cast<int>(std::floor(2.0 * box_radius / resolution)) + 1;
  long long total = 1;
  for (int j = 0; j < m; ++j) total *= per_axis;
  Eigen::VectorXd point(m), best = Eigen::VectorXd::Zero(m);
  double best_value = query.Objective(best);
  for (long long idx = 0; idx < total; ++idx) {
    long long rest = idx;
    for (int j = 0; j < m; ++j) {
      point(j) = -box_radius + resolution * static_cast<double>(rest % per_axis);
      rest /= per_axis;
    }
    const double v = query.Objective(point);
    if (v < best_value) {
      best_value = v;
      best = point;
    }
  }

  // Line-search refinement along the axes and along fresh random orthonormal
  // bases, which lets it slide along a curved boundary.
  const double curvature =
      query.gamma + query.coefficient * query.regularizer.Modulus();
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x = best;
  for (int sweep = 0; sweep < kMaxRefinementSweeps; ++sweep) {
    std::vector<Eigen::VectorXd> directions;
    for (int j = 0; j < m; ++j) directions.push_back(Eigen::VectorXd::Unit(m, j));
    Eigen::MatrixXd random(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) random(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random);
    Eigen::MatrixXd basis = qr.householderQ();
    for (int j = 0; j < m; ++j) directions.push_back(basis.col(j));

    double moved = 0.0;
    for (const auto& d : directions) {
      const double limit = 2.0 * (x.norm() + query.z.norm() / curvature) + 1.0;
      const double hi = FeasibleExtent(query, x, d, limit);
      const double lo = -FeasibleExtent(query, x, -d, limit);
      const double s = LineMinimize(query, x, d, lo, hi);
      x += s * d;
      moved = std::max(moved, std::abs(s));
      if (query.regularizer.kind == Regularizer::Kind::kBall) {
        const double r = LineMinimize(query, x, d, -limit, limit, /*retract=*/true);
        const Eigen::VectorXd slid = Retract(query, x + r * d);
        moved = std::max(moved, (slid - x).norm());
        x = slid;
      }
    }
    if (moved < 1e-12 && sweep >= 2) break;
  }
  return x;
}

}  // namespace pridda
