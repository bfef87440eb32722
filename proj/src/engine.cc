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

#include "pridda/engine.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "pridda/error.h"
#include "pridda/metrics.h"
#include "pridda/prox.h"
#include "pridda/random.h"

namespace pridda {
namespace {

void Require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::kInvalidArgument, message);
}

double PrimalCoefficient(const RunConfig& config, int64_t t) {
  return config.iota * config.schedule.CumulativeWeight(t);
}

}  // namespace

void RunConfig::Validate() const {
  Require(problem != nullptr, "run config has no problem");
  Require(sampler != nullptr, "run config has no gossip sampler");
  Require(sampler->graph().node_count() == problem->node_count(),
          fmt::format("gossip graph has {} nodes, problem has {}",
                      sampler->graph().node_count(), problem->node_count()));
  Require(horizon >= 1, fmt::format("horizon must be >= 1, got {}", horizon));
  Require(trace_stride >= 1,
          fmt::format("trace stride must be >= 1, got {}", trace_stride));
  schedule.Validate();
  const double modulus = problem->regularizer.Modulus();
  if (std::abs(schedule.mu - modulus) > 1e-12 * std::max(1.0, modulus)) {
    throw Error(ErrorCode::kInvalidSchedule,
                fmt::format("schedule modulus {} differs from the regularizer's "
                            "{}",
                            schedule.mu, modulus));
  }
  Require(std::abs(iota - sampler->SamplingRatio()) <= 1e-12,
          fmt::format("iota {} does not match the sampler's active fraction {}",
                      iota, sampler->SamplingRatio()));
  ProxQuery first{Eigen::VectorXd::Zero(problem->dimension),
                  PrimalCoefficient(*this, 1), schedule.Gamma(1),
                  problem->regularizer};
  if (!first.IsWellPosed()) {
    throw Error(ErrorCode::kDegenerateSubproblem,
                fmt::format("{} schedule with {} regularizer leaves the primal "
                            "map degenerate",
                            schedule.Name(), problem->regularizer.Name()));
  }
  if (privacy) {
    Require(std::abs(privacy->budget.iota - iota) <= 1e-12,
            fmt::format("privacy budget iota {} differs from run iota {}",
                        privacy->budget.iota, iota));
    Require(privacy->budget.horizon == horizon,
            fmt::format("privacy budget horizon {} differs from run horizon {}",
                        privacy->budget.horizon, horizon));
    Require(privacy->calibration.sigma >= 0.0, "negative noise level");
  }
  if (reference && reference->x.size() > 0) {
    Require(reference->x.size() == problem->dimension,
            "reference point has the wrong dimension");
  }
  if (beta) {
    Require(*beta >= 0.0 && *beta < 1.0,
            fmt::format("beta must be in [0, 1), got {}", *beta));
  }
}

RunConfig MakeRunConfig(std::shared_ptr<const ProblemInstance> problem,
                        Schedule schedule,
                        std::shared_ptr<const GossipSampler> sampler,
                        int64_t horizon, uint64_t seed) {
  RunConfig config;
  schedule.mu = problem->regularizer.Modulus();
  config.problem = std::move(problem);
  config.schedule = schedule;
  config.iota = sampler->SamplingRatio();
  config.sampler = std::move(sampler);
  config.horizon = horizon;
  config.seed = seed;
  config.trace_stride = 1;
  return config;
}

std::vector<NodeState> InitialStates(const RunConfig& config) {
  const int n = config.problem->node_count();
  const int m = config.problem->dimension;
  std::vector<NodeState> states(n);
  Eigen::VectorXd x0;
  ProxSolveInto(Eigen::VectorXd::Zero(m), PrimalCoefficient(config, 1),
                config.schedule.Gamma(1), config.problem->regularizer, x0);
  for (auto& s : states) {
    s.z = Eigen::VectorXd::Zero(m);
    s.x = x0;
    s.ergodic_num = config.schedule.Weight(1) * x0;
  }
  return states;
}

StepInfo Step(std::vector<NodeState>& states, const GossipMatrix& gossip,
              int64_t t, const RunConfig& config) {
  const ProblemInstance& problem = *config.problem;
  const int n = problem.node_count();
  const int m = problem.dimension;
  Require(static_cast<int>(states.size()) == n && gossip.size() == n,
          "state and gossip sizes disagree with the problem");
  const double a_t = config.schedule.Weight(t);
  const double sigma = config.Sigma();

  std::vector<int> active;
  for (int i = 0; i < n; ++i) {
    if (gossip.active[i]) active.push_back(i);
  }

  StepInfo info;
  info.theta = Eigen::VectorXd::Zero(m);
  info.active_count = static_cast<int>(active.size());
  if (active.empty()) return info;

  // Outgoing message z_j + a_t * zeta_j of each active node; inactive nodes
  // contribute their plain z_j.
  std::vector<Eigen::VectorXd> message(n);
  for (int j : active) {
    const auto& local = problem.locals[j].samples;
    Eigen::VectorXd zeta = Eigen::VectorXd::Zero(m);
    KeyedRng sample_rng({config.seed, static_cast<uint64_t>(Stream::kDataSample),
                         static_cast<uint64_t>(j), static_cast<uint64_t>(t)});
    std::uniform_int_distribution<size_t> pick(0, local.size() - 1);
    AddHingeSubgradient(states[j].x, local[pick(sample_rng)], 1.0, zeta);
    if (sigma > 0.0) {
      KeyedRng noise_rng({config.seed, static_cast<uint64_t>(Stream::kNoise),
                          static_cast<uint64_t>(j), static_cast<uint64_t>(t)});
      std::normal_distribution<double> normal(0.0, sigma);
      for (int k = 0; k < m; ++k) zeta(k) += normal(noise_rng);
    }
    info.theta += zeta;
    message[j] = states[j].z + a_t * zeta;
  }
  info.theta /= static_cast<double>(n);

  std::vector<Eigen::VectorXd> next_z(active.size());
  for (size_t k = 0; k < active.size(); ++k) {
    const int i = active[k];
    next_z[k] = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < n; ++j) {
      const double w = gossip.entries(i, j);
      if (w == 0.0) continue;
      next_z[k] += w * (gossip.active[j] ? message[j] : states[j].z);
    }
  }

  const double coefficient = PrimalCoefficient(config, t + 1);
  const double gamma = config.schedule.Gamma(t + 1);
  for (size_t k = 0; k < active.size(); ++k) {
    NodeState& s = states[active[k]];
    s.z = std::move(next_z[k]);
    ProxSolveInto(s.z, coefficient, gamma, problem.regularizer, s.x);
  }
  const double a_next = config.schedule.Weight(t + 1);
  for (auto& s : states) s.ergodic_num += a_next * s.x;
  return info;
}

Eigen::VectorXd AuxiliaryY(const Eigen::VectorXd& mean_z, int64_t t,
                           const RunConfig& config) {
  Eigen::VectorXd y;
  ProxSolveInto(mean_z, PrimalCoefficient(config, t), config.schedule.Gamma(t),
                config.problem->regularizer, y);
  return y;
}

Eigen::VectorXd MeanDual(const std::vector<NodeState>& states) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(states.front().z.size());
  for (const auto& s : states) mean += s.z;
  return mean / static_cast<double>(states.size());
}

double MeanDualError(const MeanDualSnapshot& snapshot) {
  const Eigen::VectorXd predicted =
      snapshot.mean_before + snapshot.weight * snapshot.theta;
  const double scale = std::max({1.0, snapshot.mean_after.norm(), predicted.norm()});
  return (snapshot.mean_after - predicted).norm() / scale;
}

bool CheckMeanDualRecursion(std::span<const MeanDualSnapshot> snapshots,
                            double tolerance) {
  return std::all_of(snapshots.begin(), snapshots.end(),
                     [&](const MeanDualSnapshot& s) {
                       return MeanDualError(s) <= tolerance;
                     });
}

RunTrace Run(const RunConfig& config) {
  config.Validate();
  const ProblemInstance& problem = *config.problem;
  const int n = problem.node_count();
  const Schedule& schedule = config.schedule;

  RunTrace trace;
  trace.rows.reserve(static_cast<size_t>(config.horizon / config.trace_stride));
  if (config.reference) trace.reference_objective = config.reference->objective;

  std::optional<BoundParams> bounds;
  std::optional<Theorem2Tracker> theorem2;
  if (config.beta) {
    BoundParams p;
    p.lipschitz = problem.lipschitz;
    p.beta = *config.beta;
    p.iota = config.iota;
    p.mu = schedule.mu;
    p.sigma = config.Sigma();
    p.dimension = problem.dimension;
    p.d_xstar = (config.reference && config.reference->x.size() > 0)
                    ? 0.5 * config.reference->x.squaredNorm()
                    : 0.0;
    p.schedule = schedule;
    bounds = p;
    theorem2.emplace(p);
  }

  std::vector<NodeState> states = InitialStates(config);
  Rng topology_rng(DeriveKey({config.seed, static_cast<uint64_t>(Stream::kTopology)}));

  Eigen::VectorXd mean_z = MeanDual(states);
  Eigen::VectorXd y = AuxiliaryY(mean_z, 1, config);
  Eigen::VectorXd y_num = schedule.Weight(1) * y;

  for (int64_t t = 1; t <= config.horizon; ++t) {
    const double envelope2 = theorem2 ? theorem2->Advance() : kNotAvailable;
    const bool record = t % config.trace_stride == 0;
    TraceRow row;
    if (record) {
      const double big_a = schedule.CumulativeWeight(t);
      row.t = t;
      row.cumulative_weight = big_a;
      const Eigen::VectorXd y_ergodic = y_num / big_a;
      Eigen::VectorXd mean_ergodic = Eigen::VectorXd::Zero(problem.dimension);
      double consensus = 0.0, consensus_sq = 0.0, ergodic_consensus = 0.0;
      double dist_sq = 0.0;
      const bool have_x = config.reference && config.reference->x.size() > 0;
      for (const auto& s : states) {
        const Eigen::VectorXd x_ergodic = s.Ergodic(big_a);
        mean_ergodic += x_ergodic;
        const double gap = (s.x - y).norm();
        consensus += gap;
        consensus_sq += gap * gap;
        ergodic_consensus += (x_ergodic - y_ergodic).norm();
        if (have_x) dist_sq += (x_ergodic - config.reference->x).squaredNorm();
      }
      mean_ergodic /= n;
      row.objective_mean_ergodic = ObjectiveValue(problem, mean_ergodic);
      row.objective_y_ergodic = ObjectiveValue(problem, y_ergodic);
      if (config.reference) {
        row.subopt_mean_ergodic =
            row.objective_mean_ergodic - config.reference->objective;
        row.subopt_y_ergodic = row.objective_y_ergodic - config.reference->objective;
      }
      row.consensus_error = consensus / n;
      row.consensus_error_sq = consensus_sq / n;
      row.ergodic_consensus_error = ergodic_consensus / n;
      if (have_x) row.mean_sq_dist_to_optimum = dist_sq / n;
      if (bounds) {
        row.theorem2_envelope = envelope2;
        ConsensusEnvelope c = Lemma4Envelope(*bounds, t);
        row.lemma4_envelope = c.mean;
        row.lemma4_envelope_sq = c.mean_square;
      }
    }

    const GossipMatrix gossip = config.sampler->Sample(topology_rng);
    const StepInfo info = Step(states, gossip, t, config);

    MeanDualSnapshot snapshot{mean_z, MeanDual(states), info.theta,
                              schedule.Weight(t)};
    const double violation = MeanDualError(snapshot);
    trace.max_mean_dual_error = std::max(trace.max_mean_dual_error, violation);
    if (violation > 1e-9) trace.mean_dual_ok = false;
    mean_z = std::move(snapshot.mean_after);
    y = AuxiliaryY(mean_z, t + 1, config);
    y_num += schedule.Weight(t + 1) * y;

    if (record) {
      if (config.privacy) {
        row.eps_hat = PrivacyLossAt(t, config.horizon,
                                    config.privacy->budget.epsilon);
      }
      trace.rows.push_back(row);
    }
    if (config.observer) config.observer(t, states);
  }
  trace.steps = config.horizon;
  return trace;
}

}  // namespace pridda
