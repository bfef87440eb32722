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

#ifndef PRIDDA_ENGINE_H_
#define PRIDDA_ENGINE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pridda/privacy.h"
#include "pridda/problems.h"
#include "pridda/schedule.h"
#include "pridda/topology.h"
#include "pridda/trace.h"

namespace pridda {

struct NodeState {
  Eigen::VectorXd z;             // dual accumulator
  Eigen::VectorXd x;             // current primal iterate
  Eigen::VectorXd ergodic_num;   // sum_tau a_tau x^(tau)

  Eigen::VectorXd Ergodic(double cumulative_weight) const {
    return ergodic_num / cumulative_weight;
  }
};

// Ground truth used for suboptimality and distance columns.
struct Reference {
  Eigen::VectorXd x;  // may be empty when only the objective is known
  double objective = 0.0;
};

struct PrivacySetting {
  PrivacyBudget budget;
  NoiseCalibration calibration;
};

struct RunConfig {
  std::shared_ptr<const ProblemInstance> problem;
  Schedule schedule;
  std::shared_ptr<const GossipSampler> sampler;
  std::optional<PrivacySetting> privacy;  // nullopt runs noiseless
  int64_t horizon = 1;
  double iota = 1.0;
  uint64_t seed = 0;
  int64_t trace_stride = 1;
  std::optional<Reference> reference;
  // Mixing parameter for the envelope columns; envelopes are left empty
  // without it.
  std::optional<double> beta;
  // Called after every step with t and the states holding iterate t+1.
  std::function<void(int64_t, const std::vector<NodeState>&)> observer;

  double Sigma() const {
    return privacy ? privacy->calibration.sigma : 0.0;
  }
  // Throws kInvalidArgument / kInvalidSchedule.
  void Validate() const;
};

// Sampling ratio and active-node counts must agree: iota = active / n.
RunConfig MakeRunConfig(std::shared_ptr<const ProblemInstance> problem,
                        Schedule schedule,
                        std::shared_ptr<const GossipSampler> sampler,
                        int64_t horizon, uint64_t seed);

// z = 0 and x from the primal map at t = 1; ergodic sums hold a_1 x^(1).
std::vector<NodeState> InitialStates(const RunConfig& config);

struct StepInfo {
  // (1/n) sum_i eta_i zeta_i, the increment of the mean dual per unit weight.
  Eigen::VectorXd theta;
  int active_count = 0;
};

// One round of the private dual-averaging iteration at time t. Active nodes
// draw a sample and noise, mix perturbed duals with their neighbours through
// `gossip`, and re-solve the primal map with A_{t+1}, gamma_{t+1}. Inactive
// nodes are left untouched. Every node then adds a_{t+1} x^(t+1) to its
// ergodic sum.
StepInfo Step(std::vector<NodeState>& states, const GossipMatrix& gossip,
              int64_t t, const RunConfig& config);

// Consensus iterate: primal map applied to the node-average dual.
Eigen::VectorXd AuxiliaryY(const Eigen::VectorXd& mean_z, int64_t t,
                           const RunConfig& config);

Eigen::VectorXd MeanDual(const std::vector<NodeState>& states);

struct MeanDualSnapshot {
  Eigen::VectorXd mean_before;
  Eigen::VectorXd mean_after;
  Eigen::VectorXd theta;
  double weight = 0.0;  // a_t
};

// Relative violation of mean_after = mean_before + weight * theta.
double MeanDualError(const MeanDualSnapshot& snapshot);

bool CheckMeanDualRecursion(std::span<const MeanDualSnapshot> snapshots,
                            double tolerance = 1e-9);

// Executes `horizon` rounds from zero duals and records a row every
// `trace_stride` rounds, floor(horizon / trace_stride) rows in all.
// Deterministic in config.seed.
RunTrace Run(const RunConfig& config);

}  // namespace pridda

#endif  // PRIDDA_ENGINE_H_
