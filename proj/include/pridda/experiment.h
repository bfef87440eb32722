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

#ifndef PRIDDA_EXPERIMENT_H_
#define PRIDDA_EXPERIMENT_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pridda/config.h"
#include "pridda/engine.h"
#include "pridda/reference.h"

namespace pridda {

// Everything a run needs that does not depend on the seed.
struct Experiment {
  ExperimentConfig config;
  std::shared_ptr<const ProblemInstance> problem;
  std::shared_ptr<const GossipSampler> sampler;
  Schedule schedule;
  double beta = 0.0;
  std::string beta_source;  // "configured", "analytic" or "estimated"
  std::optional<PrivacySetting> privacy;
};

std::shared_ptr<const ProblemInstance> BuildProblem(const ProblemSpec& spec);
Graph BuildGraph(const TopologySpec& spec, int nodes);
std::shared_ptr<const GossipSampler> BuildSampler(const TopologySpec& spec,
                                                  int nodes);
Schedule BuildSchedule(const ScheduleSpec& spec, const Regularizer& regularizer);

// Builds the problem, sampler, schedule, mixing parameter and calibration.
// Throws pridda::Error for any configuration that cannot run.
Experiment PrepareExperiment(const ExperimentConfig& config);

RunConfig MakeSeedConfig(const Experiment& experiment,
                         const Reference& reference, uint64_t seed);

ReferenceOptions ReferenceOptionsFor(const RunSpec& run);

// key=value text: dimension, objective, iterations, converged, x.
std::string FormatReference(const ReferenceSolution& solution);
Reference ParseReference(const std::string& text, int expected_dimension);
Reference ReadReferenceFile(const std::string& path, int expected_dimension);

// Reads the configured reference file, or solves for one in-process.
Reference ObtainReference(const Experiment& experiment);

inline constexpr char kTraceHeader[] =
    "t,subopt_ergodic_mean_node,consensus_err,eps_hat,thm2_envelope,"
    "lemma4_envelope";

// One line per recorded row, 17 significant digits, LF line endings.
std::string FormatTraceCsv(const RunTrace& trace);
// Mean and standard error across seeds for every trace column; all traces
// must share their t column.
std::string FormatAggregateCsv(const std::vector<RunTrace>& traces);

// Concurrency cap: PRIDDA_THREADS when set to a positive integer, else the
// hardware concurrency.
int ThreadBudget();

// Runs one trace per seed on up to `threads` workers; results are in seed
// order.
std::vector<RunTrace> RunSeeds(const Experiment& experiment,
                               const Reference& reference,
                               const std::vector<uint64_t>& seeds, int threads);

// Writes `content` to `path` in binary mode; throws kIo.
void WriteTextFile(const std::string& path, const std::string& content);

}  // namespace pridda

#endif  // PRIDDA_EXPERIMENT_H_
