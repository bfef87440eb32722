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

#ifndef PRIDDA_TESTS_TEST_UTIL_H_
#define PRIDDA_TESTS_TEST_UTIL_H_

#include <memory>
#include <vector>

#include "pridda/engine.h"
#include "pridda/problems.h"
#include "pridda/random.h"

namespace pridda::testing {

inline Sample DenseSample(std::initializer_list<double> values, double label) {
  Sample s;
  s.label = label;
  int j = 0;
  for (double v : values) {
    if (v != 0.0) {
      s.features.indices.push_back(j);
      s.features.values.push_back(v);
    }
    ++j;
  }
  return s;
}

// Synthetic instance split evenly over `nodes`.
inline std::shared_ptr<const ProblemInstance> SyntheticProblem(
    int nodes, int per_node, int dimension, Regularizer reg, uint64_t seed = 7) {
  Rng rng(DeriveKey({seed, static_cast<uint64_t>(Stream::kSynthetic)}));
  std::vector<Sample> samples = GenerateSynthetic(nodes * per_node, dimension, 0.1, rng);
  Rng part(DeriveKey({seed, static_cast<uint64_t>(Stream::kPartition)}));
  return std::make_shared<const ProblemInstance>(
      MakeProblem(PartitionEven(samples, nodes, part), reg, dimension));
}

inline std::shared_ptr<const GossipSampler> Matching(int nodes, int k) {
  return std::make_shared<const GossipSampler>(BuildCompleteGraph(nodes),
                                               SamplingStrategy::kMatching, k);
}

inline PrivacySetting Calibrated(const RunConfig& config, double epsilon,
                                 double delta0) {
  PrivacyBudget b;
  b.epsilon = epsilon;
  b.delta0 = delta0;
  b.iota = config.iota;
  b.lipschitz = config.problem->lipschitz;
  b.samples_per_node = config.problem->MinSamplesPerNode();
  b.horizon = config.horizon;
  return {b, Calibrate(b)};
}

}  // namespace pridda::testing

#endif  // PRIDDA_TESTS_TEST_UTIL_H_
