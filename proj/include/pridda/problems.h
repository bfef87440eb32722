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

#ifndef PRIDDA_PROBLEMS_H_
#define PRIDDA_PROBLEMS_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pridda/random.h"

namespace pridda {

// Sparse feature vector with strictly increasing 0-based indices.
struct SparseVector {
  std::vector<int> indices;
  std::vector<double> values;

  size_t size() const { return indices.size(); }
  double Dot(const Eigen::VectorXd& dense) const;
  double Norm() const;
  // Adds scale * this to `dense`.
  void AddTo(double scale, Eigen::VectorXd& dense) const;
};

struct Sample {
  SparseVector features;
  double label = 1.0;  // exactly +1 or -1
};

struct LocalDataset {
  std::vector<Sample> samples;
  int owner = 0;
};

struct Regularizer {
  enum class Kind { kZero, kL1, kL2Half, kBall };

  Kind kind = Kind::kZero;
  double parameter = 0.0;  // lambda, mu or radius

  static Regularizer Zero() { return {Kind::kZero, 0.0}; }
  static Regularizer L1(double lambda);
  static Regularizer L2Half(double mu);
  static Regularizer Ball(double radius);

  // Strong-convexity modulus: mu for L2Half, 0 otherwise.
  double Modulus() const;
  std::string Name() const;
};

// Parses "zero", "l1", "l2_half" or "ball" (case sensitive).
Regularizer::Kind ParseRegularizerKind(std::string_view name);

struct ProblemInstance {
  std::vector<LocalDataset> locals;
  Regularizer regularizer;
  double lipschitz = 0.0;
  int dimension = 0;

  int node_count() const { return static_cast<int>(locals.size()); }
  // q = min_i q_i.
  int64_t MinSamplesPerNode() const;
};

// LIBSVM text: one sample per line, "label idx:val idx:val ...", 1-based
// strictly increasing indices. Labels +1, 1, -1 and 0 (mapped to -1) are
// accepted. Errors carry the 1-based line number.
struct LibsvmData {
  std::vector<Sample> samples;
  int dimension = 0;
};

LibsvmData ParseLibsvm(std::istream& in,
                       std::optional<int> expected_dimension = std::nullopt);
LibsvmData ReadLibsvmFile(const std::string& path,
                          std::optional<int> expected_dimension = std::nullopt);
void WriteLibsvm(std::ostream& out, const std::vector<Sample>& samples);

// Linearly separable synthetic data: a random unit direction u, Gaussian
// features labelled by sign<c, u>, pushed `margin` away from the separating
// hyperplane, then scaled so that no feature vector has norm above one.
std::vector<Sample> GenerateSynthetic(int n_samples, int dimension,
                                      double margin, Rng& rng);

// Random permutation followed by a contiguous split into sizes that differ by
// at most one.
std::vector<LocalDataset> PartitionEven(const std::vector<Sample>& samples,
                                        int n_nodes, Rng& rng);

// max{0, 1 - y <c, x>}.
double HingeLoss(const Eigen::VectorXd& x, const Sample& sample);

// -y c when the margin term is positive, zero otherwise (the kink resolves to
// zero).
Eigen::VectorXd HingeSubgradient(const Eigen::VectorXd& x,
                                 const Sample& sample);

// Same as HingeSubgradient but accumulates scale * g into `out`; returns
// whether the subgradient was nonzero.
bool AddHingeSubgradient(const Eigen::VectorXd& x, const Sample& sample,
                         double scale, Eigen::VectorXd& out);

// Largest feature norm; a valid Lipschitz constant for the hinge loss.
double LipschitzBound(const std::vector<Sample>& samples);

// May return +infinity (ball indicator outside the ball).
double RegularizerValue(const Regularizer& reg, const Eigen::VectorXd& x);

// Average over nodes of each node's average hinge loss, plus h(x).
double ObjectiveValue(const ProblemInstance& problem, const Eigen::VectorXd& x);

// Full-data subgradient of the smooth-free part: (1/n) sum_i (1/q_i) sum_j g.
Eigen::VectorXd LossSubgradient(const ProblemInstance& problem,
                                const Eigen::VectorXd& x);

// Builds an instance from partitioned data; the Lipschitz constant is taken
// from the data.
ProblemInstance MakeProblem(std::vector<LocalDataset> locals,
                            Regularizer regularizer, int dimension);

}  // namespace pridda

#endif  // PRIDDA_PROBLEMS_H_
