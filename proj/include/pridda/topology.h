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

#ifndef PRIDDA_TOPOLOGY_H_
#define PRIDDA_TOPOLOGY_H_

#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pridda/random.h"

namespace pridda {

// Unordered node pair, stored with first < second. Node indices are 0-based
// inside the library; anything user facing adds one.
using Edge = std::pair<int, int>;

Edge MakeEdge(int a, int b);

// Undirected simple graph over nodes 0..node_count-1.
class Graph {
 public:
  Graph(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool HasEdge(int a, int b) const;
  bool IsComplete() const;

 private:
  int node_count_;
  std::vector<Edge> edges_;  // sorted, unique
  std::set<Edge> edge_set_;
};

// K_n. Throws kInvalidArgument for n < 2.
Graph BuildCompleteGraph(int n);

// Draws k pairwise node-disjoint edges uniformly among all size-k matchings
// of `graph`. Throws kInfeasibleSampling when no such matching exists.
std::vector<Edge> SampleMatching(const Graph& graph, int k, Rng& rng);

// One round of gossip: a doubly stochastic mixing matrix plus the indicator of
// which nodes take part.
struct GossipMatrix {
  Eigen::MatrixXd entries;
  std::vector<bool> active;

  int size() const { return static_cast<int>(entries.rows()); }
  int ActiveCount() const;
  // Largest deviation of any row or column sum from one.
  double StochasticityError() const;
  double SymmetryError() const;
};

// Metropolis weights on the subgraph spanned by `sampled_edges`: off-diagonal
// 1/(1 + max(d_i, d_j)) with degrees taken inside the sampled subgraph, the
// diagonal absorbs the remainder. Nodes not touched by a sampled edge keep an
// identity row and are inactive.
GossipMatrix MetropolisMatrix(const Graph& graph,
                              const std::vector<Edge>& sampled_edges);

enum class SamplingStrategy {
  kMatching,  // k disjoint edges per round, 2k active nodes
  kAllEdges,  // every supergraph edge every round, all nodes active
};

// Draws the per-round gossip matrix for a fixed supergraph and strategy.
class GossipSampler {
 public:
  GossipSampler(Graph graph, SamplingStrategy strategy, int edges_per_round);

  GossipMatrix Sample(Rng& rng) const;
  // Active edges for one round, without building the matrix.
  std::vector<Edge> SampleEdges(Rng& rng) const;

  const Graph& graph() const { return graph_; }
  SamplingStrategy strategy() const { return strategy_; }
  int edges_per_round() const { return edges_per_round_; }
  int ActiveNodesPerRound() const;
  // Fraction of nodes active in every round.
  double SamplingRatio() const;
  // Closed-form mixing parameter, when known for this graph and strategy.
  std::optional<double> AnalyticBeta() const;

 private:
  Graph graph_;
  SamplingStrategy strategy_;
  int edges_per_round_;
};

struct BetaEstimate {
  double value = 0.0;
  int trials = 0;
  double standard_error = 0.0;
};

using MatrixSampler = std::function<GossipMatrix(Rng&)>;

// Monte-Carlo estimate of sqrt(rho(E[W^T W] - 11^T/n)).
BetaEstimate EstimateBeta(const MatrixSampler& sampler, int n, int trials,
                          Rng& rng);

// Largest-magnitude eigenvalue of a symmetric matrix by power iteration from a
// fixed start vector. Stops when the Rayleigh quotient changes by less than
// `relative_tolerance` or after `max_iterations`.
double SpectralRadiusSymmetric(const Eigen::MatrixXd& matrix,
                               double relative_tolerance = 1e-10,
                               int max_iterations = 10000);

}  // namespace pridda

#endif  // PRIDDA_TOPOLOGY_H_
