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

#include "pridda/topology.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "pridda/error.h"

namespace pridda {
namespace {

// Attempts per rejection-sampling round before falling back to an exhaustive
// feasibility check.
constexpr int kRejectionAttempts = 100000;

// Depth-first search for any matching of size k.
bool HasMatching(const Graph& graph, int k, size_t first_edge,
                 std::vector<bool>& used) {
  if (k == 0) return true;
  const auto& edges = graph.edges();
  for (size_t e = first_edge; e < edges.size(); ++e) {
    auto [a, b] = edges[e];
    if (used[a] || used[b]) continue;
    used[a] = used[b] = true;
    bool found = HasMatching(graph, k - 1, e + 1, used);
    used[a] = used[b] = false;
    if (found) return true;
  }
  return false;
}

// Pairs up the first 2k entries of a uniform random permutation. Every size-k
// matching of K_n is produced by the same number of permutations, so the
// result is uniform over them.
std::vector<Edge> PermutationMatching(int n, int k, Rng& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  // Partial Fisher-Yates; only the first 2k positions matter.
  for (int i = 0; i < 2 * k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  std::vector<Edge> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) out.push_back(MakeEdge(perm[2 * i], perm[2 * i + 1]));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Edge MakeEdge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

Graph::Graph(int node_count, std::vector<Edge> edges)
    : node_count_(node_count) {
  if (node_count < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("graph needs at least one node, got {}", node_count));
  }
  for (auto& e : edges) {
    e = MakeEdge(e.first, e.second);
    if (e.first < 0 || e.second >= node_count) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("edge ({}, {}) outside nodes 1..{}", e.first + 1,
                              e.second + 1, node_count));
    }
    if (e.first == e.second) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("self-loop at node {}", e.first + 1));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  edge_set_.insert(edges_.begin(), edges_.end());
}

bool Graph::HasEdge(int a, int b) const {
  return edge_set_.count(MakeEdge(a, b)) > 0;
}

bool Graph::IsComplete() const {
  const size_t n = static_cast<size_t>(node_count_);
  return edges_.size() == n * (n - 1) / 2;
}

Graph BuildCompleteGraph(int n) {
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("complete graph needs n >= 2, got {}", n));
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Graph(n, std::move(edges));
}

std::vector<Edge> SampleMatching(const Graph& graph, int k, Rng& rng) {
  const int n = graph.node_count();
  if (k < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("matching size must be positive, got {}", k));
  }
  if (2 * k > n || static_cast<size_t>(k) > graph.edges().size()) {
    throw Error(ErrorCode::kInfeasibleSampling,
                fmt::format("no matching of size {} on {} nodes", k, n));
  }
  if (graph.IsComplete()) return PermutationMatching(n, k, rng);
  if (k == 1) {
    std::uniform_int_distribution<size_t> pick(0, graph.edges().size() - 1);
    return {graph.edges()[pick(rng)]};
  }
  // Uniform matchings of K_n conditioned on lying inside the graph are uniform
  // over the graph's matchings.
  bool feasibility_checked = false;
  while (true) {
    for (int attempt = 0; attempt < kRejectionAttempts; ++attempt) {
      auto candidate = PermutationMatching(n, k, rng);
      bool inside = std::all_of(candidate.begin(), candidate.end(),
                                [&](const Edge& e) {
                                  return graph.HasEdge(e.first, e.second);
                                });
      if (inside) return candidate;
    }
    if (!feasibility_checked) {
      std::vector<bool> used(n, false);
      if (!HasMatching(graph, k, 0, used)) {
        throw Error(ErrorCode::kInfeasibleSampling,
                    fmt::format("graph has no matching of size {}", k));
      }
      feasibility_checked = true;
    }
  }
}

int GossipMatrix::ActiveCount() const {
  return static_cast<int>(std::count(active.begin(), active.end(), true));
}

double GossipMatrix::StochasticityError() const {
  double row = (entries.rowwise().sum().array() - 1.0).abs().maxCoeff();
  double col = (entries.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(row, col);
}

double GossipMatrix::SymmetryError() const {
  return (entries - entries.transpose()).cwiseAbs().maxCoeff();
}

GossipMatrix MetropolisMatrix(const Graph& graph,
                              const std::vector<Edge>& sampled_edges) {
  const int n = graph.node_count();
  std::vector<int> degree(n, 0);
  for (const auto& e : sampled_edges) {
    if (e.first < 0 || e.second < 0 || e.first >= n || e.second >= n ||
        !graph.HasEdge(e.first, e.second)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("sampled edge ({}, {}) is not in the graph",
                              e.first + 1, e.second + 1));
    }
    ++degree[e.first];
    ++degree[e.second];
  }
  GossipMatrix w;
  w.entries = Eigen::MatrixXd::Zero(n, n);
  w.active.assign(n, false);
  for (const auto& e : sampled_edges) {
    auto [i, j] = MakeEdge(e.first, e.second);
    double weight = 1.0 / (1.0 + std::max(degree[i], degree[j]));
    w.entries(i, j) = weight;
    w.entries(j, i) = weight;
    w.active[i] = w.active[j] = true;
  }
  for (int i = 0; i < n; ++i) {
    w.entries(i, i) = 1.0 - (w.entries.row(i).sum() - w.entries(i, i));
  }
  return w;
}

GossipSampler::GossipSampler(Graph graph, SamplingStrategy strategy,
                             int edges_per_round)
    : graph_(std::move(graph)),
      strategy_(strategy),
      edges_per_round_(edges_per_round) {
  if (strategy_ == SamplingStrategy::kMatching) {
    if (edges_per_round_ < 1 || 2 * edges_per_round_ > graph_.node_count()) {
      throw Error(ErrorCode::kInfeasibleSampling,
                  fmt::format("cannot sample {} disjoint edges on {} nodes",
                              edges_per_round_, graph_.node_count()));
    }
    if (!graph_.IsComplete()) {
      std::vector<bool> used(graph_.node_count(), false);
      if (!HasMatching(graph_, edges_per_round_, 0, used)) {
        throw Error(ErrorCode::kInfeasibleSampling,
                    fmt::format("graph has no matching of size {}",
                                edges_per_round_));
      }
    }
  } else {
    edges_per_round_ = static_cast<int>(graph_.edges().size());
  }
}

std::vector<Edge> GossipSampler::SampleEdges(Rng& rng) const {
  if (strategy_ == SamplingStrategy::kAllEdges) return graph_.edges();
  return SampleMatching(graph_, edges_per_round_, rng);
}

GossipMatrix GossipSampler::Sample(Rng& rng) const {
  GossipMatrix w = MetropolisMatrix(graph_, SampleEdges(rng));
  // Every node takes part, including ones without supergraph edges.
  if (strategy_ == SamplingStrategy::kAllEdges) {
    w.active.assign(graph_.node_count(), true);
  }
  return w;
}

int GossipSampler::ActiveNodesPerRound() const {
  if (strategy_ == SamplingStrategy::kAllEdges) return graph_.node_count();
  return 2 * edges_per_round_;
}

double GossipSampler::SamplingRatio() const {
  return static_cast<double>(ActiveNodesPerRound()) / graph_.node_count();
}

std::optional<double> GossipSampler::AnalyticBeta() const {
  if (!graph_.IsComplete()) return std::nullopt;
  const int n = graph_.node_count();
  if (strategy_ == SamplingStrategy::kAllEdges) {
    // Metropolis weights on K_n are exactly 11^T/n.
    return 0.0;
  }
  // Each W is a projector, and every edge is in the matching with probability
  // 2k / (n(n-1)), so E[W] = I - k (nI - 11^T) / (n(n-1)) with eigenvalue
  // 1 - k/(n-1) on the complement of 1.
  if (n < 2) return std::nullopt;
  double lambda = 1.0 - static_cast<double>(edges_per_round_) / (n - 1);
  return std::sqrt(std::max(lambda, 0.0));
}

double SpectralRadiusSymmetric(const Eigen::MatrixXd& matrix,
                               double relative_tolerance, int max_iterations) {
  const int n = static_cast<int>(matrix.rows());
  if (n == 0) return 0.0;
  // Fixed, non-symmetric start so it is not orthogonal to the usual
  // eigenspaces of permutation-invariant families.
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = 1.0 + std::sqrt(static_cast<double>(i + 2));
  v.normalize();
  double lambda = 0.0;
  for (int iter = 0; iter < max_iterations; ++iter) {
    Eigen::VectorXd w = matrix * v;
    double norm = w.norm();
    if (norm == 0.0) return 0.0;
    double next = v.dot(w);
    v = w / norm;
    if (iter > 0 && std::abs(next - lambda) <= relative_tolerance * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  // Rayleigh quotient at the final vector.
  return std::abs(v.dot(matrix * v));
}

BetaEstimate EstimateBeta(const MatrixSampler& sampler, int n, int trials,
                          Rng& rng) {
  if (trials < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("trials must be positive, got {}", trials));
  }
  // Batch means of W^T W give the standard error without keeping every draw.
  const int batches = std::min(trials, 20);
  std::vector<Eigen::MatrixXd> batch_sums(batches, Eigen::MatrixXd::Zero(n, n));
  std::vector<int> batch_counts(batches, 0);
  for (int k = 0; k < trials; ++k) {
    GossipMatrix w = sampler(rng);
    if (w.size() != n) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("sampler returned a {}x{} matrix, expected {}",
                              w.size(), w.size(), n));
    }
    const int b = static_cast<int>(static_cast<int64_t>(k) * batches / trials);
    batch_sums[b].noalias() += w.entries.transpose() * w.entries;
    ++batch_counts[b];
  }
  const Eigen::MatrixXd centering = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
  for (const auto& s : batch_sums) mean += s;
  mean /= trials;
  Eigen::MatrixXd target = mean - centering;
  target = 0.5 * (target + target.transpose());
  const double rho = SpectralRadiusSymmetric(target);

  BetaEstimate est;
  est.trials = trials;
  est.value = std::sqrt(std::clamp(rho, 0.0, 1.0));

  if (batches > 1 && est.value > 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(target);
    Eigen::Index top = 0;
    solver.eigenvalues().cwiseAbs().maxCoeff(&top);
    const Eigen::VectorXd v = solver.eigenvectors().col(top);
    double sum = 0.0, sum_sq = 0.0;
    for (int b = 0; b < batches; ++b) {
      double r = v.dot((batch_sums[b] / batch_counts[b] - centering) * v);
      sum += r;
      sum_sq += r * r;
    }
    const double m = sum / batches;
    const double var =
        std::max(0.0, sum_sq / batches - m * m) * batches / (batches - 1);
    const double se_rho = std::sqrt(var / batches);
    est.standard_error = se_rho / (2.0 * est.value);
  }
  return est;
}

}  // namespace pridda
