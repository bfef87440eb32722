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

#include "pridda/problems.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "pridda/error.h"

namespace pridda {
namespace {

[[noreturn]] void ParseFail(size_t line, const std::string& what) {
  throw Error(ErrorCode::kParse, fmt::format("line {}: {}", line, what));
}

bool IsBlank(char c) { return c == ' ' || c == '\t'; }

// Splits on spaces/tabs.
std::vector<std::string_view> Tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsBlank(line[i])) ++i;
    size_t start = i;
    while (i < line.size() && !IsBlank(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool ParseDouble(std::string_view token, double& value) {
  // from_chars rejects a leading '+', which LIBSVM labels use.
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size() &&
         std::isfinite(value);
}

bool ParseIndex(std::string_view token, long long& value) {
  if (token.empty()) return false;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

}  // namespace

double SparseVector::Dot(const Eigen::VectorXd& dense) const {
  double s = 0.0;
  for (size_t k = 0; k < indices.size(); ++k) s += values[k] * dense(indices[k]);
  return s;
}

double SparseVector::Norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

void SparseVector::AddTo(double scale, Eigen::VectorXd& dense) const {
  for (size_t k = 0; k < indices.size(); ++k) dense(indices[k]) += scale * values[k];
}

Regularizer Regularizer::L1(double lambda) {
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("l1 weight must be positive, got {}", lambda));
  }
  return {Kind::kL1, lambda};
}

Regularizer Regularizer::L2Half(double mu) {
  if (!(mu > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("l2 modulus must be positive, got {}", mu));
  }
  return {Kind::kL2Half, mu};
}

Regularizer Regularizer::Ball(double radius) {
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("ball radius must be positive, got {}", radius));
  }
  return {Kind::kBall, radius};
}

double Regularizer::Modulus() const {
  return kind == Kind::kL2Half ? parameter : 0.0;
}

std::string Regularizer::Name() const {
  switch (kind) {
    case Kind::kZero:
      return "zero";
    case Kind::kL1:
      return "l1";
    case Kind::kL2Half:
      return "l2_half";
    case Kind::kBall:
      return "ball";
  }
  return "unknown";
}

Regularizer::Kind ParseRegularizerKind(std::string_view name) {
  if (name == "zero") return Regularizer::Kind::kZero;
  if (name == "l1") return Regularizer::Kind::kL1;
  if (name == "l2_half") return Regularizer::Kind::kL2Half;
  if (name == "ball") return Regularizer::Kind::kBall;
  throw Error(ErrorCode::kConfig,
              fmt::format("unknown regularizer '{}' (zero, l1, l2_half, ball)",
                          name));
}

int64_t ProblemInstance::MinSamplesPerNode() const {
  if (locals.empty()) return 0;
  size_t q = std::numeric_limits<size_t>::max();
  for (const auto& d : locals) q = std::min(q, d.samples.size());
  return static_cast<int64_t>(q);
}

LibsvmData ParseLibsvm(std::istream& in, std::optional<int> expected_dimension) {
  LibsvmData data;
  std::string line;
  size_t line_no = 0;
  int max_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    if (view.find('#') != std::string_view::npos) {
      ParseFail(line_no, "comments are not supported");
    }
    auto tokens = Tokenize(view);
    if (tokens.empty()) continue;

    Sample sample;
    double label = 0.0;
    if (!ParseDouble(tokens[0], label)) {
      ParseFail(line_no, fmt::format("bad label '{}'", tokens[0]));
    }
    if (label == 1.0) {
      sample.label = 1.0;
    } else if (label == -1.0 || label == 0.0) {
      sample.label = -1.0;
    } else {
      ParseFail(line_no, fmt::format("label {} is not one of +1, -1, 0", label));
    }

    long long previous = 0;
    for (size_t k = 1; k < tokens.size(); ++k) {
      auto tok = tokens[k];
      auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        ParseFail(line_no, fmt::format("token '{}' is not index:value", tok));
      }
      long long index = 0;
      double value = 0.0;
      if (!ParseIndex(tok.substr(0, colon), index) || index < 1) {
        ParseFail(line_no, fmt::format("bad feature index in '{}'", tok));
      }
      if (!ParseDouble(tok.substr(colon + 1), value)) {
        ParseFail(line_no, fmt::format("bad feature value in '{}'", tok));
      }
      if (index <= previous) {
        ParseFail(line_no, fmt::format("feature index {} does not increase "
                                       "past {}", index, previous));
      }
      if (expected_dimension && index > *expected_dimension) {
        ParseFail(line_no, fmt::format("feature index {} exceeds dimension {}",
                                       index, *expected_dimension));
      }
      if (index > std::numeric_limits<int>::max()) {
        ParseFail(line_no, fmt::format("feature index {} too large", index));
      }
      previous = index;
      sample.features.indices.push_back(static_cast<int>(index - 1));
      sample.features.values.push_back(value);
      max_index = std::max(max_index, static_cast<int>(index));
    }
    data.samples.push_back(std::move(sample));
  }
  data.dimension = expected_dimension.value_or(max_index);
  return data;
}

LibsvmData ReadLibsvmFile(const std::string& path,
                          std::optional<int> expected_dimension) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, fmt::format("cannot open dataset '{}'", path));
  }
  try {
    return ParseLibsvm(in, expected_dimension);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path, e.what()));
  }
}

void WriteLibsvm(std::ostream& out, const std::vector<Sample>& samples) {
  for (const auto& s : samples) {
    out << (s.label > 0 ? "+1" : "-1");
    for (size_t k = 0; k < s.features.size(); ++k) {
      out << fmt::format(" {}:{:.17g}", s.features.indices[k] + 1,
                         s.features.values[k]);
    }
    out << '\n';
  }
}

std::vector<Sample> GenerateSynthetic(int n_samples, int dimension,
                                      double margin, Rng& rng) {
  if (n_samples < 1 || dimension < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("synthetic data needs positive size, got {}x{}",
                            n_samples, dimension));
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd direction(dimension);
  for (int j = 0; j < dimension; ++j) direction(j) = normal(rng);
  direction.normalize();

  const double scale = 1.0 / std::sqrt(static_cast<double>(dimension));
  std::vector<Eigen::VectorXd> points;
  std::vector<double> labels;
  points.reserve(n_samples);
  labels.reserve(n_samples);
  double max_norm = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    Eigen::VectorXd c(dimension);
    for (int j = 0; j < dimension; ++j) c(j) = scale * normal(rng);
    const double y = c.dot(direction) >= 0.0 ? 1.0 : -1.0;
    c += margin * y * direction;
    max_norm = std::max(max_norm, c.norm());
    points.push_back(std::move(c));
    labels.push_back(y);
  }
  const double shrink = max_norm > 1.0 ? 1.0 / max_norm : 1.0;

  std::vector<Sample> out(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    out[i].label = labels[i];
    for (int j = 0; j < dimension; ++j) {
      const double v = points[i](j) * shrink;
      if (v != 0.0) {
        out[i].features.indices.push_back(j);
        out[i].features.values.push_back(v);
      }
    }
  }
  return out;
}

std::vector<LocalDataset> PartitionEven(const std::vector<Sample>& samples,
                                        int n_nodes, Rng& rng) {
  if (n_nodes < 1 || samples.size() < static_cast<size_t>(n_nodes)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("cannot split {} samples across {} nodes",
                            samples.size(), n_nodes));
  }
  std::vector<size_t> order(samples.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  const size_t base = samples.size() / n_nodes;
  const size_t extra = samples.size() % n_nodes;
  std::vector<LocalDataset> parts(n_nodes);
  size_t pos = 0;
  for (int i = 0; i < n_nodes; ++i) {
    const size_t size = base + (static_cast<size_t>(i) < extra ? 1 : 0);
    parts[i].owner = i;
    parts[i].samples.reserve(size);
    for (size_t k = 0; k < size; ++k) parts[i].samples.push_back(samples[order[pos++]]);
  }
  return parts;
}

double HingeLoss(const Eigen::VectorXd& x, const Sample& sample) {
  return std::max(0.0, 1.0 - sample.label * sample.features.Dot(x));
}

bool AddHingeSubgradient(const Eigen::VectorXd& x, const Sample& sample,
                         double scale, Eigen::VectorXd& out) {
  if (!sample.features.indices.empty() &&
      sample.features.indices.back() >= x.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("feature index {} outside dimension {}",
                            sample.features.indices.back() + 1, x.size()));
  }
  if (1.0 - sample.label * sample.features.Dot(x) <= 0.0) return false;
  sample.features.AddTo(-scale * sample.label, out);
  return true;
}

Eigen::VectorXd HingeSubgradient(const Eigen::VectorXd& x,
                                 const Sample& sample) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  AddHingeSubgradient(x, sample, 1.0, g);
  return g;
}

double LipschitzBound(const std::vector<Sample>& samples) {
  if (samples.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "Lipschitz bound of an empty dataset");
  }
  double best = 0.0;
  for (const auto& s : samples) best = std::max(best, s.features.Norm());
  return best;
}

double RegularizerValue(const Regularizer& reg, const Eigen::VectorXd& x) {
  switch (reg.kind) {
    case Regularizer::Kind::kZero:
      return 0.0;
    case Regularizer::Kind::kL1:
      return reg.parameter * x.lpNorm<1>();
    case Regularizer::Kind::kL2Half:
      return 0.5 * reg.parameter * x.squaredNorm();
    case Regularizer::Kind::kBall:
      // Boundary points produced by rescaling may overshoot by an ulp.
      return x.norm() <= reg.parameter * (1.0 + 1e-14) ? 0.0
                                       : std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double ObjectiveValue(const ProblemInstance& problem, const Eigen::VectorXd& x) {
  if (x.size() != problem.dimension) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("point has dimension {}, problem has {}", x.size(),
                            problem.dimension));
  }
  double total = 0.0;
  for (const auto& local : problem.locals) {
    double node = 0.0;
    for (const auto& s : local.samples) node += HingeLoss(x, s);
    total += node / static_cast<double>(local.samples.size());
  }
  return total / problem.node_count() + RegularizerValue(problem.regularizer, x);
}

Eigen::VectorXd LossSubgradient(const ProblemInstance& problem,
                                const Eigen::VectorXd& x) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(problem.dimension);
  for (const auto& local : problem.locals) {
    const double w =
        1.0 / (static_cast<double>(local.samples.size()) * problem.node_count());
    for (const auto& s : local.samples) AddHingeSubgradient(x, s, w, g);
  }
  return g;
}

ProblemInstance MakeProblem(std::vector<LocalDataset> locals,
                            Regularizer regularizer, int dimension) {
  if (locals.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "problem needs at least one node");
  }
  if (dimension < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("dimension must be positive, got {}", dimension));
  }
  ProblemInstance p;
  double lipschitz = 0.0;
  for (const auto& local : locals) {
    if (local.samples.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("node {} has no samples", local.owner + 1));
    }
    for (const auto& s : local.samples) {
      if (!s.features.indices.empty() &&
          s.features.indices.back() >= dimension) {
        throw Error(ErrorCode::kInvalidArgument,
                    fmt::format("node {} has feature {} beyond dimension {}",
                                local.owner + 1,
                                s.features.indices.back() + 1, dimension));
      }
    }
    lipschitz = std::max(lipschitz, LipschitzBound(local.samples));
  }
  p.locals = std::move(locals);
  p.regularizer = regularizer;
  p.lipschitz = lipschitz;
  p.dimension = dimension;
  return p;
}

}  // namespace pridda
