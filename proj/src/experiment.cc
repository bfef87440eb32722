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

#include "pridda/experiment.h"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iterator>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "pridda/error.h"
#include "pridda/random.h"

namespace pridda {
namespace {

std::string FormatDouble(double v) { return fmt::format("{:.17g}", v); }

// Pairs "1-2,2-3" of 1-based node ids.
std::vector<Edge> ParseEdgeList(const std::string& text, int nodes) {
  std::vector<Edge> edges;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    int a = 0, b = 0;
    char dash = 0;
    std::istringstream pair(item);
    if (!(pair >> a >> dash >> b) || dash != '-' || (pair >> std::ws, !pair.eof())) {
      throw Error(ErrorCode::kConfig, fmt::format("bad edge '{}'", item));
    }
    if (a < 1 || b < 1 || a > nodes || b > nodes || a == b) {
      throw Error(ErrorCode::kConfig,
                  fmt::format("edge '{}' must join two distinct nodes in [1, {}]",
                              item, nodes));
    }
    edges.push_back(MakeEdge(a - 1, b - 1));
  }
  return edges;
}

std::string MetaLine(const std::string& key, const std::string& value) {
  return key + "=" + value + "\n";
}

}  // namespace

std::shared_ptr<const ProblemInstance> BuildProblem(const ProblemSpec& spec) {
  std::vector<Sample> samples;
  int dimension = 0;
  if (spec.source == "libsvm") {
    LibsvmData data = ReadLibsvmFile(spec.path, spec.dimension);
    samples = std::move(data.samples);
    dimension = data.dimension;
  } else {
    Rng rng(DeriveKey({spec.data_seed, static_cast<uint64_t>(Stream::kSynthetic)}));
    dimension = spec.dimension.value_or(20);
    samples = GenerateSynthetic(spec.samples, dimension, spec.margin, rng);
  }
  if (static_cast<int>(samples.size()) < spec.nodes) {
    throw Error(ErrorCode::kConfig,
                fmt::format("{} samples cannot cover {} nodes", samples.size(),
                            spec.nodes));
  }
  Rng partition_rng(
      DeriveKey({spec.data_seed, static_cast<uint64_t>(Stream::kPartition)}));
  std::vector<LocalDataset> locals = PartitionEven(samples, spec.nodes, partition_rng);

  Regularizer reg;
  switch (ParseRegularizerKind(spec.regularizer)) {
    case Regularizer::Kind::kZero: reg = Regularizer::Zero(); break;
    case Regularizer::Kind::kL1: reg = Regularizer::L1(spec.regularizer_parameter); break;
    case Regularizer::Kind::kL2Half:
      reg = Regularizer::L2Half(spec.regularizer_parameter);
      break;
    case Regularizer::Kind::kBall: reg = Regularizer::Ball(spec.regularizer_parameter); break;
  }
  return std::make_shared<const ProblemInstance>(
      MakeProblem(std::move(locals), reg, dimension));
}

Graph BuildGraph(const TopologySpec& spec, int nodes) {
  if (spec.graph == "edges") return Graph(nodes, ParseEdgeList(spec.edges, nodes));
  return BuildCompleteGraph(nodes);
}

std::shared_ptr<const GossipSampler> BuildSampler(const TopologySpec& spec,
                                                  int nodes) {
  const bool all = spec.strategy == "all_edges";
  auto sampler = std::make_shared<const GossipSampler>(
      BuildGraph(spec, nodes),
      all ? SamplingStrategy::kAllEdges : SamplingStrategy::kMatching,
      all ? 0 : spec.edges_per_round);
  return sampler;
}

Schedule BuildSchedule(const ScheduleSpec& spec, const Regularizer& regularizer) {
  const double mu = regularizer.Modulus();
  Schedule schedule;
  switch (ParseScheduleKind(spec.kind)) {
    case Schedule::Kind::kStronglyConvex: schedule = Schedule::StronglyConvex(mu); break;
    case Schedule::Kind::kConvex: schedule = Schedule::Convex(spec.gamma, mu); break;
    case Schedule::Kind::kConstantGamma:
      schedule = Schedule::ConstantGamma(spec.gamma, mu);
      break;
  }
  schedule.Validate();
  return schedule;
}

Experiment PrepareExperiment(const ExperimentConfig& config) {
  config.Validate();
  Experiment e;
  e.config = config;
  e.problem = BuildProblem(config.problem);
  e.sampler = BuildSampler(config.topology, config.problem.nodes);
  e.schedule = BuildSchedule(config.schedule, e.problem->regularizer);

  if (config.topology.beta) {
    e.beta = *config.topology.beta;
    e.beta_source = "configured";
  } else if (auto analytic = e.sampler->AnalyticBeta()) {
    e.beta = *analytic;
    e.beta_source = "analytic";
  } else {
    Rng rng(DeriveKey({config.problem.data_seed,
                       static_cast<uint64_t>(Stream::kTopology), 0}));
    const auto sampler = e.sampler;
    BetaEstimate est = EstimateBeta(
        [sampler](Rng& r) { return sampler->Sample(r); }, config.problem.nodes,
        config.topology.beta_trials, rng);
    e.beta = est.value;
    e.beta_source = "estimated";
  }
  if (!(e.beta < 1.0)) {
    throw Error(ErrorCode::kConfig,
                fmt::format("mixing parameter {} is not below one; the sampled "
                            "graph does not mix",
                            e.beta));
  }

  if (!config.privacy.noiseless) {
    PrivacyBudget budget;
    budget.epsilon = config.privacy.epsilon;
    budget.delta0 = config.privacy.delta0;
    budget.iota = e.sampler->SamplingRatio();
    budget.lipschitz = e.problem->lipschitz;
    budget.samples_per_node = e.problem->MinSamplesPerNode();
    budget.horizon = config.run.horizon;
    e.privacy = PrivacySetting{budget, Calibrate(budget)};
  }
  // Validates schedule and regularizer compatibility before any seed runs.
  MakeSeedConfig(e, Reference{}, 0).Validate();
  return e;
}

RunConfig MakeSeedConfig(const Experiment& experiment, const Reference& reference,
                         uint64_t seed) {
  RunConfig c = MakeRunConfig(experiment.problem, experiment.schedule,
                              experiment.sampler, experiment.config.run.horizon, seed);
  c.privacy = experiment.privacy;
  c.trace_stride = experiment.config.run.trace_stride;
  c.reference = reference;
  c.beta = experiment.beta;
  return c;
}

ReferenceOptions ReferenceOptionsFor(const RunSpec& run) {
  ReferenceOptions options;
  options.max_iterations = run.reference_iterations;
  options.gamma = run.reference_gamma;
  return options;
}

std::string FormatReference(const ReferenceSolution& solution) {
  std::string out;
  out += MetaLine("dimension", std::to_string(solution.x.size()));
  out += MetaLine("objective", FormatDouble(solution.objective));
  out += MetaLine("iterations", std::to_string(solution.iterations));
  out += MetaLine("converged", solution.converged ? "true" : "false");
  std::string xs;
  for (Eigen::Index i = 0; i < solution.x.size(); ++i) {
    if (i > 0) xs += ',';
    xs += FormatDouble(solution.x(i));
  }
  out += MetaLine("x", xs);
  return out;
}

Reference ParseReference(const std::string& text, int expected_dimension) {
  std::istringstream in(text);
  std::string line;
  std::optional<double> objective;
  std::optional<std::vector<double>> xs;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse,
                  fmt::format("reference line {}: expected key=value", line_number));
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "objective") {
      objective = std::strtod(value.c_str(), nullptr);
    } else if (key == "x") {
      xs.emplace();
      std::istringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0') {
          throw Error(ErrorCode::kParse,
                      fmt::format("reference line {}: bad coordinate '{}'",
                                  line_number, item));
        }
        xs->push_back(v);
      }
    }
  }
  if (!objective || !std::isfinite(*objective)) {
    throw Error(ErrorCode::kParse, "reference has no finite objective");
  }
  Reference ref;
  ref.objective = *objective;
  if (xs) {
    if (static_cast<int>(xs->size()) != expected_dimension) {
      throw Error(ErrorCode::kParse,
                  fmt::format("reference point has {} coordinates, problem has {}",
                              xs->size(), expected_dimension));
    }
    ref.x = Eigen::Map<const Eigen::VectorXd>(xs->data(), xs->size());
  }
  return ref;
}

Reference ReadReferenceFile(const std::string& path, int expected_dimension) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot read '{}'", path));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ParseReference(text, expected_dimension);
}

Reference ObtainReference(const Experiment& experiment) {
  if (!experiment.config.run.reference.empty()) {
    return ReadReferenceFile(experiment.config.run.reference,
                             experiment.problem->dimension);
  }
  ReferenceSolution s =
      SolveReference(*experiment.problem, ReferenceOptionsFor(experiment.config.run));
  return Reference{s.x, s.objective};
}

std::string FormatTraceCsv(const RunTrace& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const TraceRow& r : trace.rows) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.t,
                       r.subopt_mean_ergodic, r.consensus_error, r.eps_hat,
                       r.theorem2_envelope, r.lemma4_envelope);
  }
  return out;
}

std::string FormatAggregateCsv(const std::vector<RunTrace>& traces) {
  if (traces.empty()) throw Error(ErrorCode::kInvalidArgument, "no traces to aggregate");
  const size_t rows = traces.front().rows.size();
  for (const auto& t : traces) {
    if (t.rows.size() != rows) {
      throw Error(ErrorCode::kInvalidArgument, "traces have different lengths");
    }
  }
  static constexpr const char* kColumns[] = {"subopt_ergodic_mean_node",
                                             "consensus_err", "eps_hat",
                                             "thm2_envelope", "lemma4_envelope"};
  std::string out = "t,seeds";
  for (const char* c : kColumns) out += fmt::format(",{0}_mean,{0}_se", c);
  out += '\n';
  const double k = static_cast<double>(traces.size());
  for (size_t i = 0; i < rows; ++i) {
    const int64_t t = traces.front().rows[i].t;
    out += fmt::format("{},{}", t, traces.size());
    for (int c = 0; c < 5; ++c) {
      double sum = 0.0;
      std::vector<double> values;
      for (const auto& trace : traces) {
        const TraceRow& r = trace.rows[i];
        if (r.t != t) {
          throw Error(ErrorCode::kInvalidArgument, "traces record different steps");
        }
        const double v = c == 0   ? r.subopt_mean_ergodic
                         : c == 1 ? r.consensus_error
                         : c == 2 ? r.eps_hat
                         : c == 3 ? r.theorem2_envelope
                                  : r.lemma4_envelope;
        values.push_back(v);
        sum += v;
      }
      const double mean = sum / k;
      double se = 0.0;
      if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        se = std::sqrt(ss / (k - 1.0) / k);
      }
      out += fmt::format(",{:.17g},{:.17g}", mean, se);
    }
    out += '\n';
  }
  return out;
}

int ThreadBudget() {
  if (const char* env = std::getenv("PRIDDA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<RunTrace> RunSeeds(const Experiment& experiment,
                               const Reference& reference,
                               const std::vector<uint64_t>& seeds, int threads) {
  std::vector<RunTrace> traces(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < seeds.size(); i = next++) {
      try {
        traces[i] = Run(MakeSeedConfig(experiment, reference, seeds[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int count = std::max(1, std::min<int>(threads, static_cast<int>(seeds.size())));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return traces;
}

void WriteTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", path));
  out << content;
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write to '{}' failed", path));
}

}  // namespace pridda
