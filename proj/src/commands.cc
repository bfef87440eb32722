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

#include "pridda/commands.h"

#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>

#include <fmt/format.h>

#include "pridda/error.h"
#include "pridda/experiment.h"
#include "pridda/metrics.h"
#include "pridda/privacy.h"

namespace pridda {
namespace {

std::string Num(double v) { return fmt::format("{:.17g}", v); }

std::string Line(const std::string& key, const std::string& value) {
  return key + "=" + value + "\n";
}

std::string JoinSeeds(const std::vector<uint64_t>& seeds) {
  std::string s;
  for (size_t i = 0; i < seeds.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(seeds[i]);
  }
  return s;
}

// Runs `body` and maps failures to an exit code, reporting them on `err`.
int Guarded(int code_on_error, std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return code_on_error;
}

ExperimentConfig LoadWithOverrides(const std::string& path,
                                   const CommandOverrides& overrides) {
  ExperimentConfig config = LoadExperimentConfig(path);
  if (!overrides.seeds.empty()) config.run.seeds = overrides.seeds;
  if (overrides.out) config.run.out = *overrides.out;
  if (overrides.trace_stride) config.run.trace_stride = *overrides.trace_stride;
  config.Validate();
  return config;
}

std::string RunMeta(const Experiment& e, const Reference& reference,
                    const std::vector<RunTrace>& traces) {
  const ExperimentConfig& c = e.config;
  std::string m;
  m += Line("seeds", JoinSeeds(c.run.seeds));
  m += Line("horizon", std::to_string(c.run.horizon));
  m += Line("trace_stride", std::to_string(c.run.trace_stride));
  m += Line("nodes", std::to_string(e.problem->node_count()));
  m += Line("dimension", std::to_string(e.problem->dimension));
  m += Line("samples_per_node", std::to_string(e.problem->MinSamplesPerNode()));
  m += Line("lipschitz", Num(e.problem->lipschitz));
  m += Line("regularizer", e.problem->regularizer.Name());
  m += Line("regularizer_parameter", Num(e.problem->regularizer.parameter));
  m += Line("schedule", e.schedule.Name());
  m += Line("gamma", Num(e.schedule.gamma));
  m += Line("mu", Num(e.schedule.mu));
  m += Line("strategy", c.topology.strategy);
  m += Line("edges_per_round", std::to_string(e.sampler->edges_per_round()));
  m += Line("iota", Num(e.sampler->SamplingRatio()));
  m += Line("beta", Num(e.beta));
  m += Line("beta_source", e.beta_source);
  if (e.privacy) {
    const auto& cal = e.privacy->calibration;
    m += Line("privacy", "calibrated");
    m += Line("epsilon", Num(e.privacy->budget.epsilon));
    m += Line("delta0", Num(e.privacy->budget.delta0));
    m += Line("sigma", Num(cal.sigma));
    m += Line("sigma_squared", Num(cal.sigma_squared));
    m += Line("achieved_epsilon", Num(cal.achieved.epsilon));
    m += Line("achieved_delta", Num(cal.achieved.delta));
    m += Line("guarantee_holds", cal.guarantee_holds ? "true" : "false");
    m += Line("accountant",
              fmt::format("noise calibrated with iota={} and the closed-form "
                          "loss curve applied with the same iota{}",
                          Num(e.privacy->budget.iota),
                          e.sampler->strategy() == SamplingStrategy::kAllEdges
                              ? " (all-edges baseline, assumed)"
                              : ""));
  } else {
    m += Line("privacy", "noiseless");
  }
  m += Line("reference_objective", Num(reference.objective));
  bool ok = true;
  double worst = 0.0;
  for (const auto& t : traces) {
    ok = ok && t.mean_dual_ok;
    worst = std::max(worst, t.max_mean_dual_error);
  }
  m += Line("mean_dual_check", ok ? "pass" : "fail");
  m += Line("max_mean_dual_error", Num(worst));
  return m;
}

struct Prepared {
  Experiment experiment;
  Reference reference;
};

// Runs every seed and writes the per-seed, aggregate and metadata files.
// Returns false when the mean-dual check failed on some seed.
bool ExecuteAndWrite(const Prepared& p, const std::string& dir, std::ostream& out,
                     std::vector<RunTrace>* traces_out = nullptr) {
  const auto& seeds = p.experiment.config.run.seeds;
  std::vector<RunTrace> traces =
      RunSeeds(p.experiment, p.reference, seeds, ThreadBudget());
  std::filesystem::create_directories(dir);
  for (size_t i = 0; i < seeds.size(); ++i) {
    WriteTextFile((std::filesystem::path(dir) /
                   fmt::format("trace_seed_{}.csv", seeds[i]))
                      .string(),
                  FormatTraceCsv(traces[i]));
  }
  WriteTextFile((std::filesystem::path(dir) / "aggregate.csv").string(),
                FormatAggregateCsv(traces));
  const std::string meta = RunMeta(p.experiment, p.reference, traces);
  WriteTextFile((std::filesystem::path(dir) / "run_meta.txt").string(), meta);

  double final_sum = 0.0;
  bool ok = true;
  for (const auto& t : traces) {
    final_sum += t.rows.back().subopt_mean_ergodic;
    ok = ok && t.mean_dual_ok;
  }
  out << Line("out_dir", dir);
  out << Line("seeds", JoinSeeds(seeds));
  out << Line("final_subopt_mean", Num(final_sum / static_cast<double>(traces.size())));
  out << Line("mean_dual_check", ok ? "pass" : "fail");
  if (traces_out) *traces_out = std::move(traces);
  return ok;
}

ExperimentConfig ApplySweepValue(ExperimentConfig config, const std::string& axis,
                                 double value) {
  if (axis == "epsilon") {
    if (config.privacy.noiseless) {
      throw Error(ErrorCode::kConfig, "an epsilon sweep needs calibrated privacy");
    }
    config.privacy.epsilon = value;
  } else if (axis == "k_edges") {
    if (value < 1.0 || value != std::floor(value)) {
      throw Error(ErrorCode::kConfig,
                  fmt::format("k_edges values must be positive integers, got {}", value));
    }
    config.topology.strategy = "matching";
    config.topology.edges_per_round = static_cast<int>(value);
  } else if (axis == "iota") {
    if (std::abs(value - 1.0) < 1e-12) {
      config.topology.strategy = "all_edges";
    } else {
      const double k = value * config.problem.nodes / 2.0;
      if (!(k >= 1.0) || std::abs(k - std::round(k)) > 1e-9) {
        throw Error(ErrorCode::kConfig,
                    fmt::format("iota={} is not 2k/n for an integer k with n={}",
                                value, config.problem.nodes));
      }
      config.topology.strategy = "matching";
      config.topology.edges_per_round = static_cast<int>(std::round(k));
    }
  } else {
    throw Error(ErrorCode::kConfig, fmt::format("unknown sweep axis '{}'", axis));
  }
  return config;
}

}  // namespace

int CmdCalibrate(const CalibrateOptions& options, std::ostream& out,
                 std::ostream& err) {
  PrivacyBudget budget;
  NoiseCalibration cal;
  const int code = Guarded(kExitConfig, err, [&] {
    budget.epsilon = options.epsilon;
    budget.delta0 = options.delta0;
    budget.iota = options.iota;
    budget.lipschitz = options.lipschitz;
    budget.samples_per_node = options.samples_per_node;
    budget.Validate();
    budget.horizon = options.horizon.value_or(
        MinimumHorizon(options.epsilon, options.iota));
    cal = Calibrate(budget);
  });
  if (code != kExitOk) return code;
  out << fmt::format("# gaussian noise for epsilon={} delta0={} iota={} over T={} "
                     "rounds\n",
                     Num(budget.epsilon), Num(budget.delta0), Num(budget.iota),
                     budget.horizon);
  out << Line("horizon", std::to_string(budget.horizon));
  out << Line("minimum_horizon", std::to_string(cal.minimum_horizon));
  out << Line("sigma_squared", Num(cal.sigma_squared));
  out << Line("sigma", Num(cal.sigma));
  out << Line("per_step_epsilon", Num(cal.per_step_epsilon));
  out << Line("amplified_epsilon", Num(cal.amplified_epsilon));
  out << Line("exact_amplified_epsilon", Num(cal.exact_amplified_epsilon));
  out << Line("amplified_delta", Num(cal.amplified_delta));
  out << Line("delta_prime", Num(cal.delta_prime));
  out << Line("achieved_epsilon", Num(cal.achieved.epsilon));
  out << Line("achieved_delta", Num(cal.achieved.delta));
  out << Line("guarantee_holds", cal.guarantee_holds ? "true" : "false");
  out << Line("final_privacy_loss",
              Num(PrivacyLossAt(budget.horizon, budget.horizon, budget.epsilon)));
  return kExitOk;
}

int CmdReference(const std::string& config_path, const CommandOverrides& overrides,
                 std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  std::shared_ptr<const ProblemInstance> problem;
  int code = Guarded(kExitConfig, err, [&] {
    config = LoadWithOverrides(config_path, overrides);
    problem = BuildProblem(config.problem);
  });
  if (code != kExitOk) return code;
  return Guarded(kExitRuntime, err, [&] {
    ReferenceSolution s = SolveReference(*problem, ReferenceOptionsFor(config.run));
    std::filesystem::create_directories(config.run.out);
    const std::string path =
        (std::filesystem::path(config.run.out) / "reference.txt").string();
    WriteTextFile(path, FormatReference(s));
    out << Line("reference_file", path);
    out << Line("objective", Num(s.objective));
    out << Line("iterations", std::to_string(s.iterations));
    out << Line("converged", s.converged ? "true" : "false");
  });
}

int CmdRun(const std::string& config_path, const CommandOverrides& overrides,
           std::ostream& out, std::ostream& err) {
  Prepared p;
  int code = Guarded(kExitConfig, err, [&] {
    p.experiment = PrepareExperiment(LoadWithOverrides(config_path, overrides));
    p.reference = ObtainReference(p.experiment);
  });
  if (code != kExitOk) return code;
  bool ok = true;
  code = Guarded(kExitRuntime, err,
                 [&] { ok = ExecuteAndWrite(p, p.experiment.config.run.out, out); });
  if (code != kExitOk) return code;
  if (!ok) {
    err << "error: mean dual recursion violated\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int CmdSweep(const std::string& config_path, const CommandOverrides& overrides,
             std::ostream& out, std::ostream& err) {
  ExperimentConfig base;
  std::vector<Prepared> prepared;
  int code = Guarded(kExitConfig, err, [&] {
    base = LoadWithOverrides(config_path, overrides);
    if (base.run.sweep_axis.empty() || base.run.sweep_values.empty()) {
      throw Error(ErrorCode::kConfig,
                  "sweep needs [run] sweep_axis and a nonempty sweep_values");
    }
    for (double v : base.run.sweep_values) {
      Prepared p;
      p.experiment = PrepareExperiment(ApplySweepValue(base, base.run.sweep_axis, v));
      p.experiment.config.run.out =
          (std::filesystem::path(base.run.out) /
           fmt::format("{}_{}", base.run.sweep_axis, v))
              .string();
      if (prepared.empty()) {
        p.reference = ObtainReference(p.experiment);
      } else {
        p.reference = prepared.front().reference;
      }
      prepared.push_back(std::move(p));
    }
  });
  if (code != kExitOk) return code;

  bool ok = true;
  code = Guarded(kExitRuntime, err, [&] {
    const auto& axis = base.run.sweep_axis;
    const auto& values = base.run.sweep_values;
    const auto& seeds = base.run.seeds;
    std::vector<std::vector<double>> finals;
    std::string longform = "axis,value,seed,final_subopt,final_consensus_err,final_eps_hat\n";
    for (size_t v = 0; v < prepared.size(); ++v) {
      std::vector<RunTrace> traces;
      ok = ExecuteAndWrite(prepared[v], prepared[v].experiment.config.run.out, out,
                           &traces) && ok;
      finals.emplace_back();
      for (size_t s = 0; s < seeds.size(); ++s) {
        const TraceRow& last = traces[s].rows.back();
        finals.back().push_back(last.subopt_mean_ergodic);
        longform += fmt::format("{},{},{},{:.17g},{:.17g},{:.17g}\n", axis, Num(values[v]),
                                seeds[s], last.subopt_mean_ergodic,
                                last.consensus_error, last.eps_hat);
      }
    }
    std::string paired = "seed,value_a,value_b,subopt_a,subopt_b,a_lower\n";
    for (size_t a = 0; a < values.size(); ++a) {
      for (size_t b = a + 1; b < values.size(); ++b) {
        int wins = 0;
        for (size_t s = 0; s < seeds.size(); ++s) {
          const bool lower = finals[a][s] < finals[b][s];
          wins += lower;
          paired += fmt::format("{},{},{},{:.17g},{:.17g},{}\n", seeds[s],
                                Num(values[a]), Num(values[b]), finals[a][s],
                                finals[b][s], lower ? 1 : 0);
        }
        out << Line(fmt::format("lower_fraction_{}_vs_{}", Num(values[a]), Num(values[b])),
                    Num(static_cast<double>(wins) / static_cast<double>(seeds.size())));
      }
    }
    std::filesystem::create_directories(base.run.out);
    WriteTextFile((std::filesystem::path(base.run.out) / "sweep.csv").string(), longform);
    WriteTextFile((std::filesystem::path(base.run.out) / "sweep_paired.csv").string(),
                  paired);
  });
  if (code != kExitOk) return code;
  if (!ok) {
    err << "error: mean dual recursion violated\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace pridda
