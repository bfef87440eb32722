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

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "pridda/commands.h"
#include "pridda/config.h"
#include "pridda/error.h"

namespace {

struct ConfigFlags {
  std::string config;
  std::optional<uint64_t> seed;
  std::string seeds;
  std::optional<std::string> out;
  std::optional<int64_t> trace_stride;
};

void AddConfigFlags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config (TOML)")
      ->required();
  auto* seed = cmd->add_option("--seed", flags.seed, "Run a single seed");
  cmd->add_option("--seeds", flags.seeds, "Comma-separated seed list")
      ->excludes(seed);
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--trace-stride", flags.trace_stride,
                  "Record a trace row every N rounds");
}

pridda::CommandOverrides ToOverrides(const ConfigFlags& flags) {
  pridda::CommandOverrides o;
  if (flags.seed) o.seeds = {*flags.seed};
  if (!flags.seeds.empty()) o.seeds = pridda::ParseSeedList(flags.seeds);
  o.out = flags.out;
  o.trace_stride = flags.trace_stride;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private distributed dual averaging with node "
               "sampling"};
  app.require_subcommand(1);

  pridda::CalibrateOptions calibrate;
  auto* cal = app.add_subcommand("calibrate", "Noise level and privacy report");
  cal->add_option("--epsilon", calibrate.epsilon, "Target epsilon in (0, 1]")
      ->required();
  cal->add_option("--delta0", calibrate.delta0, "Per-step delta")->required();
  cal->add_option("--iota", calibrate.iota, "Fraction of active nodes")
      ->required();
  cal->add_option("--lipschitz", calibrate.lipschitz, "Lipschitz constant")
      ->capture_default_str();
  cal->add_option("--q", calibrate.samples_per_node,
                  "Smallest local dataset size")
      ->required();
  cal->add_option("--horizon", calibrate.horizon,
                  "Number of rounds; the minimum feasible value when omitted");

  ConfigFlags reference_flags, run_flags, sweep_flags;
  auto* ref = app.add_subcommand("reference", "Solve for x* and F(x*)");
  AddConfigFlags(ref, reference_flags);
  auto* run = app.add_subcommand("run", "Run one experiment over seeds");
  AddConfigFlags(run, run_flags);
  auto* sweep = app.add_subcommand("sweep", "Matched-seed comparison along an axis");
  AddConfigFlags(sweep, sweep_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pridda::kExitConfig;
  }

  try {
    if (*cal) return pridda::CmdCalibrate(calibrate, std::cout, std::cerr);
    if (*ref) {
      return pridda::CmdReference(reference_flags.config,
                                  ToOverrides(reference_flags), std::cout,
                                  std::cerr);
    }
    if (*run) {
      return pridda::CmdRun(run_flags.config, ToOverrides(run_flags), std::cout,
                            std::cerr);
    }
    return pridda::CmdSweep(sweep_flags.config, ToOverrides(sweep_flags),
                            std::cout, std::cerr);
  } catch (const pridda::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pridda::kExitConfig;
  }
}
