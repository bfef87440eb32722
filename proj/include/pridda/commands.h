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

#ifndef PRIDDA_COMMANDS_H_
#define PRIDDA_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pridda {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct CalibrateOptions {
  double epsilon = 1.0;
  double delta0 = 0.01;
  double iota = 1.0;
  double lipschitz = 1.0;
  int64_t samples_per_node = 1;
  std::optional<int64_t> horizon;  // minimum feasible T when absent
};

// Command-line values that take precedence over the config file.
struct CommandOverrides {
  std::vector<uint64_t> seeds;  // empty keeps the configured seeds
  std::optional<std::string> out;
  std::optional<int64_t> trace_stride;
};

// Each command prints key=value lines to `out`, diagnostics to `err`, and
// returns the process exit code.
int CmdCalibrate(const CalibrateOptions& options, std::ostream& out,
                 std::ostream& err);
// Writes <out>/reference.txt.
int CmdReference(const std::string& config_path, const CommandOverrides& overrides,
                 std::ostream& out, std::ostream& err);
// Writes trace_seed_<seed>.csv per seed, aggregate.csv and run_meta.txt.
int CmdRun(const std::string& config_path, const CommandOverrides& overrides,
           std::ostream& out, std::ostream& err);
// Runs the configured axis values on matched seeds. Each value gets the
// cmd_run outputs under <out>/<axis>_<value>/, plus sweep.csv and
// sweep_paired.csv at the top level.
int CmdSweep(const std::string& config_path, const CommandOverrides& overrides,
             std::ostream& out, std::ostream& err);

}  // namespace pridda

#endif  // PRIDDA_COMMANDS_H_
