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

#ifndef PRIDDA_CONFIG_H_
#define PRIDDA_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pridda {

// Flat TOML subset: [section] headers, key = value lines, '#' comments.
// Values are quoted strings, numbers, booleans or single-line arrays of
// numbers or strings.
using ConfigScalar = std::variant<bool, double, std::string>;

struct ConfigValue {
  std::variant<bool, double, std::string, std::vector<ConfigScalar>> value;
  int line = 0;
};

class ConfigDocument {
 public:
  // Throws kParse with the 1-based line number.
  static ConfigDocument Parse(std::string_view text);

  bool Has(const std::string& section, const std::string& key) const;
  // Typed accessors throw kConfig on a type mismatch or a missing key.
  std::string GetString(const std::string& section, const std::string& key) const;
  double GetNumber(const std::string& section, const std::string& key) const;
  int64_t GetInteger(const std::string& section, const std::string& key) const;
  bool GetBool(const std::string& section, const std::string& key) const;
  std::vector<double> GetNumberList(const std::string& section,
                                    const std::string& key) const;

  std::string GetString(const std::string& section, const std::string& key,
                        const std::string& fallback) const;
  double GetNumber(const std::string& section, const std::string& key,
                   double fallback) const;
  int64_t GetInteger(const std::string& section, const std::string& key,
                     int64_t fallback) const;

  // Throws kConfig naming the first section or key outside `allowed`.
  void RequireKnown(
      const std::map<std::string, std::set<std::string>>& allowed) const;

 private:
  const ConfigValue& Find(const std::string& section,
                          const std::string& key) const;

  std::map<std::string, std::map<std::string, ConfigValue>> sections_;
};

struct ProblemSpec {
  std::string source = "synthetic";  // "synthetic" or "libsvm"
  std::string path;                  // libsvm file, resolved
  int samples = 1000;
  std::optional<int> dimension;
  double margin = 0.1;
  uint64_t data_seed = 1;
  int nodes = 20;
  std::string regularizer = "l1";
  double regularizer_parameter = 0.0005;
};

struct ScheduleSpec {
  std::string kind = "convex";
  double gamma = 0.01;
};

struct PrivacySpec {
  bool noiseless = false;
  double epsilon = 1.0;
  double delta0 = 0.01;
};

struct TopologySpec {
  std::string graph = "complete";  // "complete" or "edges"
  std::string edges;               // "1-2,2-3" when graph = "edges"
  std::string strategy = "matching";
  int edges_per_round = 1;
  std::optional<double> beta;
  int beta_trials = 10000;
};

struct RunSpec {
  int64_t horizon = 1000;
  std::vector<uint64_t> seeds = {1};
  int64_t trace_stride = 1;
  std::string out = "out";
  std::string reference;  // optional key=value reference file, resolved
  int64_t reference_iterations = 200000;
  double reference_gamma = 0.01;
  std::string sweep_axis;
  std::vector<double> sweep_values;
};

struct ExperimentConfig {
  ProblemSpec problem;
  ScheduleSpec schedule;
  PrivacySpec privacy;
  TopologySpec topology;
  RunSpec run;

  // Throws kConfig; checks that referenced files exist.
  void Validate() const;
};

// Relative paths inside the document are resolved against `base_dir`.
ExperimentConfig ParseExperimentConfig(std::string_view text,
                                       const std::string& base_dir = ".");
ExperimentConfig LoadExperimentConfig(const std::string& path);

// "1,2,3" -> {1, 2, 3}; throws kConfig.
std::vector<uint64_t> ParseSeedList(std::string_view text);

}  // namespace pridda

#endif  // PRIDDA_CONFIG_H_
