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

#include "pridda/config.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "pridda/error.h"

namespace pridda {
namespace {

[[noreturn]] void ParseFail(int line, const std::string& message) {
  throw Error(ErrorCode::kParse, fmt::format("line {}: {}", line, message));
}

[[noreturn]] void ConfigFail(const std::string& message) {
  throw Error(ErrorCode::kConfig, message);
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool IsKeyChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

bool IsIdentifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!IsKeyChar(c)) return false;
  }
  return true;
}

// Removes a trailing '#' comment that is not inside a string.
std::string_view StripComment(std::string_view line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

// Parses a quoted string starting at text[0] == '"'; sets `consumed`.
std::string ParseQuoted(std::string_view text, int line, size_t& consumed) {
  std::string out;
  for (size_t i = 1; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '"') {
      consumed = i + 1;
      return out;
    }
    if (c == '\\') {
      if (++i >= text.size()) break;
      switch (text[i]) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: ParseFail(line, fmt::format("unknown escape \\{}", text[i]));
      }
    } else {
      out += c;
    }
  }
  ParseFail(line, "unterminated string");
}

ConfigScalar ParseScalar(std::string_view text, int line) {
  text = Trim(text);
  if (text.empty()) ParseFail(line, "missing value");
  if (text.front() == '"') {
    size_t consumed = 0;
    std::string s = ParseQuoted(text, line, consumed);
    if (!Trim(text.substr(consumed)).empty()) {
      ParseFail(line, "unexpected text after string");
    }
    return s;
  }
  if (text == "true") return true;
  if (text == "false") return false;
  std::string_view digits = text;
  if (digits.front() == '+') digits.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || end != digits.data() + digits.size() ||
      !std::isfinite(value)) {
    ParseFail(line, fmt::format("cannot parse value '{}'", text));
  }
  return value;
}

std::vector<ConfigScalar> ParseArray(std::string_view text, int line) {
  // text includes the brackets.
  if (text.back() != ']') ParseFail(line, "arrays must close on the same line");
  std::string_view body = Trim(text.substr(1, text.size() - 2));
  std::vector<ConfigScalar> items;
  while (!body.empty()) {
    size_t end = 0;
    if (body.front() == '"') {
      ParseQuoted(body, line, end);
    }
    end = body.find(',', end);
    std::string_view item = Trim(body.substr(0, end));
    if (item.empty()) ParseFail(line, "empty array element");
    items.push_back(ParseScalar(item, line));
    if (end == std::string_view::npos) break;
    body = Trim(body.substr(end + 1));
  }
  return items;
}

std::string Where(const std::string& section, const std::string& key) {
  return fmt::format("[{}] {}", section, key);
}

std::string ResolvePath(const std::string& base_dir, const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

ConfigDocument ConfigDocument::Parse(std::string_view text) {
  ConfigDocument doc;
  std::string section;
  int line_number = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    std::string_view line = Trim(StripComment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') ParseFail(line_number, "malformed section header");
      std::string_view name = Trim(line.substr(1, line.size() - 2));
      if (!IsIdentifier(name)) {
        ParseFail(line_number, fmt::format("bad section name '{}'", name));
      }
      section = std::string(name);
      doc.sections_[section];
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) ParseFail(line_number, "expected key = value");
    std::string_view key = Trim(line.substr(0, eq));
    std::string_view value = Trim(line.substr(eq + 1));
    if (!IsIdentifier(key)) ParseFail(line_number, fmt::format("bad key '{}'", key));
    if (section.empty()) {
      ParseFail(line_number, fmt::format("key '{}' outside any section", key));
    }
    auto& table = doc.sections_[section];
    if (table.count(std::string(key))) {
      ParseFail(line_number, fmt::format("duplicate key '{}'", key));
    }
    ConfigValue cv;
    cv.line = line_number;
    if (!value.empty() && value.front() == '[') {
      cv.value = ParseArray(value, line_number);
    } else {
      std::visit([&](auto&& v) { cv.value = v; }, ParseScalar(value, line_number));
    }
    table.emplace(std::string(key), std::move(cv));
  }
  return doc;
}

bool ConfigDocument::Has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

const ConfigValue& ConfigDocument::Find(const std::string& section,
                                        const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end() || !s->second.count(key)) {
    ConfigFail(fmt::format("missing {}", Where(section, key)));
  }
  return s->second.at(key);
}

std::string ConfigDocument::GetString(const std::string& section,
                                      const std::string& key) const {
  const ConfigValue& v = Find(section, key);
  if (const auto* s = std::get_if<std::string>(&v.value)) return *s;
  ConfigFail(fmt::format("{} (line {}) must be a string", Where(section, key), v.line));
}

double ConfigDocument::GetNumber(const std::string& section,
                                 const std::string& key) const {
  const ConfigValue& v = Find(section, key);
  if (const auto* d = std::get_if<double>(&v.value)) return *d;
  ConfigFail(fmt::format("{} (line {}) must be a number", Where(section, key), v.line));
}

int64_t ConfigDocument::GetInteger(const std::string& section,
                                   const std::string& key) const {
  const double d = GetNumber(section, key);
  if (d != std::floor(d) || std::abs(d) > 9.0e15) {
    ConfigFail(fmt::format("{} must be an integer, got {}", Where(section, key), d));
  }
  return static_cast<int64_t>(d);
}

bool ConfigDocument::GetBool(const std::string& section,
                             const std::string& key) const {
  const ConfigValue& v = Find(section, key);
  if (const auto* b = std::get_if<bool>(&v.value)) return *b;
  ConfigFail(fmt::format("{} (line {}) must be true or false", Where(section, key),
                         v.line));
}

std::vector<double> ConfigDocument::GetNumberList(const std::string& section,
                                                  const std::string& key) const {
  const ConfigValue& v = Find(section, key);
  std::vector<double> out;
  if (const auto* d = std::get_if<double>(&v.value)) {
    out.push_back(*d);
    return out;
  }
  const auto* list = std::get_if<std::vector<ConfigScalar>>(&v.value);
  if (list == nullptr) {
    ConfigFail(fmt::format("{} (line {}) must be a list of numbers",
                           Where(section, key), v.line));
  }
  for (const auto& item : *list) {
    const auto* d = std::get_if<double>(&item);
    if (d == nullptr) {
      ConfigFail(fmt::format("{} (line {}) must contain only numbers",
                             Where(section, key), v.line));
    }
    out.push_back(*d);
  }
  return out;
}

std::string ConfigDocument::GetString(const std::string& section,
                                      const std::string& key,
                                      const std::string& fallback) const {
  return Has(section, key) ? GetString(section, key) : fallback;
}

double ConfigDocument::GetNumber(const std::string& section,
                                 const std::string& key, double fallback) const {
  return Has(section, key) ? GetNumber(section, key) : fallback;
}

int64_t ConfigDocument::GetInteger(const std::string& section,
                                   const std::string& key,
                                   int64_t fallback) const {
  return Has(section, key) ? GetInteger(section, key) : fallback;
}

void ConfigDocument::RequireKnown(
    const std::map<std::string, std::set<std::string>>& allowed) const {
  for (const auto& [section, table] : sections_) {
    auto known = allowed.find(section);
    if (known == allowed.end()) {
      ConfigFail(fmt::format("unknown section [{}]", section));
    }
    for (const auto& [key, value] : table) {
      if (!known->second.count(key)) {
        ConfigFail(fmt::format("unknown key {} (line {})", Where(section, key),
                               value.line));
      }
    }
  }
}

std::vector<uint64_t> ParseSeedList(std::string_view text) {
  std::vector<uint64_t> seeds;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = Trim(text.substr(pos, end - pos));
    uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), seed);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      ConfigFail(fmt::format("bad seed '{}' in '{}'", item, text));
    }
    seeds.push_back(seed);
    pos = end + 1;
  }
  return seeds;
}

void ExperimentConfig::Validate() const {
  if (problem.source != "synthetic" && problem.source != "libsvm") {
    ConfigFail(fmt::format("[problem] source must be synthetic or libsvm, got '{}'",
                           problem.source));
  }
  if (problem.source == "libsvm") {
    if (problem.path.empty()) ConfigFail("[problem] path is required for libsvm data");
    if (!std::filesystem::is_regular_file(problem.path)) {
      ConfigFail(fmt::format("dataset '{}' does not exist", problem.path));
    }
  } else {
    if (!problem.dimension || *problem.dimension < 1) {
      ConfigFail("[problem] dimension must be a positive integer");
    }
    if (problem.samples < problem.nodes) {
      ConfigFail(fmt::format("[problem] samples ({}) must be at least nodes ({})",
                             problem.samples, problem.nodes));
    }
    if (!(problem.margin >= 0.0)) ConfigFail("[problem] margin must be >= 0");
  }
  if (problem.nodes < 2) ConfigFail("[problem] nodes must be >= 2");
  if (topology.graph != "complete" && topology.graph != "edges") {
    ConfigFail(fmt::format("[topology] graph must be complete or edges, got '{}'",
                           topology.graph));
  }
  if (topology.graph == "edges" && topology.edges.empty()) {
    ConfigFail("[topology] edges is required when graph = \"edges\"");
  }
  if (topology.strategy != "matching" && topology.strategy != "all_edges") {
    ConfigFail(fmt::format("[topology] strategy must be matching or all_edges, got '{}'",
                           topology.strategy));
  }
  if (topology.strategy == "matching" && topology.edges_per_round < 1) {
    ConfigFail("[topology] edges_per_round must be >= 1");
  }
  if (topology.beta && !(*topology.beta >= 0.0 && *topology.beta < 1.0)) {
    ConfigFail("[topology] beta must lie in [0, 1)");
  }
  if (topology.beta_trials < 1) ConfigFail("[topology] beta_trials must be >= 1");
  if (run.horizon < 1) ConfigFail("[run] horizon must be >= 1");
  if (run.trace_stride < 1 || run.trace_stride > run.horizon) {
    ConfigFail(fmt::format("[run] trace_stride must lie in [1, horizon={}], got {}",
                           run.horizon, run.trace_stride));
  }
  if (run.seeds.empty()) ConfigFail("[run] seeds must not be empty");
  if (run.reference_iterations < 1) ConfigFail("[run] reference_iterations must be >= 1");
  if (!(run.reference_gamma > 0.0)) ConfigFail("[run] reference_gamma must be > 0");
  if (!run.reference.empty() && !std::filesystem::is_regular_file(run.reference)) {
    ConfigFail(fmt::format("reference file '{}' does not exist", run.reference));
  }
  if (!run.sweep_axis.empty() && run.sweep_axis != "epsilon" &&
      run.sweep_axis != "iota" && run.sweep_axis != "k_edges") {
    ConfigFail(fmt::format("[run] sweep_axis must be epsilon, iota or k_edges, got '{}'",
                           run.sweep_axis));
  }
}

ExperimentConfig ParseExperimentConfig(std::string_view text,
                                       const std::string& base_dir) {
  const ConfigDocument doc = ConfigDocument::Parse(text);
  doc.RequireKnown({
      {"problem",
       {"source", "path", "samples", "dimension", "margin", "data_seed", "nodes",
        "regularizer", "regularizer_parameter"}},
      {"schedule", {"kind", "gamma"}},
      {"privacy", {"mode", "epsilon", "delta0"}},
      {"topology",
       {"graph", "edges", "strategy", "edges_per_round", "beta", "beta_trials"}},
      {"run",
       {"horizon", "seeds", "trace_stride", "out", "reference",
        "reference_iterations", "reference_gamma", "sweep_axis", "sweep_values"}},
  });

  ExperimentConfig c;
  ProblemSpec& p = c.problem;
  p.source = doc.GetString("problem", "source", p.source);
  p.path = ResolvePath(base_dir, doc.GetString("problem", "path", ""));
  p.samples = static_cast<int>(doc.GetInteger("problem", "samples", p.samples));
  if (doc.Has("problem", "dimension")) {
    p.dimension = static_cast<int>(doc.GetInteger("problem", "dimension"));
  } else if (p.source == "synthetic") {
    p.dimension = 20;
  }
  p.margin = doc.GetNumber("problem", "margin", p.margin);
  const int64_t data_seed = doc.GetInteger("problem", "data_seed", 1);
  if (data_seed < 0) ConfigFail("[problem] data_seed must be >= 0");
  p.data_seed = static_cast<uint64_t>(data_seed);
  p.nodes = static_cast<int>(doc.GetInteger("problem", "nodes", p.nodes));
  p.regularizer = doc.GetString("problem", "regularizer", p.regularizer);
  p.regularizer_parameter =
      doc.GetNumber("problem", "regularizer_parameter", p.regularizer_parameter);

  c.schedule.kind = doc.GetString("schedule", "kind", c.schedule.kind);
  c.schedule.gamma = doc.GetNumber("schedule", "gamma", c.schedule.gamma);

  const std::string mode = doc.GetString("privacy", "mode", "calibrated");
  if (mode != "calibrated" && mode != "noiseless") {
    ConfigFail(fmt::format("[privacy] mode must be calibrated or noiseless, got '{}'",
                           mode));
  }
  c.privacy.noiseless = mode == "noiseless";
  c.privacy.epsilon = doc.GetNumber("privacy", "epsilon", c.privacy.epsilon);
  c.privacy.delta0 = doc.GetNumber("privacy", "delta0", c.privacy.delta0);

  TopologySpec& t = c.topology;
  t.graph = doc.GetString("topology", "graph", t.graph);
  t.edges = doc.GetString("topology", "edges", t.edges);
  t.strategy = doc.GetString("topology", "strategy", t.strategy);
  t.edges_per_round =
      static_cast<int>(doc.GetInteger("topology", "edges_per_round", t.edges_per_round));
  if (doc.Has("topology", "beta")) t.beta = doc.GetNumber("topology", "beta");
  t.beta_trials = static_cast<int>(doc.GetInteger("topology", "beta_trials", t.beta_trials));

  RunSpec& r = c.run;
  r.horizon = doc.GetInteger("run", "horizon", r.horizon);
  if (doc.Has("run", "seeds")) {
    r.seeds.clear();
    for (double s : doc.GetNumberList("run", "seeds")) {
      if (s < 0.0 || s != std::floor(s) || s > 9.0e15) {
        ConfigFail(fmt::format("[run] seeds must be nonnegative integers, got {}", s));
      }
      r.seeds.push_back(static_cast<uint64_t>(s));
    }
  }
  r.trace_stride = doc.GetInteger("run", "trace_stride", r.trace_stride);
  r.out = ResolvePath(base_dir, doc.GetString("run", "out", r.out));
  r.reference = ResolvePath(base_dir, doc.GetString("run", "reference", ""));
  r.reference_iterations =
      doc.GetInteger("run", "reference_iterations", r.reference_iterations);
  r.reference_gamma = doc.GetNumber("run", "reference_gamma", r.reference_gamma);
  r.sweep_axis = doc.GetString("run", "sweep_axis", "");
  if (doc.Has("run", "sweep_values")) {
    r.sweep_values = doc.GetNumberList("run", "sweep_values");
  }
  c.Validate();
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ConfigFail(fmt::format("cannot open config '{}'", path));
  std::ostringstream text;
  text << in.rdbuf();
  const std::string base =
      std::filesystem::path(path).parent_path().string();
  return ParseExperimentConfig(text.str(), base.empty() ? "." : base);
}

}  // namespace pridda
