// Copyright 2026 The PolicyForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "policyforge/cli/config.h"

#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "policyforge/common/errors.h"
#include "policyforge/envs/factory.h"
#include "policyforge/lang/parser.h"

namespace policyforge::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kRequired = "(required)";
constexpr std::string_view kUnset = "(unset)";

std::string_view TypeName(ValueType t) {
  switch (t) {
    case ValueType::kString: return "string";
    case ValueType::kInteger: return "integer";
    case ValueType::kFloat: return "float";
    case ValueType::kBoolean: return "boolean";
  }
  return "?";
}

std::string ReadFile(const fs::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + std::string(what) + " " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Typed access to a validated document.
class Reader {
 public:
  explicit Reader(const TomlDocument& doc) : doc_(doc) {}

  const TomlValue* Find(std::string_view section, std::string_view key) const {
    const auto s = doc_.sections.find(std::string(section));
    if (s == doc_.sections.end()) return nullptr;
    const auto k = s->second.find(std::string(key));
    return k == s->second.end() ? nullptr : &k->second;
  }

  template <typename T>
  void Get(std::string_view section, std::string_view key, T& out) const {
    const TomlValue* v = Find(section, key);
    if (v == nullptr) return;
    if constexpr (std::is_same_v<T, std::string>) {
      out = std::get<std::string>(v->value);
    } else if constexpr (std::is_same_v<T, bool>) {
      out = std::get<bool>(v->value);
    } else if constexpr (std::is_floating_point_v<T>) {
      if (const auto* i = std::get_if<std::int64_t>(&v->value)) {
        out = static_cast<T>(*i);
      } else {
        out = std::get<double>(v->value);
      }
    } else {
      const std::int64_t n = std::get<std::int64_t>(v->value);
      if (n < static_cast<std::int64_t>(std::numeric_limits<T>::min()) ||
          (n > 0 && static_cast<std::uint64_t>(n) > std::numeric_limits<T>::max())) {
        throw ConfigError(Name(section, key) + ": value out of range");
      }
      out = static_cast<T>(n);
    }
  }

  static std::string Name(std::string_view section, std::string_view key) {
    return std::string(section) + "." + std::string(key);
  }

 private:
  const TomlDocument& doc_;
};

void CheckSchema(const TomlDocument& doc) {
  std::set<std::string> sections;
  for (const KeySpec& spec : ConfigSchema()) sections.insert(std::string(spec.section));
  for (const auto& [section, table] : doc.sections) {
    if (section.empty()) {
      if (!table.empty()) {
        throw ConfigError("key '" + table.begin()->first +
                          "' must be inside a section such as [task]");
      }
      continue;
    }
    if (!sections.count(section)) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, value] : table) {
      const KeySpec* spec = nullptr;
      for (const KeySpec& s : ConfigSchema()) {
        if (s.section == section && s.key == key) spec = &s;
      }
      const std::string name = Reader::Name(section, key);
      if (spec == nullptr) {
        throw ConfigError("unknown key '" + name + "' (line " + std::to_string(value.line) + ")");
      }
      const bool ok = std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            switch (spec->type) {
              case ValueType::kString: return std::is_same_v<V, std::string>;
              case ValueType::kInteger: return std::is_same_v<V, std::int64_t>;
              case ValueType::kFloat:
                return std::is_same_v<V, double> || std::is_same_v<V, std::int64_t>;
              case ValueType::kBoolean: return std::is_same_v<V, bool>;
            }
            return false;
          },
          value.value);
      if (!ok) {
        throw ConfigError("key '" + name + "' expects a " + std::string(TypeName(spec->type)) +
                          " (line " + std::to_string(value.line) + ")");
      }
    }
  }
  for (const KeySpec& s : ConfigSchema()) {
    if (s.default_value == kRequired && Reader(doc).Find(s.section, s.key) == nullptr) {
      throw ConfigError("missing required key '" + Reader::Name(s.section, s.key) + "'");
    }
  }
}

}  // namespace

const std::vector<KeySpec>& ConfigSchema() {
  using T = ValueType;
  static const std::vector<KeySpec> schema = {
      {"task", "description", T::kString, kRequired, "Task description placed in every prompt"},
      {"task", "starter", T::kString, kRequired, "Path of the starter policy source"},
      {"task", "env", T::kString, "pendulum_swingup",
       "pendulum_swingup, ball_in_cup or external"},
      {"task", "horizon", T::kInteger, "1000", "Control steps per episode"},
      {"task", "episodes", T::kInteger, "10", "Episodes per score (M)"},
      {"task", "seed_base", T::kInteger, "0", "First episode seed; shared by all candidates"},
      {"gfo", "method", T::kString, "es", "es, random or none"},
      {"gfo", "budget", T::kInteger, "100", "Objective evaluations per candidate"},
      {"generator", "kind", T::kString, "mock", "mock or http"},
      {"generator", "endpoint", T::kString, "", "Base URL of a chat/completions API"},
      {"generator", "model", T::kString, "", "Model name sent with each request"},
      {"generator", "temperature", T::kFloat, "0.8", "Sampling temperature"},
      {"generator", "max_tokens", T::kInteger, "1024", "Completion length limit"},
      {"generator", "batch_size", T::kInteger, "4", "Samples per prompt (B)"},
      {"generator", "request_timeout_s", T::kFloat, "120", "HTTP request timeout"},
      {"generator", "api_key_env", T::kString, "POLICYFORGE_API_KEY",
       "Environment variable holding the API key"},
      {"generator", "max_attempts", T::kInteger, "3", "HTTP attempts per request"},
      {"generator", "mock_latency_s", T::kFloat, "0", "Artificial mock latency per batch"},
      {"database", "islands", T::kInteger, "4", "Number of islands (K)"},
      {"database", "reset_period", T::kInteger, "0",
       "Generations between island resets; 0 disables"},
      {"database", "temperature", T::kFloat, "0",
       "Pair-sampling temperature; 0 adapts to the island's score spread"},
      {"run", "seed", T::kInteger, "0", "Seed for prompts, generator and optimizer"},
      {"run", "max_generations", T::kInteger, kUnset, "Stop after this many generations"},
      {"run", "wall_clock_s", T::kFloat, "0", "Stop after this many seconds; 0 disables"},
      {"run", "stop_at_score", T::kFloat, kUnset, "Stop once the best score reaches this"},
      {"run", "out_dir", T::kString, "out", "Directory for run outputs"},
      {"run", "workers", T::kInteger, "0", "Evaluation threads; 0 uses cores minus one"},
      {"run", "queue_capacity", T::kInteger, "4", "Batches buffered between stages"},
      {"run", "prompt_lag", T::kInteger, "1",
       "Generations a prompt may lag the database; 0 disables overlap"},
      {"external", "command", T::kString, "", "Command that serves the external env on stdio"},
      {"external", "host", T::kString, "", "Host of a TCP env server"},
      {"external", "port", T::kInteger, "0", "Port of a TCP env server"},
      {"external", "timeout_ms", T::kInteger, "10000", "Per-message timeout"},
  };
  return schema;
}

std::string DescribeSchema() {
  std::string out = "| key | type | default | meaning |\n|---|---|---|---|\n";
  for (const KeySpec& s : ConfigSchema()) {
    out += "| `" + Reader::Name(s.section, s.key) + "` | " + std::string(TypeName(s.type)) +
           " | " + (s.default_value.empty() ? "\"\"" : std::string(s.default_value)) + " | " +
           std::string(s.help) + " |\n";
  }
  return out;
}

orchestrator::RunConfig BuildRunConfig(const TomlDocument& doc, const std::string& base_dir) {
  CheckSchema(doc);
  const Reader r(doc);
  orchestrator::RunConfig config;
  generation::TaskSpec& task = config.task;

  std::string starter_path;
  r.Get("task", "description", task.description);
  r.Get("task", "starter", starter_path);
  r.Get("task", "env", task.env.name);
  task.env.name = envs::CanonicalEnvName(task.env.name);
  r.Get("task", "horizon", task.env.horizon);
  r.Get("task", "episodes", task.episodes);
  r.Get("task", "seed_base", task.seed_base);

  std::string method = "es";
  r.Get("gfo", "method", method);
  task.gfo_method = gfo::ParseMethod(method);
  r.Get("gfo", "budget", task.gfo_budget);

  generation::GeneratorConfig& gen = task.generator;
  r.Get("generator", "kind", gen.kind);
  r.Get("generator", "endpoint", gen.endpoint);
  r.Get("generator", "model", gen.model);
  r.Get("generator", "temperature", gen.temperature);
  r.Get("generator", "max_tokens", gen.max_tokens);
  r.Get("generator", "batch_size", gen.batch_size);
  r.Get("generator", "request_timeout_s", gen.request_timeout_s);
  r.Get("generator", "api_key_env", gen.api_key_env);
  r.Get("generator", "max_attempts", gen.max_attempts);
  r.Get("generator", "mock_latency_s", gen.mock_latency_s);
  if (gen.kind != "mock" && gen.kind != "http") {
    throw ConfigError("generator.kind must be mock or http, not '" + gen.kind + "'");
  }
  if (gen.kind == "http" && gen.endpoint.empty()) {
    throw ConfigError("generator.endpoint is required when generator.kind = \"http\"");
  }
  if (gen.max_attempts < 1) throw ConfigError("generator.max_attempts must be at least 1");

  r.Get("database", "islands", task.database.islands);
  r.Get("database", "reset_period", task.database.reset_period);
  r.Get("database", "temperature", task.database.temperature);

  r.Get("run", "seed", config.seed);
  if (r.Find("run", "max_generations")) {
    int n = 0;
    r.Get("run", "max_generations", n);
    config.max_generations = n;
  }
  r.Get("run", "wall_clock_s", config.wall_clock_s);
  if (r.Find("run", "stop_at_score")) {
    double s = 0.0;
    r.Get("run", "stop_at_score", s);
    config.stop_at_score = s;
  }
  std::string out_dir = "out";
  r.Get("run", "out_dir", out_dir);
  r.Get("run", "workers", config.workers);
  r.Get("run", "queue_capacity", config.queue_capacity);
  r.Get("run", "prompt_lag", config.prompt_lag);

  envs::ExternalConfig& ext = task.env.external;
  r.Get("external", "command", ext.command);
  r.Get("external", "host", ext.host);
  r.Get("external", "port", ext.port);
  r.Get("external", "timeout_ms", ext.timeout_ms);

  const fs::path base(base_dir);
  const fs::path starter = fs::path(starter_path).is_absolute() ? fs::path(starter_path)
                                                                : base / starter_path;
  config.out_dir = fs::path(out_dir).is_absolute() ? out_dir : (base / out_dir).string();
  task.starter_code = ReadFile(starter, "starter policy");
  try {
    orchestrator::Validate(config);
  } catch (const ParseError& e) {
    throw ConfigError("starter policy " + starter.string() + ": " + e.what());
  } catch (const UnsupportedConstruct& e) {
    throw ConfigError("starter policy " + starter.string() + ": " + e.what());
  }
  return config;
}

orchestrator::RunConfig LoadRunConfig(const std::string& path) {
  const fs::path p(path);
  const std::string text = ReadFile(p, "config file");
  const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
  return BuildRunConfig(ParseToml(text), dir.string());
}

}  // namespace policyforge::cli
