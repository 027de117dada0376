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

#ifndef POLICYFORGE_CLI_CONFIG_H_
#define POLICYFORGE_CLI_CONFIG_H_

#include <string>
#include <string_view>
#include <vector>

#include "policyforge/cli/toml.h"
#include "policyforge/orchestrator/orchestrator.h"

namespace policyforge::cli {

enum class ValueType { kString, kInteger, kFloat, kBoolean };

// One allowed config key. `default_value` is shown in docs; "(required)"
// and "(unset)" mark keys without a default.
struct KeySpec {
  std::string_view section;
  std::string_view key;
  ValueType type;
  std::string_view default_value;
  std::string_view help;
};

// Every key the config accepts, in documentation order.
const std::vector<KeySpec>& ConfigSchema();

// Markdown table of ConfigSchema.
std::string DescribeSchema();

// Builds a run config from a parsed document. Unknown sections and keys,
// wrong value types and missing required keys throw ConfigError naming the
// key. Relative paths (task.starter, run.out_dir) are resolved against
// `base_dir`. Reads the starter file; throws ConfigError if it is missing,
// does not parse, or uses unsupported constructs.
orchestrator::RunConfig BuildRunConfig(const TomlDocument& doc, const std::string& base_dir);

// ParseToml + BuildRunConfig for a file on disk.
orchestrator::RunConfig LoadRunConfig(const std::string& path);

}  // namespace policyforge::cli

#endif  // POLICYFORGE_CLI_CONFIG_H_
