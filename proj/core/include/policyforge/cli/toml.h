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

#ifndef POLICYFORGE_CLI_TOML_H_
#define POLICYFORGE_CLI_TOML_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>

namespace policyforge::cli {

// The subset of TOML the config files use: `[section]` headers and
// `key = value` lines with strings, integers, floats and booleans. Arrays,
// inline tables, dotted keys and multi-line strings are rejected.
struct TomlValue {
  std::variant<std::string, std::int64_t, double, bool> value;
  int line = 0;
};

using TomlTable = std::map<std::string, TomlValue>;

struct TomlDocument {
  // Keys before the first header live in section "".
  std::map<std::string, TomlTable> sections;
};

// Throws ConfigError with the line number.
TomlDocument ParseToml(std::string_view text);

}  // namespace policyforge::cli

#endif  // POLICYFORGE_CLI_TOML_H_
