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

#ifndef POLICYFORGE_GENERATION_EXTRACT_H_
#define POLICYFORGE_GENERATION_EXTRACT_H_

#include <optional>
#include <string>
#include <string_view>

#include "policyforge/lang/ast.h"

namespace policyforge::generation {

// Outcome of pulling a policy out of raw generator text. Exactly one of
// `ast` (with `source`) or `rejection` is set.
struct Extraction {
  std::string source;
  std::optional<lang::PolicyAst> ast;
  std::string rejection;

  bool ok() const { return ast.has_value(); }
};

// Strips markdown fences, finds the first `def policy_v2(` (falling back to
// `def policy(`), cuts the function at the first line that dedents out of
// it, dedents it, renames it to `policy`, and parses it. Never throws.
Extraction ExtractFunction(std::string_view raw);

// The text of the first function named exactly `name`, dedented and renamed
// to `policy`, without parsing it.
std::optional<std::string> FindFunction(std::string_view text, std::string_view name);

}  // namespace policyforge::generation

#endif  // POLICYFORGE_GENERATION_EXTRACT_H_
