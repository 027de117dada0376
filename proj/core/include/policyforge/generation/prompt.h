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

#ifndef POLICYFORGE_GENERATION_PROMPT_H_
#define POLICYFORGE_GENERATION_PROMPT_H_

#include <string>
#include <string_view>
#include <vector>

#include "policyforge/database/database.h"

namespace policyforge::generation {

inline constexpr std::string_view kImproveInstruction =
    "On every iteration, improve policy_v1 over the policy_vX methods from "
    "previous iterations.";
inline constexpr std::string_view kImprovedDocstring = "Improved version of policy_v1.";

struct Prompt {
  std::string text;
  int island = 0;
  std::vector<std::string> parent_hashes;  // worse, better
};

// Best-shot prompt: the task description and instruction as a module
// docstring, an import line, the worse program as policy_v0, the better one
// as policy_v1, and an open policy_v2 header. Pure function of its inputs.
Prompt BuildPrompt(std::string_view description, const database::PromptPair& pair);

// Source text of `source` from its `def` line on, with the function renamed.
// Throws ParseError if the source does not parse.
std::string RenameFunction(std::string_view source, std::string_view new_name);

}  // namespace policyforge::generation

#endif  // POLICYFORGE_GENERATION_PROMPT_H_
