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

#include "policyforge/generation/prompt.h"

#include "policyforge/lang/parser.h"

namespace policyforge::generation {
namespace {

std::string TrimTrailing(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.pop_back();
  }
  return s;
}

}  // namespace

std::string RenameFunction(std::string_view source, std::string_view new_name) {
  const lang::PolicyAst ast = lang::Parse(source);
  const std::size_t name_at = ast.name_loc.offset;
  const std::size_t line_start = source.rfind('\n', name_at);
  const std::size_t begin = line_start == std::string_view::npos ? 0 : line_start + 1;
  std::string out(source.substr(begin, name_at - begin));
  out += new_name;
  out += source.substr(name_at + ast.name_loc.length);
  return TrimTrailing(std::move(out)) + "\n";
}

Prompt BuildPrompt(std::string_view description, const database::PromptPair& pair) {
  Prompt prompt;
  prompt.island = pair.island;
  prompt.parent_hashes = {pair.worse.hash, pair.better.hash};
  const std::string param = lang::Parse(pair.better.source).params.at(0);
  std::string& t = prompt.text;
  t += "\"\"\"";
  t += TrimTrailing(std::string(description));
  t += "\n";
  t += kImproveInstruction;
  t += "\n\"\"\"\n";
  t += "import numpy as np\n\n";
  t += RenameFunction(pair.worse.source, "policy_v0");
  t += "\n";
  t += RenameFunction(pair.better.source, "policy_v1");
  t += "\n";
  t += "def policy_v2(" + param + "):\n";
  t += "  \"\"\"";
  t += kImprovedDocstring;
  t += "\"\"\"\n";
  return prompt;
}

}  // namespace policyforge::generation
