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

#ifndef POLICYFORGE_LANG_PARSER_H_
#define POLICYFORGE_LANG_PARSER_H_

#include <string_view>

#include "policyforge/lang/ast.h"

namespace policyforge::lang {

inline constexpr int kMaxNestingDepth = 96;
inline constexpr int kMaxExpressionDepth = 200;

// Parses one `def policy(obs): ...` definition. Top-level `import` lines
// before the definition are skipped. Generator arguments of any/all/min/max
// are rewritten to elementwise form, e.g. `any(abs(x) > c for x in v)`
// becomes `any(abs(v) > c)`.
//
// Throws ParseError on syntax errors and UnsupportedConstruct on features
// outside the grammar.
PolicyAst Parse(std::string_view source);

}  // namespace policyforge::lang

#endif  // POLICYFORGE_LANG_PARSER_H_
