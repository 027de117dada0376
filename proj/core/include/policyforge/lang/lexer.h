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

#ifndef POLICYFORGE_LANG_LEXER_H_
#define POLICYFORGE_LANG_LEXER_H_

#include <string>
#include <string_view>
#include <vector>

#include "policyforge/lang/ast.h"

namespace policyforge::lang {

enum class TokenKind {
  kName,
  kFloat,
  kInt,
  kString,
  kOp,
  kNewline,
  kIndent,
  kDedent,
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;       // identifier, operator or raw literal text
  double number = 0.0;    // kFloat / kInt value
  std::string qualifier;  // stripped module prefix, e.g. "np.random"
  SourceLocation loc;
};

// Module prefixes removed from dotted names (`np.sin` lexes as `sin`).
bool IsModuleQualifier(std::string_view head);

// Splits source into tokens with Python-style INDENT/DEDENT handling.
// Comments and blank lines are dropped; newlines inside brackets are joined.
// Throws ParseError.
std::vector<Token> Tokenize(std::string_view source);

}  // namespace policyforge::lang

#endif  // POLICYFORGE_LANG_LEXER_H_
