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

#ifndef POLICYFORGE_LANG_PARAMETERIZE_H_
#define POLICYFORGE_LANG_PARAMETERIZE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "policyforge/common/rng.h"
#include "policyforge/lang/ast.h"
#include "policyforge/lang/interpreter.h"

namespace policyforge::lang {

// Where a lifted literal came from in the source text. `folded` is set when a
// unary minus was absorbed into the value.
struct LiteralSpan {
  std::size_t offset = 0;
  std::size_t length = 0;
  bool folded = false;
};

// A program whose float literals in value position have been replaced by
// parameter slots 0..n-1 in source order.
struct ParamTemplate {
  PolicyAst ast;
  std::vector<double> theta0;
  std::vector<LiteralSpan> spans;

  std::size_t n_params() const { return theta0.size(); }
};

// Lifts float literals into slots. Integer literals, anything inside a
// subscript, and the arguments of `normal` are left in place.
ParamTemplate ExtractParameters(const PolicyAst& ast);

// Replaces every slot with a literal holding theta[i]. Negative values become
// a unary minus over a positive literal, so Substitute(t, t.theta0)
// reproduces the parsed program. Throws DimensionMismatch.
PolicyAst Substitute(const ParamTemplate& tmpl, std::span<const double> theta);

// Evaluates the template at theta. Throws DimensionMismatch or PolicyFault.
std::vector<double> EvaluatePolicy(const ParamTemplate& tmpl,
                                   std::span<const double> theta,
                                   std::span<const double> obs, Rng& rng,
                                   EvalOptions options = {});

// Rewrites the literals of `source` in place, keeping comments and layout.
// `tmpl` must have been extracted from Parse(source).
std::string RewriteSource(std::string_view source, const ParamTemplate& tmpl,
                          std::span<const double> theta);

// Shortest round-trip decimal spelling that the lexer reads as a float.
std::string FormatFloat(double v);

}  // namespace policyforge::lang

#endif  // POLICYFORGE_LANG_PARAMETERIZE_H_
