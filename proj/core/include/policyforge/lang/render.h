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

#ifndef POLICYFORGE_LANG_RENDER_H_
#define POLICYFORGE_LANG_RENDER_H_

#include <string>
#include <string_view>

#include "policyforge/lang/ast.h"

namespace policyforge::lang {

// Pretty-prints a program with two-space indentation and minimal
// parentheses. Slots render as `params[i]` and add a leading `params`
// parameter to the signature. For slot-free programs,
// Parse(Render(a)) is structurally equal to `a`.
std::string Render(const PolicyAst& ast, std::string_view function_name = {});

std::string RenderExpr(const Expr& e);

}  // namespace policyforge::lang

#endif  // POLICYFORGE_LANG_RENDER_H_
