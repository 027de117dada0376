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

#ifndef POLICYFORGE_LANG_HASH_H_
#define POLICYFORGE_LANG_HASH_H_

#include <string>

#include "policyforge/lang/ast.h"

namespace policyforge::lang {

// 16 lowercase hex digits identifying the program's structure. Float literal
// sites and parameter slots hash to one token, so programs that differ only in
// their constants (including a constant's sign) collide by design. The
// docstring is ignored. Stable across processes and platforms.
std::string StructuralHash(const PolicyAst& ast);

// Canonical serialization the hash is computed over. Exposed for tests.
std::string CanonicalForm(const PolicyAst& ast);

}  // namespace policyforge::lang

#endif  // POLICYFORGE_LANG_HASH_H_
