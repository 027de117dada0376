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

#include "policyforge/lang/hash.h"

#include <cstdint>
#include <cstdio>

namespace policyforge::lang {
namespace {

void Serialize(const Expr& e, std::string& out) {
  if (IsLiteralSite(e) || e.kind == ExprKind::kParamSlot) {
    out += "L;";
    return;
  }
  out += 'E';
  out += std::to_string(static_cast<int>(e.kind));
  out += ':';
  out += std::to_string(static_cast<int>(e.op));
  switch (e.kind) {
    case ExprKind::kInt:
    case ExprKind::kBool: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", e.number);
      out += '=';
      out += buf;
      break;
    }
    case ExprKind::kName:
    case ExprKind::kConstant:
    case ExprKind::kCall:
      out += '=';
      out += e.name;
      break;
    default:
      break;
  }
  for (CompareOp op : e.compare_ops) {
    out += 'c';
    out += std::to_string(static_cast<int>(op));
  }
  for (const std::string& k : e.keywords) {
    out += 'k';
    out += k;
    out += ',';
  }
  out += '(';
  for (const Expr& c : e.args) Serialize(c, out);
  out += ");";
}

void Serialize(const std::vector<Stmt>& block, std::string& out) {
  out += '{';
  for (const Stmt& s : block) {
    out += 'S';
    out += std::to_string(static_cast<int>(s.kind));
    if (s.kind == StmtKind::kAugAssign) {
      out += ':';
      out += std::to_string(static_cast<int>(s.aug_op));
    }
    out += '[';
    Serialize(s.target, out);
    Serialize(s.value, out);
    Serialize(s.body, out);
    Serialize(s.orelse, out);
    out += ']';
  }
  out += '}';
}

}  // namespace

std::string CanonicalForm(const PolicyAst& ast) {
  std::string out = "policyforge-ast-v1|";
  for (const std::string& p : ast.params) {
    out += p;
    out += ',';
  }
  out += '|';
  Serialize(ast.body, out);
  return out;
}

std::string StructuralHash(const PolicyAst& ast) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : CanonicalForm(ast)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace policyforge::lang
