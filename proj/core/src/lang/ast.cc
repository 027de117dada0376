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

#include "policyforge/lang/ast.h"

#include <array>
#include <cmath>
#include <utility>

namespace policyforge::lang {
namespace {

const std::vector<BuiltinInfo>& BuiltinTable() {
  static const std::vector<BuiltinInfo> kTable = {
      {Builtin::kAbs, "abs", 1, 1, {}},
      {Builtin::kMin, "min", 1, 8, {}},
      {Builtin::kMax, "max", 1, 8, {}},
      {Builtin::kSign, "sign", 1, 1, {}},
      {Builtin::kSin, "sin", 1, 1, {}},
      {Builtin::kCos, "cos", 1, 1, {}},
      {Builtin::kTan, "tan", 1, 1, {}},
      {Builtin::kAtan2, "atan2", 2, 2, {}},
      {Builtin::kExp, "exp", 1, 1, {}},
      {Builtin::kLog, "log", 1, 1, {}},
      {Builtin::kSqrt, "sqrt", 1, 1, {}},
      {Builtin::kClip, "clip", 3, 3, {"a", "a_min", "a_max"}},
      {Builtin::kZeros, "zeros", 1, 1, {"shape"}},
      {Builtin::kArray, "array", 1, 1, {"object"}},
      {Builtin::kCopy, "copy", 1, 1, {}},
      {Builtin::kAny, "any", 1, 1, {}},
      {Builtin::kAll, "all", 1, 1, {}},
      {Builtin::kNormal, "normal", 0, 3, {"loc", "scale", "size"}},
  };
  return kTable;
}

bool EqualExprLists(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!StructurallyEqual(a[i], b[i])) return false;
  }
  return true;
}

bool EqualBlocks(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!StructurallyEqual(a[i], b[i])) return false;
  }
  return true;
}

std::size_t CountExpr(const Expr& e) {
  std::size_t n = 1;
  for (const Expr& c : e.args) n += CountExpr(c);
  return n;
}

std::size_t CountBlock(const std::vector<Stmt>& block) {
  std::size_t n = 0;
  for (const Stmt& s : block) {
    n += 1 + CountExpr(s.target) + CountExpr(s.value) + CountBlock(s.body) +
         CountBlock(s.orelse);
  }
  return n;
}

}  // namespace

const BuiltinInfo* FindBuiltin(std::string_view name) {
  if (name == "arctan2") name = "atan2";
  for (const BuiltinInfo& info : BuiltinTable()) {
    if (info.name == name) return &info;
  }
  return nullptr;
}

const BuiltinInfo& GetBuiltinInfo(Builtin id) {
  return BuiltinTable()[static_cast<std::size_t>(id)];
}

Expr Expr::Float(double v) {
  Expr e;
  e.kind = ExprKind::kFloat;
  e.number = v;
  return e;
}

Expr Expr::Int(double v) {
  Expr e;
  e.kind = ExprKind::kInt;
  e.number = v;
  return e;
}

Expr Expr::Slot(int slot) {
  Expr e;
  e.kind = ExprKind::kParamSlot;
  e.index = slot;
  return e;
}

Expr Expr::Name(std::string name, int slot) {
  Expr e;
  e.kind = ExprKind::kName;
  e.name = std::move(name);
  e.index = slot;
  return e;
}

Expr Expr::Unary(UnaryOp op, Expr operand) {
  Expr e;
  e.kind = ExprKind::kUnary;
  e.op = static_cast<std::uint8_t>(op);
  e.args.push_back(std::move(operand));
  return e;
}

Expr Expr::Binary(BinaryOp op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = ExprKind::kBinary;
  e.op = static_cast<std::uint8_t>(op);
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr Expr::Index(Expr base, Expr index) {
  Expr e;
  e.kind = ExprKind::kIndex;
  e.args.push_back(std::move(base));
  e.args.push_back(std::move(index));
  return e;
}

Expr Expr::Call(Builtin id, std::vector<Expr> args) {
  Expr e;
  e.kind = ExprKind::kCall;
  e.op = static_cast<std::uint8_t>(id);
  e.name = std::string(GetBuiltinInfo(id).name);
  e.keywords.assign(args.size(), std::string());
  e.args = std::move(args);
  return e;
}

Expr Expr::Vector(std::vector<Expr> elements) {
  Expr e;
  e.kind = ExprKind::kVector;
  e.args = std::move(elements);
  return e;
}

Expr Expr::Absent() { return Expr{}; }

bool StructurallyEqual(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.op != b.op) return false;
  switch (a.kind) {
    case ExprKind::kFloat:
    case ExprKind::kInt:
    case ExprKind::kBool:
      // Bitwise semantics for signed zero; literals are never NaN.
      if (a.number != b.number || std::signbit(a.number) != std::signbit(b.number))
        return false;
      break;
    case ExprKind::kParamSlot:
      if (a.index != b.index) return false;
      break;
    case ExprKind::kName:
    case ExprKind::kConstant:
      if (a.name != b.name) return false;
      break;
    default:
      break;
  }
  return a.compare_ops == b.compare_ops && a.keywords == b.keywords &&
         EqualExprLists(a.args, b.args);
}

bool StructurallyEqual(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == StmtKind::kAugAssign && a.aug_op != b.aug_op) return false;
  return StructurallyEqual(a.target, b.target) &&
         StructurallyEqual(a.value, b.value) && EqualBlocks(a.body, b.body) &&
         EqualBlocks(a.orelse, b.orelse);
}

bool StructurallyEqual(const PolicyAst& a, const PolicyAst& b) {
  return a.name == b.name && a.params == b.params &&
         a.docstring == b.docstring && EqualBlocks(a.body, b.body);
}

std::size_t CountNodes(const PolicyAst& ast) { return CountBlock(ast.body); }

bool IsLiteralSite(const Expr& e) {
  if (e.kind == ExprKind::kFloat) return true;
  return e.kind == ExprKind::kUnary && e.unary_op() == UnaryOp::kNeg &&
         e.args.size() == 1 && e.args[0].kind == ExprKind::kFloat;
}

}  // namespace policyforge::lang
