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

#ifndef POLICYFORGE_LANG_AST_H_
#define POLICYFORGE_LANG_AST_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace policyforge::lang {

// Position of a node in its source text. `offset`/`length` cover the bytes
// the node was parsed from (used for in-place literal rewriting).
struct SourceLocation {
  int line = 0;
  int column = 0;
  std::size_t offset = 0;
  std::size_t length = 0;
};

enum class ExprKind : std::uint8_t {
  kFloat,
  kInt,
  kBool,
  kParamSlot,
  kName,
  kConstant,  // pi
  kUnary,
  kBinary,
  kCompare,
  kBoolOp,
  kConditional,
  kCall,
  kVector,
  kIndex,
  kSlice,
  kAbsent,  // omitted slice bound
};

enum class UnaryOp : std::uint8_t { kNeg, kPos, kNot };
enum class BinaryOp : std::uint8_t {
  kAdd,
  kSub,
  kMul,
  kDiv,
  kFloorDiv,
  kMod,
  kPow
};
enum class CompareOp : std::uint8_t { kLt, kLe, kGt, kGe, kEq, kNe };
enum class BoolOp : std::uint8_t { kAnd, kOr };

// The closed builtin function set. `pi` is a constant, not a function.
enum class Builtin : std::uint8_t {
  kAbs,
  kMin,
  kMax,
  kSign,
  kSin,
  kCos,
  kTan,
  kAtan2,
  kExp,
  kLog,
  kSqrt,
  kClip,
  kZeros,
  kArray,
  kCopy,
  kAny,
  kAll,
  kNormal,
};

struct BuiltinInfo {
  Builtin id;
  std::string_view name;
  int min_args;
  int max_args;
  // Keyword names by position; empty entries cannot be passed by keyword.
  std::vector<std::string_view> keywords;
};

// Looks up a builtin by spelling (accepts numpy aliases such as `arctan2`).
const BuiltinInfo* FindBuiltin(std::string_view name);
const BuiltinInfo& GetBuiltinInfo(Builtin id);

// Expression node. Children layout by kind:
//   kUnary: [operand]            kBinary, kBoolOp: [lhs, rhs]
//   kCompare: operands (n + 1) with n `compare_ops`
//   kConditional: [body, test, orelse]
//   kCall: arguments (with parallel `keywords`, empty when positional)
//   kVector: elements             kIndex: [base, index]
//   kSlice: [base, start, stop, step] (kAbsent where omitted)
struct Expr {
  ExprKind kind = ExprKind::kAbsent;
  std::uint8_t op = 0;  // UnaryOp / BinaryOp / BoolOp / Builtin by kind
  double number = 0.0;  // kFloat, kInt, kBool
  int index = -1;       // kParamSlot: slot; kName: resolved variable slot
  std::string name;     // kName identifier; kCall canonical builtin name
  std::vector<CompareOp> compare_ops;
  std::vector<std::string> keywords;
  std::vector<Expr> args;
  SourceLocation loc;

  UnaryOp unary_op() const { return static_cast<UnaryOp>(op); }
  BinaryOp binary_op() const { return static_cast<BinaryOp>(op); }
  BoolOp bool_op() const { return static_cast<BoolOp>(op); }
  Builtin builtin() const { return static_cast<Builtin>(op); }

  static Expr Float(double v);
  static Expr Int(double v);
  static Expr Slot(int slot);
  static Expr Name(std::string name, int slot = -1);
  static Expr Unary(UnaryOp op, Expr operand);
  static Expr Binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr Index(Expr base, Expr index);
  static Expr Call(Builtin id, std::vector<Expr> args);
  static Expr Vector(std::vector<Expr> elements);
  static Expr Absent();
};

enum class StmtKind : std::uint8_t { kAssign, kAugAssign, kIf, kReturn, kPass };

// Statement node. `target` is a kName, kIndex or kSlice whose base is a kName.
// For kIf, `value` is the condition; an `elif` chain is an `orelse` holding a
// single kIf.
struct Stmt {
  StmtKind kind = StmtKind::kPass;
  BinaryOp aug_op = BinaryOp::kAdd;
  Expr target;
  Expr value;
  std::vector<Stmt> body;
  std::vector<Stmt> orelse;
  SourceLocation loc;
};

// A parsed `def policy(obs): ...` function. Variable slots are resolved at
// parse time: signature parameters first, then locals in order of first
// assignment.
struct PolicyAst {
  std::string name = "policy";
  std::vector<std::string> params;
  std::optional<std::string> docstring;
  std::vector<Stmt> body;
  std::vector<std::string> variables;
  SourceLocation name_loc;  // the function name in the `def` line
};

// Equality ignoring source locations.
bool StructurallyEqual(const Expr& a, const Expr& b);
bool StructurallyEqual(const Stmt& a, const Stmt& b);
bool StructurallyEqual(const PolicyAst& a, const PolicyAst& b);

// Number of expression and statement nodes.
std::size_t CountNodes(const PolicyAst& ast);

// Liftable literal site: a float literal, or a unary minus directly
// enclosing one.
bool IsLiteralSite(const Expr& e);

}  // namespace policyforge::lang

#endif  // POLICYFORGE_LANG_AST_H_
