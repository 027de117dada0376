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

#include "policyforge/lang/render.h"

#include <cstdio>

#include "policyforge/lang/parameterize.h"

namespace policyforge::lang {
namespace {

// Binding strength, loosest first.
enum Level : int {
  kCond = 0,
  kOr = 1,
  kAnd = 2,
  kNot = 3,
  kCmp = 4,
  kSum = 5,
  kTerm = 6,
  kUnary = 7,
  kPower = 8,
  kPostfix = 9,
};

std::string_view BinaryToken(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd:
      return "+";
    case BinaryOp::kSub:
      return "-";
    case BinaryOp::kMul:
      return "*";
    case BinaryOp::kDiv:
      return "/";
    case BinaryOp::kFloorDiv:
      return "//";
    case BinaryOp::kMod:
      return "%";
    case BinaryOp::kPow:
      return "**";
  }
  return "?";
}

std::string_view CompareToken(CompareOp op) {
  switch (op) {
    case CompareOp::kLt:
      return "<";
    case CompareOp::kLe:
      return "<=";
    case CompareOp::kGt:
      return ">";
    case CompareOp::kGe:
      return ">=";
    case CompareOp::kEq:
      return "==";
    case CompareOp::kNe:
      return "!=";
  }
  return "?";
}

int LevelOf(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kConditional:
      return kCond;
    case ExprKind::kBoolOp:
      return e.bool_op() == BoolOp::kOr ? kOr : kAnd;
    case ExprKind::kUnary:
      return e.unary_op() == UnaryOp::kNot ? kNot : kUnary;
    case ExprKind::kCompare:
      return kCmp;
    case ExprKind::kBinary:
      switch (e.binary_op()) {
        case BinaryOp::kAdd:
        case BinaryOp::kSub:
          return kSum;
        case BinaryOp::kPow:
          return kPower;
        default:
          return kTerm;
      }
    default:
      return kPostfix;
  }
}

void Emit(const Expr& e, int min_level, std::string& out);

void EmitAt(const Expr& e, int min_level, std::string& out) {
  if (LevelOf(e) < min_level) {
    out += '(';
    Emit(e, kCond, out);
    out += ')';
  } else {
    Emit(e, min_level, out);
  }
}

void Emit(const Expr& e, int /*min_level*/, std::string& out) {
  switch (e.kind) {
    case ExprKind::kFloat:
      out += FormatFloat(e.number);
      return;
    case ExprKind::kInt: {
      char buf[400];
      std::snprintf(buf, sizeof(buf), "%.0f", e.number);
      out += buf;
      return;
    }
    case ExprKind::kBool:
      out += e.number != 0.0 ? "True" : "False";
      return;
    case ExprKind::kParamSlot:
      out += "params[" + std::to_string(e.index) + "]";
      return;
    case ExprKind::kName:
    case ExprKind::kConstant:
      out += e.name;
      return;
    case ExprKind::kUnary: {
      const UnaryOp op = e.unary_op();
      if (op == UnaryOp::kNot) {
        out += "not ";
        EmitAt(e.args[0], kNot, out);
      } else {
        out += op == UnaryOp::kNeg ? "-" : "+";
        EmitAt(e.args[0], kUnary, out);
      }
      return;
    }
    case ExprKind::kBinary: {
      const int level = LevelOf(e);
      if (e.binary_op() == BinaryOp::kPow) {
        EmitAt(e.args[0], kPostfix, out);
        out += " ** ";
        EmitAt(e.args[1], kUnary, out);
      } else {
        EmitAt(e.args[0], level, out);
        out += ' ';
        out += BinaryToken(e.binary_op());
        out += ' ';
        EmitAt(e.args[1], level + 1, out);
      }
      return;
    }
    case ExprKind::kCompare:
      EmitAt(e.args[0], kSum, out);
      for (std::size_t i = 0; i < e.compare_ops.size(); ++i) {
        out += ' ';
        out += CompareToken(e.compare_ops[i]);
        out += ' ';
        EmitAt(e.args[i + 1], kSum, out);
      }
      return;
    case ExprKind::kBoolOp: {
      const int level = LevelOf(e);
      EmitAt(e.args[0], level, out);
      out += e.bool_op() == BoolOp::kOr ? " or " : " and ";
      EmitAt(e.args[1], level + 1, out);
      return;
    }
    case ExprKind::kConditional:
      EmitAt(e.args[0], kOr, out);
      out += " if ";
      EmitAt(e.args[1], kOr, out);
      out += " else ";
      EmitAt(e.args[2], kCond, out);
      return;
    case ExprKind::kCall:
      out += e.name;
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i > 0) out += ", ";
        if (!e.keywords[i].empty()) {
          out += e.keywords[i];
          out += '=';
        }
        EmitAt(e.args[i], kCond, out);
      }
      out += ')';
      return;
    case ExprKind::kVector:
      out += '[';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i > 0) out += ", ";
        EmitAt(e.args[i], kCond, out);
      }
      out += ']';
      return;
    case ExprKind::kIndex:
      EmitAt(e.args[0], kPostfix, out);
      out += '[';
      EmitAt(e.args[1], kCond, out);
      out += ']';
      return;
    case ExprKind::kSlice:
      EmitAt(e.args[0], kPostfix, out);
      out += '[';
      for (int i = 1; i <= 3; ++i) {
        if (i == 3 && e.args[3].kind == ExprKind::kAbsent) break;
        if (i > 1) out += ':';
        if (e.args[static_cast<std::size_t>(i)].kind != ExprKind::kAbsent) {
          EmitAt(e.args[static_cast<std::size_t>(i)], kCond, out);
        }
      }
      out += ']';
      return;
    case ExprKind::kAbsent:
      return;
  }
}

bool HasSlots(const Expr& e) {
  if (e.kind == ExprKind::kParamSlot) return true;
  for (const Expr& c : e.args) {
    if (HasSlots(c)) return true;
  }
  return false;
}

bool HasSlots(const std::vector<Stmt>& block) {
  for (const Stmt& s : block) {
    if (HasSlots(s.value) || HasSlots(s.target) || HasSlots(s.body) ||
        HasSlots(s.orelse)) {
      return true;
    }
  }
  return false;
}

std::string QuoteDocstring(const std::string& text) {
  std::string out = "\"\"\"";
  for (char c : text) {
    if (c == '\\' || c == '"') out += '\\';
    out += c;
  }
  out += "\"\"\"";
  return out;
}

class BlockWriter {
 public:
  explicit BlockWriter(std::string& out) : out_(out) {}

  void Block(const std::vector<Stmt>& block, int depth) {
    if (block.empty()) {
      Line(depth, "pass");
      return;
    }
    for (const Stmt& s : block) Statement(s, depth);
  }

  void Line(int depth, std::string_view text) {
    out_.append(static_cast<std::size_t>(depth) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }

 private:
  void Statement(const Stmt& s, int depth) {
    switch (s.kind) {
      case StmtKind::kPass:
        Line(depth, "pass");
        return;
      case StmtKind::kReturn:
        Line(depth, "return " + RenderExpr(s.value));
        return;
      case StmtKind::kAssign:
        Line(depth, RenderExpr(s.target) + " = " + RenderExpr(s.value));
        return;
      case StmtKind::kAugAssign:
        Line(depth, RenderExpr(s.target) + " " +
                        std::string(BinaryToken(s.aug_op)) + "= " +
                        RenderExpr(s.value));
        return;
      case StmtKind::kIf: {
        const Stmt* branch = &s;
        Line(depth, "if " + RenderExpr(branch->value) + ":");
        Block(branch->body, depth + 1);
        while (branch->orelse.size() == 1 &&
               branch->orelse[0].kind == StmtKind::kIf) {
          branch = &branch->orelse[0];
          Line(depth, "elif " + RenderExpr(branch->value) + ":");
          Block(branch->body, depth + 1);
        }
        if (!branch->orelse.empty()) {
          Line(depth, "else:");
          Block(branch->orelse, depth + 1);
        }
        return;
      }
    }
  }

  std::string& out_;
};

}  // namespace

std::string RenderExpr(const Expr& e) {
  std::string out;
  Emit(e, kCond, out);
  return out;
}

std::string Render(const PolicyAst& ast, std::string_view function_name) {
  std::string out = "def ";
  out += function_name.empty() ? std::string_view(ast.name) : function_name;
  out += '(';
  std::vector<std::string> params = ast.params;
  if (HasSlots(ast.body)) params.insert(params.begin(), "params");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i > 0) out += ", ";
    out += params[i];
  }
  out += "):\n";
  BlockWriter writer(out);
  if (ast.docstring) writer.Line(1, QuoteDocstring(*ast.docstring));
  writer.Block(ast.body, 1);
  return out;
}

}  // namespace policyforge::lang
