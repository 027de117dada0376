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

#include "policyforge/lang/parser.h"

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "policyforge/common/errors.h"
#include "policyforge/lang/lexer.h"

namespace policyforge::lang {
namespace {

constexpr std::array<std::string_view, 35> kReserved = {
    "False", "None",   "True",    "and",      "as",     "assert", "async",
    "await", "break",  "class",   "continue", "def",    "del",    "elif",
    "else",  "except", "finally", "for",      "from",   "global", "if",
    "import", "in",    "is",      "lambda",   "nonlocal", "not",  "or",
    "pass",  "raise",  "return",  "try",      "while",  "with",   "yield"};

bool IsReserved(std::string_view name) {
  return std::find(kReserved.begin(), kReserved.end(), name) != kReserved.end();
}

std::string QualifiedName(const Token& t) {
  return t.qualifier.empty() ? t.text : t.qualifier + "." + t.text;
}

class Parser {
 public:
  Parser(std::string_view source, std::vector<Token> tokens)
      : source_(source), tokens_(std::move(tokens)) {}

  PolicyAst ParseFile() {
    SkipNewlines();
    while (AtName("import") || AtName("from")) {
      while (!At(TokenKind::kNewline) && !At(TokenKind::kEnd)) Advance();
      SkipNewlines();
    }
    if (!AtName("def")) {
      if (At(TokenKind::kName) && IsUnsupportedStatementKeyword(Peek().text)) {
        throw UnsupportedConstruct(Peek().text, Peek().loc.line,
                                   Peek().loc.column);
      }
      FailHere("expected a function definition 'def policy(...)'");
    }
    PolicyAst ast = ParseFunction();
    SkipNewlines();
    if (!At(TokenKind::kEnd)) {
      if (AtName("def")) {
        throw UnsupportedConstruct("multiple function definitions",
                                   Peek().loc.line, Peek().loc.column);
      }
      FailHere("unexpected content after the function definition");
    }
    return ast;
  }

 private:
  // --- token helpers -------------------------------------------------------

  const Token& Peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  bool At(TokenKind kind) const { return Peek().kind == kind; }
  bool AtOp(std::string_view op, std::size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == TokenKind::kOp && t.text == op;
  }
  bool AtName(std::string_view name) const {
    return Peek().kind == TokenKind::kName && Peek().text == name &&
           Peek().qualifier.empty();
  }

  const Token& Advance() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    if (t.kind != TokenKind::kNewline && t.kind != TokenKind::kIndent &&
        t.kind != TokenKind::kDedent && t.kind != TokenKind::kEnd) {
      last_end_ = t.loc.offset + t.loc.length;
    }
    return t;
  }

  void SkipNewlines() {
    while (At(TokenKind::kNewline)) Advance();
  }

  [[noreturn]] void FailAt(const Token& t, const std::string& message) const {
    throw ParseError(t.loc.line, t.loc.column, message);
  }
  [[noreturn]] void FailHere(const std::string& message) const {
    FailAt(Peek(), message);
  }
  [[noreturn]] void Unsupported(const std::string& construct,
                                const Token& at) const {
    throw UnsupportedConstruct(construct, at.loc.line, at.loc.column);
  }

  std::string Describe(const Token& t) const {
    switch (t.kind) {
      case TokenKind::kNewline:
        return "end of line";
      case TokenKind::kIndent:
        return "indent";
      case TokenKind::kDedent:
        return "dedent";
      case TokenKind::kEnd:
        return "end of input";
      default:
        return "'" + t.text + "'";
    }
  }

  void ExpectOp(std::string_view op) {
    if (!AtOp(op)) {
      FailHere("expected '" + std::string(op) + "', found " + Describe(Peek()));
    }
    Advance();
  }

  SourceLocation SpanFrom(const SourceLocation& start) const {
    SourceLocation loc = start;
    loc.length = last_end_ > start.offset ? last_end_ - start.offset : 0;
    return loc;
  }

  static bool IsUnsupportedStatementKeyword(std::string_view kw) {
    static constexpr std::array<std::string_view, 18> kKeywords = {
        "while",  "for",    "with",     "try",   "class",  "async",
        "import", "from",   "global",   "nonlocal", "del", "assert",
        "raise",  "yield",  "break",    "continue", "lambda", "await"};
    return std::find(kKeywords.begin(), kKeywords.end(), kw) != kKeywords.end();
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxNestingDepth) {
        parser.FailHere("nesting too deep");
      }
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  // --- function and statements ---------------------------------------------

  PolicyAst ParseFunction() {
    Advance();  // def
    PolicyAst ast;
    if (!At(TokenKind::kName) || IsReserved(Peek().text) ||
        !Peek().qualifier.empty()) {
      FailHere("expected function name");
    }
    ast.name = Peek().text;
    ast.name_loc = Peek().loc;
    Advance();
    ExpectOp("(");
    while (!AtOp(")")) {
      if (AtOp("*") || AtOp("**")) Unsupported("variadic parameters", Peek());
      if (!At(TokenKind::kName) || IsReserved(Peek().text) ||
          !Peek().qualifier.empty()) {
        FailHere("expected parameter name, found " + Describe(Peek()));
      }
      ast.params.push_back(Advance().text);
      if (AtOp(":")) SkipAnnotation();
      if (AtOp("=")) Unsupported("default parameter value", Peek());
      if (AtOp(",")) {
        Advance();
        continue;
      }
      if (!AtOp(")")) FailHere("expected ',' or ')' in parameter list");
    }
    Advance();  // )
    if (AtOp("->")) {
      Advance();
      int depth = 0;
      while (!(depth == 0 && AtOp(":")) && !At(TokenKind::kNewline) &&
             !At(TokenKind::kEnd)) {
        if (AtOp("(") || AtOp("[")) ++depth;
        if (AtOp(")") || AtOp("]")) --depth;
        Advance();
      }
    }
    if (ast.params.size() != 1) {
      throw UnsupportedConstruct(
          "signature with " + std::to_string(ast.params.size()) +
              " parameters (expected exactly one observation parameter)",
          ast.name_loc.line, ast.name_loc.column);
    }
    ExpectOp(":");
    ast.body = ParseSuite(&ast.docstring);
    return ast;
  }

  void SkipAnnotation() {
    Advance();  // :
    int depth = 0;
    while (!At(TokenKind::kEnd)) {
      if (depth == 0 && (AtOp(",") || AtOp(")") || AtOp("="))) break;
      if (AtOp("(") || AtOp("[")) ++depth;
      if (AtOp(")") || AtOp("]")) --depth;
      Advance();
    }
  }

  // Parses the block after a ':'. Bare string statements are dropped; when
  // `docstring` is non-null it receives a leading string.
  std::vector<Stmt> ParseSuite(std::optional<std::string>* docstring) {
    DepthGuard guard(*this);
    std::vector<Stmt> block;
    bool first = true;
    if (At(TokenKind::kNewline)) {
      Advance();
      if (!At(TokenKind::kIndent)) FailHere("expected an indented block");
      Advance();
      while (!At(TokenKind::kDedent) && !At(TokenKind::kEnd)) {
        ParseStatement(block, first ? docstring : nullptr);
        first = false;
      }
      if (At(TokenKind::kDedent)) Advance();
    } else {
      ParseSimpleStatements(block, docstring);
    }
    if (block.empty()) {
      Stmt pass;
      pass.kind = StmtKind::kPass;
      block.push_back(std::move(pass));
    }
    return block;
  }

  void ParseStatement(std::vector<Stmt>& block,
                      std::optional<std::string>* docstring) {
    if (AtName("if")) {
      block.push_back(ParseIf());
      return;
    }
    if (AtName("elif") || AtName("else")) {
      FailHere("'" + Peek().text + "' without matching 'if'");
    }
    if (AtName("def")) Unsupported("nested function definition", Peek());
    if (At(TokenKind::kIndent)) FailHere("unexpected indent");
    ParseSimpleStatements(block, docstring);
  }

  void ParseSimpleStatements(std::vector<Stmt>& block,
                             std::optional<std::string>* docstring) {
    while (true) {
      if (std::optional<Stmt> s = ParseSmallStatement(docstring)) {
        block.push_back(std::move(*s));
      }
      docstring = nullptr;
      if (AtOp(";")) {
        Advance();
        if (At(TokenKind::kNewline) || At(TokenKind::kEnd)) break;
        continue;
      }
      break;
    }
    if (At(TokenKind::kEnd)) return;
    if (!At(TokenKind::kNewline)) {
      FailHere("expected end of statement, found " + Describe(Peek()));
    }
    Advance();
  }

  std::optional<Stmt> ParseSmallStatement(
      std::optional<std::string>* docstring) {
    const Token& start = Peek();
    Stmt stmt;
    stmt.loc = start.loc;
    if (start.kind == TokenKind::kString &&
        (AtOp(";", 1) || Peek(1).kind == TokenKind::kNewline ||
         Peek(1).kind == TokenKind::kEnd)) {
      if (docstring != nullptr) *docstring = start.text;
      Advance();
      return std::nullopt;
    }
    if (start.kind == TokenKind::kName && start.qualifier.empty()) {
      if (start.text == "pass") {
        Advance();
        stmt.kind = StmtKind::kPass;
        return stmt;
      }
      if (start.text == "return") {
        Advance();
        if (At(TokenKind::kNewline) || At(TokenKind::kEnd) || AtOp(";")) {
          Unsupported("return without a value", start);
        }
        stmt.kind = StmtKind::kReturn;
        stmt.value = ParseTestList();
        stmt.loc = SpanFrom(start.loc);
        return stmt;
      }
      if (IsUnsupportedStatementKeyword(start.text)) {
        Unsupported(start.text, start);
      }
    }
    Expr lhs = ParseTestList();
    if (AtOp("=")) {
      Advance();
      ValidateTarget(lhs, start);
      stmt.kind = StmtKind::kAssign;
      stmt.target = std::move(lhs);
      stmt.value = ParseTestList();
      if (AtOp("=")) Unsupported("chained assignment", Peek());
      stmt.loc = SpanFrom(start.loc);
      return stmt;
    }
    if (std::optional<BinaryOp> aug = AugmentedOp()) {
      Advance();
      ValidateTarget(lhs, start);
      stmt.kind = StmtKind::kAugAssign;
      stmt.aug_op = *aug;
      stmt.target = std::move(lhs);
      stmt.value = ParseTestList();
      stmt.loc = SpanFrom(start.loc);
      return stmt;
    }
    if (At(TokenKind::kOp)) {
      const std::string& op = Peek().text;
      if (op == ":") Unsupported("annotated assignment", Peek());
      if (op.size() >= 2 && op.back() == '=' && op != "==" && op != "!=" &&
          op != "<=" && op != ">=") {
        Unsupported("augmented assignment '" + op + "'", Peek());
      }
    }
    if (At(TokenKind::kNewline) || At(TokenKind::kEnd) || AtOp(";")) {
      Unsupported("expression statement", start);
    }
    FailHere("unexpected " + Describe(Peek()));
  }

  std::optional<BinaryOp> AugmentedOp() const {
    if (!At(TokenKind::kOp)) return std::nullopt;
    const std::string& op = Peek().text;
    if (op == "+=") return BinaryOp::kAdd;
    if (op == "-=") return BinaryOp::kSub;
    if (op == "*=") return BinaryOp::kMul;
    if (op == "/=") return BinaryOp::kDiv;
    if (op == "//=") return BinaryOp::kFloorDiv;
    if (op == "%=") return BinaryOp::kMod;
    if (op == "**=") return BinaryOp::kPow;
    return std::nullopt;
  }

  void ValidateTarget(const Expr& target, const Token& at) const {
    switch (target.kind) {
      case ExprKind::kName:
        return;
      case ExprKind::kIndex:
      case ExprKind::kSlice:
        if (target.args[0].kind == ExprKind::kName) return;
        Unsupported("assignment to a nested subscript", at);
      case ExprKind::kVector:
        Unsupported("tuple unpacking", at);
      case ExprKind::kConstant:
        FailAt(at, "cannot assign to builtin 'pi'");
      default:
        FailAt(at, "invalid assignment target");
    }
  }

  Stmt ParseIf() {
    const Token& start = Advance();  // if / elif
    Stmt stmt;
    stmt.kind = StmtKind::kIf;
    stmt.loc = start.loc;
    stmt.value = ParseExpression();
    ExpectOp(":");
    stmt.body = ParseSuite(nullptr);
    if (AtName("elif")) {
      stmt.orelse.push_back(ParseIf());
    } else if (AtName("else")) {
      Advance();
      ExpectOp(":");
      stmt.orelse = ParseSuite(nullptr);
    }
    return stmt;
  }

  // --- expressions -----------------------------------------------------------

  // expression (',' expression)* [','] -- a bare tuple becomes a vector.
  Expr ParseTestList() {
    const SourceLocation start = Peek().loc;
    Expr first = ParseExpression();
    if (!AtOp(",")) return first;
    std::vector<Expr> elements;
    elements.push_back(std::move(first));
    while (AtOp(",")) {
      Advance();
      if (AtOp("=") || At(TokenKind::kNewline) || At(TokenKind::kEnd) ||
          AtOp(";") || AugmentedOp()) {
        break;
      }
      elements.push_back(ParseExpression());
    }
    Expr v = Expr::Vector(std::move(elements));
    v.loc = SpanFrom(start);
    return v;
  }

  Expr ParseExpression() {
    DepthGuard guard(*this);
    const SourceLocation start = Peek().loc;
    if (AtName("lambda")) Unsupported("lambda", Peek());
    Expr body = ParseOr();
    if (!AtName("if")) return body;
    Advance();
    Expr test = ParseOr();
    if (!AtName("else")) FailHere("expected 'else' in conditional expression");
    Advance();
    Expr orelse = ParseExpression();
    Expr e;
    e.kind = ExprKind::kConditional;
    e.args.push_back(std::move(body));
    e.args.push_back(std::move(test));
    e.args.push_back(std::move(orelse));
    e.loc = SpanFrom(start);
    return e;
  }

  Expr ParseOr() {
    const SourceLocation start = Peek().loc;
    Expr lhs = ParseAnd();
    while (AtName("or")) {
      Advance();
      Expr rhs = ParseAnd();
      lhs = MakeBoolOp(BoolOp::kOr, std::move(lhs), std::move(rhs), start);
    }
    return lhs;
  }

  Expr ParseAnd() {
    const SourceLocation start = Peek().loc;
    Expr lhs = ParseNot();
    while (AtName("and")) {
      Advance();
      Expr rhs = ParseNot();
      lhs = MakeBoolOp(BoolOp::kAnd, std::move(lhs), std::move(rhs), start);
    }
    return lhs;
  }

  Expr MakeBoolOp(BoolOp op, Expr lhs, Expr rhs, const SourceLocation& start) {
    Expr e;
    e.kind = ExprKind::kBoolOp;
    e.op = static_cast<std::uint8_t>(op);
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    e.loc = SpanFrom(start);
    return e;
  }

  Expr ParseNot() {
    if (!AtName("not")) return ParseComparison();
    DepthGuard guard(*this);
    const SourceLocation start = Advance().loc;
    Expr operand = ParseNot();
    Expr e = Expr::Unary(UnaryOp::kNot, std::move(operand));
    e.loc = SpanFrom(start);
    return e;
  }

  std::optional<CompareOp> ComparisonOp() const {
    if (At(TokenKind::kName) && Peek().qualifier.empty()) {
      const std::string& t = Peek().text;
      if (t == "in" || t == "is") Unsupported("'" + t + "' operator", Peek());
      if (t == "not" && Peek(1).kind == TokenKind::kName &&
          Peek(1).text == "in") {
        Unsupported("'not in' operator", Peek());
      }
      return std::nullopt;
    }
    if (!At(TokenKind::kOp)) return std::nullopt;
    const std::string& op = Peek().text;
    if (op == "<") return CompareOp::kLt;
    if (op == "<=") return CompareOp::kLe;
    if (op == ">") return CompareOp::kGt;
    if (op == ">=") return CompareOp::kGe;
    if (op == "==") return CompareOp::kEq;
    if (op == "!=") return CompareOp::kNe;
    return std::nullopt;
  }

  Expr ParseComparison() {
    const SourceLocation start = Peek().loc;
    Expr first = ParseBitwiseGuard();
    std::optional<CompareOp> op = ComparisonOp();
    if (!op) return first;
    Expr e;
    e.kind = ExprKind::kCompare;
    e.args.push_back(std::move(first));
    while (op) {
      Advance();
      e.compare_ops.push_back(*op);
      e.args.push_back(ParseBitwiseGuard());
      op = ComparisonOp();
    }
    e.loc = SpanFrom(start);
    return e;
  }

  Expr ParseBitwiseGuard() {
    Expr e = ParseArith();
    if (AtOp("&") || AtOp("|") || AtOp("^") || AtOp("<<") || AtOp(">>")) {
      Unsupported("bitwise operator '" + Peek().text + "'", Peek());
    }
    return e;
  }

  Expr ParseArith() {
    const SourceLocation start = Peek().loc;
    Expr lhs = ParseTerm();
    while (AtOp("+") || AtOp("-")) {
      const BinaryOp op = Advance().text == "+" ? BinaryOp::kAdd : BinaryOp::kSub;
      Expr rhs = ParseTerm();
      lhs = Expr::Binary(op, std::move(lhs), std::move(rhs));
      lhs.loc = SpanFrom(start);
    }
    return lhs;
  }

  Expr ParseTerm() {
    const SourceLocation start = Peek().loc;
    Expr lhs = ParseFactor();
    while (true) {
      BinaryOp op;
      if (AtOp("*")) {
        op = BinaryOp::kMul;
      } else if (AtOp("/")) {
        op = BinaryOp::kDiv;
      } else if (AtOp("//")) {
        op = BinaryOp::kFloorDiv;
      } else if (AtOp("%")) {
        op = BinaryOp::kMod;
      } else if (AtOp("@")) {
        Unsupported("matrix multiplication", Peek());
      } else {
        break;
      }
      Advance();
      Expr rhs = ParseFactor();
      lhs = Expr::Binary(op, std::move(lhs), std::move(rhs));
      lhs.loc = SpanFrom(start);
    }
    return lhs;
  }

  Expr ParseFactor() {
    if (AtOp("~")) Unsupported("bitwise operator '~'", Peek());
    if (!AtOp("-") && !AtOp("+")) return ParsePower();
    DepthGuard guard(*this);
    const Token& op_token = Advance();
    const UnaryOp op = op_token.text == "-" ? UnaryOp::kNeg : UnaryOp::kPos;
    Expr operand = ParseFactor();
    Expr e = Expr::Unary(op, std::move(operand));
    e.loc = SpanFrom(op_token.loc);
    return e;
  }

  Expr ParsePower() {
    const SourceLocation start = Peek().loc;
    Expr base = ParsePostfix();
    if (!AtOp("**")) return base;
    Advance();
    Expr exponent = ParseFactor();
    Expr e = Expr::Binary(BinaryOp::kPow, std::move(base), std::move(exponent));
    e.loc = SpanFrom(start);
    return e;
  }

  Expr ParsePostfix() {
    const SourceLocation start = Peek().loc;
    Expr e = ParseAtom();
    while (true) {
      if (AtOp("[")) {
        e = ParseSubscript(std::move(e), start);
      } else if (AtOp("(")) {
        Unsupported("call of a non-builtin expression", Peek());
      } else if (AtOp(".")) {
        const Token& dot = Advance();
        if (!At(TokenKind::kName)) FailHere("expected attribute name after '.'");
        const Token& attr = Advance();
        if (attr.text == "copy" && AtOp("(") && AtOp(")", 1)) {
          Advance();
          Advance();
          std::vector<Expr> args;
          args.push_back(std::move(e));
          e = Expr::Call(Builtin::kCopy, std::move(args));
          e.loc = SpanFrom(start);
          continue;
        }
        if (AtOp("(")) Unsupported("attribute call '." + attr.text + "()'", dot);
        Unsupported("attribute '." + attr.text + "'", dot);
      } else {
        return e;
      }
    }
  }

  Expr ParseSubscript(Expr base, const SourceLocation& start) {
    Advance();  // [
    if (AtOp("...")) Unsupported("ellipsis", Peek());
    std::array<Expr, 3> parts{Expr::Absent(), Expr::Absent(), Expr::Absent()};
    bool is_slice = false;
    if (!AtOp(":")) parts[0] = ParseExpression();
    if (AtOp(":")) {
      is_slice = true;
      Advance();
      if (!AtOp(":") && !AtOp("]")) parts[1] = ParseExpression();
      if (AtOp(":")) {
        Advance();
        if (!AtOp("]")) parts[2] = ParseExpression();
      }
    }
    if (AtOp(",")) Unsupported("multi-dimensional indexing", Peek());
    ExpectOp("]");
    Expr e;
    e.args.push_back(std::move(base));
    if (is_slice) {
      e.kind = ExprKind::kSlice;
      for (Expr& p : parts) e.args.push_back(std::move(p));
    } else {
      e.kind = ExprKind::kIndex;
      e.args.push_back(std::move(parts[0]));
    }
    e.loc = SpanFrom(start);
    return e;
  }

  Expr ParseAtom() {
    const Token& t = Peek();
    switch (t.kind) {
      case TokenKind::kFloat:
      case TokenKind::kInt: {
        Advance();
        Expr e = t.kind == TokenKind::kFloat ? Expr::Float(t.number)
                                             : Expr::Int(t.number);
        e.loc = t.loc;
        return e;
      }
      case TokenKind::kString:
        Unsupported("string value", t);
      case TokenKind::kName:
        return ParseNameAtom();
      case TokenKind::kOp:
        break;
      default:
        FailAt(t, "unexpected " + Describe(t));
    }
    if (t.text == "(") return ParseParenthesized();
    if (t.text == "[") return ParseList();
    if (t.text == "{") Unsupported("dict or set display", t);
    FailAt(t, "unexpected " + Describe(t));
  }

  Expr ParseNameAtom() {
    const Token& t = Advance();
    if (t.qualifier.empty()) {
      if (t.text == "True" || t.text == "False") {
        Expr e;
        e.kind = ExprKind::kBool;
        e.number = t.text == "True" ? 1.0 : 0.0;
        e.loc = t.loc;
        return e;
      }
      if (t.text == "None") Unsupported("None", t);
      if (IsUnsupportedStatementKeyword(t.text)) Unsupported(t.text, t);
      if (IsReserved(t.text)) FailAt(t, "unexpected keyword '" + t.text + "'");
    }
    if (t.text == "pi" && !AtOp("(")) {
      Expr e;
      e.kind = ExprKind::kConstant;
      e.name = "pi";
      e.loc = t.loc;
      return e;
    }
    const BuiltinInfo* builtin = FindBuiltin(t.text);
    if (AtOp("(")) {
      if (builtin == nullptr) Unsupported("call to '" + QualifiedName(t) + "'", t);
      return ParseCall(*builtin, t);
    }
    if (!t.qualifier.empty()) Unsupported("attribute '" + QualifiedName(t) + "'", t);
    Expr e = Expr::Name(t.text);
    e.loc = t.loc;
    return e;
  }

  Expr ParseParenthesized() {
    const Token& open = Advance();
    if (AtOp(")")) {
      Advance();
      Expr v = Expr::Vector({});
      v.loc = SpanFrom(open.loc);
      return v;
    }
    DepthGuard guard(*this);
    Expr first = ParseExpression();
    if (AtName("for")) Unsupported("generator expression", Peek());
    if (AtOp(")")) {
      Advance();
      return first;
    }
    std::vector<Expr> elements;
    elements.push_back(std::move(first));
    while (AtOp(",")) {
      Advance();
      if (AtOp(")")) break;
      elements.push_back(ParseExpression());
    }
    ExpectOp(")");
    Expr v = Expr::Vector(std::move(elements));
    v.loc = SpanFrom(open.loc);
    return v;
  }

  Expr ParseList() {
    const Token& open = Advance();
    DepthGuard guard(*this);
    std::vector<Expr> elements;
    while (!AtOp("]")) {
      elements.push_back(ParseExpression());
      if (AtName("for")) Unsupported("list comprehension", Peek());
      if (AtOp(",")) {
        Advance();
        continue;
      }
      if (!AtOp("]")) FailHere("expected ',' or ']' in list, found " + Describe(Peek()));
    }
    Advance();
    Expr v = Expr::Vector(std::move(elements));
    v.loc = SpanFrom(open.loc);
    return v;
  }

  Expr ParseCall(const BuiltinInfo& info, const Token& name_token) {
    Advance();  // (
    DepthGuard guard(*this);
    std::vector<Expr> args;
    std::vector<std::string> keywords;
    while (!AtOp(")")) {
      if (AtOp("*") || AtOp("**")) Unsupported("argument unpacking", Peek());
      std::string keyword;
      if (At(TokenKind::kName) && Peek().qualifier.empty() && AtOp("=", 1)) {
        keyword = Advance().text;
        Advance();
      } else if (!keywords.empty() && !keywords.back().empty()) {
        FailHere("positional argument follows keyword argument");
      }
      Expr arg = ParseExpression();
      if (AtName("for")) {
        if (!args.empty() || !keyword.empty()) {
          Unsupported("generator expression", Peek());
        }
        arg = ParseGenerator(std::move(arg), info);
        if (!AtOp(")")) Unsupported("generator expression", Peek());
      }
      args.push_back(std::move(arg));
      keywords.push_back(std::move(keyword));
      if (AtOp(",")) {
        Advance();
        continue;
      }
      if (!AtOp(")")) FailHere("expected ',' or ')' in call, found " + Describe(Peek()));
    }
    Advance();  // )
    ValidateArguments(info, keywords, name_token);
    Expr e = Expr::Call(info.id, std::move(args));
    e.keywords = std::move(keywords);
    e.loc = SpanFrom(name_token.loc);
    return e;
  }

  void ValidateArguments(const BuiltinInfo& info,
                         const std::vector<std::string>& keywords,
                         const Token& at) const {
    std::vector<bool> bound(std::max<std::size_t>(info.max_args, keywords.size()),
                            false);
    std::size_t positional = 0;
    for (const std::string& kw : keywords) {
      if (kw.empty()) {
        if (positional >= static_cast<std::size_t>(info.max_args)) {
          FailAt(at, "too many arguments to '" + std::string(info.name) + "'");
        }
        bound[positional++] = true;
        continue;
      }
      auto it = std::find(info.keywords.begin(), info.keywords.end(), kw);
      if (it == info.keywords.end()) {
        Unsupported("keyword argument '" + kw + "' to '" +
                        std::string(info.name) + "'",
                    at);
      }
      const std::size_t slot = static_cast<std::size_t>(it - info.keywords.begin());
      if (bound[slot]) {
        FailAt(at, "duplicate argument '" + kw + "' to '" +
                       std::string(info.name) + "'");
      }
      bound[slot] = true;
    }
    if (keywords.size() < static_cast<std::size_t>(info.min_args)) {
      FailAt(at, "too few arguments to '" + std::string(info.name) + "'");
    }
    // Keyword-only calls must still cover the required leading parameters.
    for (int i = 0; i < info.min_args; ++i) {
      if (!bound[static_cast<std::size_t>(i)]) {
        FailAt(at, "missing argument to '" + std::string(info.name) + "'");
      }
    }
  }

  // `element for name in iterable` inside any/all/min/max: substitutes the
  // iterable for the loop variable so the element expression runs
  // elementwise.
  Expr ParseGenerator(Expr element, const BuiltinInfo& info) {
    const Token& for_token = Advance();
    if (info.id != Builtin::kAny && info.id != Builtin::kAll &&
        info.id != Builtin::kMin && info.id != Builtin::kMax) {
      Unsupported("generator expression", for_token);
    }
    if (!At(TokenKind::kName) || IsReserved(Peek().text) ||
        !Peek().qualifier.empty()) {
      Unsupported("generator with a non-name target", Peek());
    }
    const std::string var = Advance().text;
    if (!AtName("in")) FailHere("expected 'in' in generator expression");
    Advance();
    Expr iterable = ParseOr();
    if (AtName("if")) Unsupported("generator filter", Peek());
    if (AtName("for")) Unsupported("nested generator", Peek());
    int uses = 0;
    CountUses(element, var, uses, for_token);
    if (uses > 1 && ContainsLiteral(iterable)) {
      Unsupported("generator over an iterable with literal values", for_token);
    }
    ReplaceName(element, var, iterable);
    return element;
  }

  void CountUses(const Expr& e, const std::string& var, int& uses,
                 const Token& at) const {
    if (e.kind == ExprKind::kName && e.name == var) ++uses;
    if ((e.kind == ExprKind::kIndex || e.kind == ExprKind::kSlice) &&
        e.args[0].kind == ExprKind::kName && e.args[0].name == var) {
      Unsupported("generator indexing its loop variable", at);
    }
    for (const Expr& c : e.args) CountUses(c, var, uses, at);
  }

  static bool ContainsLiteral(const Expr& e) {
    if (e.kind == ExprKind::kFloat) return true;
    return std::any_of(e.args.begin(), e.args.end(), ContainsLiteral);
  }

  static void ReplaceName(Expr& e, const std::string& var, const Expr& with) {
    if (e.kind == ExprKind::kName && e.name == var) {
      e = with;
      return;
    }
    for (Expr& c : e.args) ReplaceName(c, var, with);
  }

  std::string_view source_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t last_end_ = 0;
  int depth_ = 0;
};

// Assigns variable slots and checks that every name is defined before use
// (in textual order).
class Resolver {
 public:
  void Run(PolicyAst& ast) {
    for (const std::string& p : ast.params) Bind(p);
    ResolveBlock(ast.body);
    ast.variables = std::move(variables_);
  }

 private:
  int Bind(const std::string& name) {
    auto [it, inserted] = slots_.emplace(name, static_cast<int>(variables_.size()));
    if (inserted) variables_.push_back(name);
    return it->second;
  }

  [[noreturn]] static void Fail(const SourceLocation& loc,
                                const std::string& message) {
    throw ParseError(loc.line, loc.column, message);
  }

  void ResolveBlock(std::vector<Stmt>& block) {
    for (Stmt& s : block) ResolveStmt(s);
  }

  void ResolveStmt(Stmt& s) {
    switch (s.kind) {
      case StmtKind::kAssign:
        ResolveExpr(s.value);
        if (s.target.kind == ExprKind::kName) {
          CheckAssignable(s.target);
          s.target.index = Bind(s.target.name);
        } else {
          ResolveExpr(s.target);
        }
        break;
      case StmtKind::kAugAssign:
        ResolveExpr(s.value);
        ResolveExpr(s.target);
        break;
      case StmtKind::kIf:
        ResolveExpr(s.value);
        ResolveBlock(s.body);
        ResolveBlock(s.orelse);
        break;
      case StmtKind::kReturn:
        ResolveExpr(s.value);
        break;
      case StmtKind::kPass:
        break;
    }
  }

  static void CheckAssignable(const Expr& target) {
    if (FindBuiltin(target.name) != nullptr || target.name == "pi") {
      Fail(target.loc, "cannot assign to builtin '" + target.name + "'");
    }
  }

  void ResolveExpr(Expr& e) {
    if (e.kind == ExprKind::kName) {
      auto it = slots_.find(e.name);
      if (it != slots_.end()) {
        e.index = it->second;
        return;
      }
      if (FindBuiltin(e.name) != nullptr) {
        Fail(e.loc, "builtin '" + e.name + "' used as a value");
      }
      Fail(e.loc, "name '" + e.name + "' is not defined");
    }
    for (Expr& c : e.args) ResolveExpr(c);
  }

  std::unordered_map<std::string, int> slots_;
  std::vector<std::string> variables_;
};

int ExprDepth(const Expr& e) {
  int depth = 0;
  for (const Expr& c : e.args) depth = std::max(depth, ExprDepth(c));
  return depth + 1;
}

void CheckDepth(const std::vector<Stmt>& block) {
  for (const Stmt& s : block) {
    for (const Expr* e : {&s.target, &s.value}) {
      if (ExprDepth(*e) > kMaxExpressionDepth) {
        throw ParseError(s.loc.line, s.loc.column, "expression nesting too deep");
      }
    }
    CheckDepth(s.body);
    CheckDepth(s.orelse);
  }
}

}  // namespace

PolicyAst Parse(std::string_view source) {
  std::vector<Token> tokens = Tokenize(source);
  Parser parser(source, std::move(tokens));
  PolicyAst ast = parser.ParseFile();
  CheckDepth(ast.body);
  Resolver().Run(ast);
  return ast;
}

}  // namespace policyforge::lang
