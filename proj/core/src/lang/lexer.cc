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

#include "policyforge/lang/lexer.h"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "policyforge/common/errors.h"

namespace policyforge::lang {
namespace {

constexpr std::array<std::string_view, 4> kModuleQualifiers = {"np", "numpy",
                                                               "math", "jnp"};

constexpr std::array<std::string_view, 5> kThreeCharOps = {"**=", "//=", ">>=",
                                                           "<<=", "..."};

constexpr std::array<std::string_view, 19> kTwoCharOps = {
    "**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=",
    "%=", "->", ":=", "<<", ">>", "&=", "|=", "^=", "@="};

constexpr std::string_view kOneCharOps = "+-*/%()[]{},:.;=<>@&|^~!";

bool IsNameStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool IsNameChar(char c) { return IsNameStart(c) || (c >= '0' && c <= '9'); }

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> Run() {
    indents_.push_back(0);
    while (pos_ < src_.size()) {
      if (at_line_start_ && depth_ == 0) {
        if (!HandleIndentation()) continue;
      }
      LexOne();
    }
    if (!tokens_.empty() && tokens_.back().kind != TokenKind::kNewline &&
        tokens_.back().kind != TokenKind::kDedent) {
      Emit(TokenKind::kNewline, "", Here(0));
    }
    if (depth_ > 0) Fail("unexpected end of input inside brackets");
    while (indents_.size() > 1) {
      indents_.pop_back();
      Emit(TokenKind::kDedent, "", Here(0));
    }
    Emit(TokenKind::kEnd, "", Here(0));
    return std::move(tokens_);
  }

 private:
  SourceLocation Here(std::size_t length) const {
    return SourceLocation{line_, static_cast<int>(pos_ - line_begin_) + 1, pos_,
                          length};
  }

  [[noreturn]] void Fail(const std::string& message) const {
    throw ParseError(line_, static_cast<int>(pos_ - line_begin_) + 1, message);
  }

  void Emit(TokenKind kind, std::string text, SourceLocation loc) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.loc = loc;
    tokens_.push_back(std::move(t));
  }

  void NewLine() {
    ++line_;
    line_begin_ = pos_;
  }

  // Measures the indentation of a physical line. Returns false if the line
  // is blank or comment-only (it is consumed entirely).
  bool HandleIndentation() {
    int width = 0;
    std::size_t p = pos_;
    while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t' ||
                               src_[p] == '\f')) {
      width = src_[p] == '\t' ? (width / 8 + 1) * 8 : width + 1;
      ++p;
    }
    if (p >= src_.size() || src_[p] == '\n' || src_[p] == '\r' ||
        src_[p] == '#') {
      while (p < src_.size() && src_[p] != '\n') ++p;
      pos_ = p;
      if (pos_ < src_.size()) {
        ++pos_;
        NewLine();
      }
      return false;
    }
    pos_ = p;
    at_line_start_ = false;
    if (width > indents_.back()) {
      indents_.push_back(width);
      Emit(TokenKind::kIndent, "", Here(0));
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        Emit(TokenKind::kDedent, "", Here(0));
      }
      if (width != indents_.back()) Fail("inconsistent dedent");
    }
    return true;
  }

  void LexOne() {
    const char c = src_[pos_];
    if (c == ' ' || c == '\t' || c == '\f' || c == '\r') {
      ++pos_;
      return;
    }
    if (c == '#') {
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      return;
    }
    if (c == '\\') {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && src_[p] == '\r') ++p;
      if (p < src_.size() && src_[p] == '\n') {
        pos_ = p + 1;
        NewLine();
        return;
      }
      Fail("unexpected character '\\'");
    }
    if (c == '\n') {
      if (depth_ == 0 && !tokens_.empty() &&
          tokens_.back().kind != TokenKind::kNewline &&
          tokens_.back().kind != TokenKind::kIndent &&
          tokens_.back().kind != TokenKind::kDedent) {
        Emit(TokenKind::kNewline, "", Here(0));
      }
      ++pos_;
      NewLine();
      at_line_start_ = true;
      return;
    }
    if (IsStringStart()) {
      LexString();
      return;
    }
    if (IsNameStart(c)) {
      LexName();
      return;
    }
    if (IsDigit(c) || (c == '.' && pos_ + 1 < src_.size() &&
                       IsDigit(src_[pos_ + 1]))) {
      LexNumber();
      return;
    }
    LexOperator();
  }

  bool IsStringStart() const {
    std::size_t p = pos_;
    int prefix = 0;
    while (p < src_.size() && prefix < 2 &&
           std::string_view("rRbBuUfF").find(src_[p]) != std::string_view::npos) {
      ++p;
      ++prefix;
    }
    return p < src_.size() && (src_[p] == '"' || src_[p] == '\'');
  }

  void LexString() {
    const SourceLocation start = Here(0);
    const std::size_t begin = pos_;
    bool formatted = false;
    while (src_[pos_] != '"' && src_[pos_] != '\'') {
      if (src_[pos_] == 'f' || src_[pos_] == 'F') formatted = true;
      ++pos_;
    }
    const char quote = src_[pos_];
    const bool triple = pos_ + 2 < src_.size() && src_[pos_ + 1] == quote &&
                        src_[pos_ + 2] == quote;
    pos_ += triple ? 3 : 1;
    std::string value;
    while (true) {
      if (pos_ >= src_.size()) Fail("unterminated string literal");
      const char ch = src_[pos_];
      if (ch == '\\' && pos_ + 1 < src_.size()) {
        value += src_[pos_ + 1];
        if (src_[pos_ + 1] == '\n') NewLineAt(pos_ + 2);
        pos_ += 2;
        continue;
      }
      if (ch == quote) {
        if (!triple) {
          ++pos_;
          break;
        }
        if (pos_ + 2 < src_.size() && src_[pos_ + 1] == quote &&
            src_[pos_ + 2] == quote) {
          pos_ += 3;
          break;
        }
      }
      if (ch == '\n') {
        if (!triple) Fail("unterminated string literal");
        value += ch;
        ++pos_;
        NewLineAt(pos_);
        continue;
      }
      value += ch;
      ++pos_;
    }
    if (formatted) {
      throw UnsupportedConstruct("f-string", start.line, start.column);
    }
    SourceLocation loc = start;
    loc.length = pos_ - begin;
    Emit(TokenKind::kString, std::move(value), loc);
  }

  void NewLineAt(std::size_t begin) {
    ++line_;
    line_begin_ = begin;
  }

  void LexName() {
    SourceLocation loc = Here(0);
    const std::size_t begin = pos_;
    while (pos_ < src_.size() && IsNameChar(src_[pos_])) ++pos_;
    std::string head(src_.substr(begin, pos_ - begin));
    if (!IsModuleQualifier(head)) {
      loc.length = pos_ - begin;
      Emit(TokenKind::kName, std::move(head), loc);
      RejectNonAscii();
      return;
    }
    // Dotted module chain: keep only the last segment.
    std::vector<std::string> segments{head};
    while (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
           IsNameStart(src_[pos_ + 1])) {
      ++pos_;
      const std::size_t seg = pos_;
      while (pos_ < src_.size() && IsNameChar(src_[pos_])) ++pos_;
      segments.emplace_back(src_.substr(seg, pos_ - seg));
    }
    loc.length = pos_ - begin;
    Token t;
    t.kind = TokenKind::kName;
    t.text = segments.back();
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
      if (i > 0) t.qualifier += '.';
      t.qualifier += segments[i];
    }
    t.loc = loc;
    tokens_.push_back(std::move(t));
  }

  void RejectNonAscii() {
    if (pos_ < src_.size() && static_cast<unsigned char>(src_[pos_]) >= 0x80) {
      Fail("non-ASCII character in identifier");
    }
  }

  void LexNumber() {
    SourceLocation loc = Here(0);
    const std::size_t begin = pos_;
    std::string digits;
    bool is_float = false;
    if (src_[pos_] == '0' && pos_ + 1 < src_.size() &&
        std::string_view("xXoObB").find(src_[pos_ + 1]) != std::string_view::npos) {
      const char base_char = static_cast<char>(src_[pos_ + 1] | 0x20);
      const int base = base_char == 'x' ? 16 : base_char == 'o' ? 8 : 2;
      pos_ += 2;
      while (pos_ < src_.size() && (std::isxdigit(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_')) {
        if (src_[pos_] != '_') digits += src_[pos_];
        ++pos_;
      }
      if (digits.empty()) Fail("malformed integer literal");
      double value = 0.0;
      for (char d : digits) {
        const int v = IsDigit(d) ? d - '0' : (d | 0x20) - 'a' + 10;
        if (v >= base) Fail("malformed integer literal");
        value = value * base + v;
      }
      FinishNumber(loc, begin, TokenKind::kInt, value);
      return;
    }
    auto take_digits = [&] {
      while (pos_ < src_.size() && (IsDigit(src_[pos_]) || src_[pos_] == '_')) {
        if (src_[pos_] != '_') digits += src_[pos_];
        ++pos_;
      }
    };
    take_digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      is_float = true;
      digits += '.';
      ++pos_;
      take_digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && IsDigit(src_[p])) {
        is_float = true;
        digits += 'e';
        ++pos_;
        if (src_[pos_] == '+' || src_[pos_] == '-') digits += src_[pos_++];
        take_digits();
      }
    }
    if (pos_ < src_.size() && (src_[pos_] == 'j' || src_[pos_] == 'J')) {
      throw UnsupportedConstruct("complex literal", loc.line, loc.column);
    }
    if (pos_ < src_.size() && IsNameChar(src_[pos_])) {
      Fail("malformed number literal");
    }
    if (digits.front() == '.') digits.insert(digits.begin(), '0');
    double value = 0.0;
    const char* first = digits.data();
    const char* last = digits.data() + digits.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::result_out_of_range) {
      // Overflow to infinity, underflow to zero.
      value = std::strtod(digits.c_str(), nullptr);
    } else if (ec != std::errc() || ptr != last) {
      Fail("malformed number literal");
    }
    FinishNumber(loc, begin, is_float ? TokenKind::kFloat : TokenKind::kInt,
                 value);
  }

  void FinishNumber(SourceLocation loc, std::size_t begin, TokenKind kind,
                    double value) {
    loc.length = pos_ - begin;
    Token t;
    t.kind = kind;
    t.text = std::string(src_.substr(begin, pos_ - begin));
    t.number = value;
    t.loc = loc;
    tokens_.push_back(std::move(t));
  }

  void LexOperator() {
    SourceLocation loc = Here(0);
    for (std::string_view op : kThreeCharOps) {
      if (src_.substr(pos_, 3) == op) return EmitOp(op, loc);
    }
    for (std::string_view op : kTwoCharOps) {
      if (src_.substr(pos_, 2) == op) return EmitOp(op, loc);
    }
    const char c = src_[pos_];
    if (kOneCharOps.find(c) == std::string_view::npos) {
      if (static_cast<unsigned char>(c) >= 0x80) {
        Fail("non-ASCII character");
      }
      Fail(std::string("unexpected character '") + c + "'");
    }
    if (c == '(' || c == '[' || c == '{') ++depth_;
    if (c == ')' || c == ']' || c == '}') {
      if (depth_ == 0) Fail(std::string("unmatched '") + c + "'");
      --depth_;
    }
    EmitOp(std::string_view(&src_[pos_], 1), loc);
  }

  void EmitOp(std::string_view op, SourceLocation loc) {
    loc.length = op.size();
    pos_ += op.size();
    Emit(TokenKind::kOp, std::string(op), loc);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_begin_ = 0;
  int line_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  std::vector<int> indents_;
  std::vector<Token> tokens_;
};

}  // namespace

bool IsModuleQualifier(std::string_view head) {
  for (std::string_view q : kModuleQualifiers) {
    if (q == head) return true;
  }
  return false;
}

std::vector<Token> Tokenize(std::string_view source) {
  return Lexer(source).Run();
}

}  // namespace policyforge::lang
