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

#include "policyforge/cli/toml.h"

#include <cctype>
#include <charconv>
#include <cmath>

#include "policyforge/common/errors.h"

namespace policyforge::cli {
namespace {

[[noreturn]] void Fail(int line, const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool IsBareKey(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

// Parses a quoted string starting at s[0]; returns the rest of the line.
std::string_view ParseString(std::string_view s, int line, std::string& out) {
  const char quote = s[0];
  if (s.substr(0, 3) == std::string(3, quote)) Fail(line, "multi-line strings are not supported");
  std::size_t i = 1;
  for (; i < s.size() && s[i] != quote; ++i) {
    char c = s[i];
    if (quote == '"' && c == '\\') {
      if (++i == s.size()) break;
      switch (s[i]) {
        case 'n': c = '\n'; break;
        case 't': c = '\t'; break;
        case 'r': c = '\r'; break;
        case '"': c = '"'; break;
        case '\\': c = '\\'; break;
        default: Fail(line, std::string("unknown escape \\") + s[i]);
      }
    }
    out += c;
  }
  if (i >= s.size()) Fail(line, "unterminated string");
  return s.substr(i + 1);
}

// Removes a trailing comment from the unquoted remainder of a line.
std::string_view StripComment(std::string_view s) {
  const std::size_t hash = s.find('#');
  return Trim(hash == std::string_view::npos ? s : s.substr(0, hash));
}

TomlValue ParseValue(std::string_view s, int line) {
  TomlValue v;
  v.line = line;
  if (s.empty()) Fail(line, "missing value");
  if (s[0] == '"' || s[0] == '\'') {
    std::string str;
    if (!StripComment(ParseString(s, line, str)).empty()) {
      Fail(line, "unexpected text after string");
    }
    v.value = std::move(str);
    return v;
  }
  s = StripComment(s);
  if (s == "true" || s == "false") {
    v.value = s == "true";
    return v;
  }
  if (s[0] == '[' || s[0] == '{') Fail(line, "arrays and inline tables are not supported");
  std::string digits;
  for (char c : s) {
    if (c != '_') digits += c;
  }
  const char* begin = digits.data();
  const char* end = begin + digits.size();
  if (*begin == '+') ++begin;
  const bool floating = digits.find_first_of(".eE") != std::string::npos;
  if (!floating) {
    std::int64_t n = 0;
    const auto res = std::from_chars(begin, end, n);
    if (res.ec == std::errc() && res.ptr == end) {
      v.value = n;
      return v;
    }
  } else {
    double d = 0.0;
    const auto res = std::from_chars(begin, end, d);
    if (res.ec == std::errc() && res.ptr == end && std::isfinite(d)) {
      v.value = d;
      return v;
    }
  }
  Fail(line, "cannot read value '" + std::string(s) + "'");
}

}  // namespace

TomlDocument ParseToml(std::string_view text) {
  TomlDocument doc;
  std::string section;
  doc.sections[section];
  int line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      const std::size_t close = line.find(']');
      if (close == std::string_view::npos) Fail(line_no, "unterminated section header");
      if (!StripComment(line.substr(close + 1)).empty()) {
        Fail(line_no, "unexpected text after section header");
      }
      const std::string name(Trim(line.substr(1, close - 1)));
      if (!IsBareKey(name)) Fail(line_no, "bad section name '" + name + "'");
      if (doc.sections.count(name) && name != "") Fail(line_no, "section [" + name + "] repeated");
      section = name;
      doc.sections[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) Fail(line_no, "expected key = value");
    const std::string key(Trim(line.substr(0, eq)));
    if (!IsBareKey(key)) Fail(line_no, "bad key '" + key + "'");
    TomlTable& table = doc.sections[section];
    if (table.count(key)) Fail(line_no, "key '" + key + "' repeated");
    table[key] = ParseValue(Trim(line.substr(eq + 1)), line_no);
  }
  return doc;
}

}  // namespace policyforge::cli
