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

#include "policyforge/generation/extract.h"

#include <cstddef>
#include <exception>
#include <optional>
#include <utility>
#include <vector>

#include "policyforge/common/errors.h"
#include "policyforge/lang/parser.h"

namespace policyforge::generation {
namespace {

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return lines;
}

std::size_t Indent(std::string_view line) {
  std::size_t n = 0;
  for (char c : line) {
    if (c == ' ') {
      ++n;
    } else if (c == '\t') {
      n = (n / 8 + 1) * 8;
    } else {
      break;
    }
  }
  return n;
}

std::string_view Strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool IsFence(std::string_view line) { return Strip(line).starts_with("```"); }

// Whether `line` opens `def <name>(`.
bool DefinesFunction(std::string_view line, std::string_view name) {
  std::string_view s = Strip(line);
  if (!s.starts_with("def ")) return false;
  s.remove_prefix(4);
  s = Strip(s);
  if (!s.starts_with(name)) return false;
  s.remove_prefix(name.size());
  s = Strip(s);
  return s.starts_with("(");
}

// Counts unescaped triple-quote delimiters to track multi-line strings.
int TripleQuotes(std::string_view line) {
  int n = 0;
  for (std::size_t i = 0; i + 2 < line.size(); ++i) {
    if ((line[i] == '"' || line[i] == '\'') && line[i + 1] == line[i] &&
        line[i + 2] == line[i]) {
      ++n;
      i += 2;
    }
  }
  return n;
}

std::string RenameDef(std::string_view line) {
  const std::size_t def = line.find("def");
  const std::size_t paren = line.find('(', def);
  std::string out(line.substr(0, def));
  out += "def policy";
  out += line.substr(paren);
  return out;
}

}  // namespace

std::optional<std::string> FindFunction(std::string_view text, std::string_view name) {
  std::vector<std::string_view> lines;
  for (std::string_view line : SplitLines(text)) {
    if (!IsFence(line)) lines.push_back(line);
  }
  std::size_t start = 0;
  while (start < lines.size() && !DefinesFunction(lines[start], name)) ++start;
  if (start == lines.size()) return std::nullopt;

  const std::size_t base = Indent(lines[start]);
  std::vector<std::string_view> body = {lines[start]};
  bool in_string = TripleQuotes(lines[start]) % 2 == 1;
  for (std::size_t i = start + 1; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const std::string_view content = Strip(line);
    if (!in_string && !content.empty() && content.front() != '#' &&
        Indent(line) <= base) {
      break;
    }
    body.push_back(line);
    if (TripleQuotes(line) % 2 == 1) in_string = !in_string;
  }
  while (body.size() > 1 && Strip(body.back()).empty()) body.pop_back();

  std::string source;
  for (std::size_t i = 0; i < body.size(); ++i) {
    std::string_view line = body[i];
    // Only strip the common indent from lines that carry it.
    if (Indent(line) >= base) {
      std::size_t cut = 0;
      std::size_t width = 0;
      while (cut < line.size() && width < base) {
        width = line[cut] == '\t' ? (width / 8 + 1) * 8 : width + 1;
        ++cut;
      }
      line.remove_prefix(cut);
    }
    source += i == 0 ? RenameDef(line) : std::string(line);
    source += '\n';
  }
  return source;
}

Extraction ExtractFunction(std::string_view raw) {
  Extraction result;
  std::optional<std::string> source = FindFunction(raw, "policy_v2");
  if (!source) source = FindFunction(raw, "policy");
  if (!source) {
    result.rejection = "no function found";
    return result;
  }
  result.source = std::move(*source);
  try {
    result.ast = lang::Parse(result.source);
  } catch (const UnsupportedConstruct& e) {
    result.rejection = "unsupported construct: " + e.construct();
  } catch (const ParseError& e) {
    result.rejection = std::string("parse error: ") + e.what();
  } catch (const std::exception& e) {
    result.rejection = std::string("rejected: ") + e.what();
  }
  return result;
}

}  // namespace policyforge::generation
