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

#include "policyforge/lang/parameterize.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <utility>

#include "policyforge/common/errors.h"

namespace policyforge::lang {
namespace {

class Lifter {
 public:
  explicit Lifter(ParamTemplate& tmpl) : tmpl_(tmpl) {}

  void Block(std::vector<Stmt>& block) {
    for (Stmt& s : block) {
      // Assignment targets are structural: only their subscripts hold
      // expressions, and those are never lifted.
      Visit(s.value, true);
      Block(s.body);
      Block(s.orelse);
    }
  }

 private:
  void Lift(Expr& e) {
    const bool folded = e.kind == ExprKind::kUnary;
    const double value = folded ? -e.args[0].number : e.number;
    const SourceLocation loc = e.loc;
    tmpl_.spans.push_back({loc.offset, loc.length, folded});
    Expr slot = Expr::Slot(static_cast<int>(tmpl_.theta0.size()));
    slot.loc = loc;
    tmpl_.theta0.push_back(value);
    e = std::move(slot);
  }

  void Visit(Expr& e, bool liftable) {
    if (IsLiteralSite(e)) {
      if (liftable) Lift(e);
      return;
    }
    switch (e.kind) {
      case ExprKind::kIndex:
      case ExprKind::kSlice:
        Visit(e.args[0], liftable);
        for (std::size_t i = 1; i < e.args.size(); ++i) Visit(e.args[i], false);
        return;
      case ExprKind::kCall:
        if (e.builtin() == Builtin::kNormal) liftable = false;
        break;
      default:
        break;
    }
    for (Expr& c : e.args) Visit(c, liftable);
  }

  ParamTemplate& tmpl_;
};

// Renumbers slots so that slot order matches source offsets. Needed when a
// normalized generator expression moved its iterable ahead of its element.
void RenumberSlots(std::vector<Stmt>& block, const std::vector<int>& rank);

void RenumberExpr(Expr& e, const std::vector<int>& rank) {
  if (e.kind == ExprKind::kParamSlot) e.index = rank[static_cast<std::size_t>(e.index)];
  for (Expr& c : e.args) RenumberExpr(c, rank);
}

void RenumberSlots(std::vector<Stmt>& block, const std::vector<int>& rank) {
  for (Stmt& s : block) {
    RenumberExpr(s.value, rank);
    RenumberSlots(s.body, rank);
    RenumberSlots(s.orelse, rank);
  }
}

void SortBySource(ParamTemplate& tmpl) {
  const std::size_t n = tmpl.spans.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return tmpl.spans[a].offset < tmpl.spans[b].offset;
  });
  if (std::is_sorted(order.begin(), order.end())) return;
  std::vector<int> rank(n);
  std::vector<double> theta(n);
  std::vector<LiteralSpan> spans(n);
  for (std::size_t r = 0; r < n; ++r) {
    rank[order[r]] = static_cast<int>(r);
    theta[r] = tmpl.theta0[order[r]];
    spans[r] = tmpl.spans[order[r]];
  }
  RenumberSlots(tmpl.ast.body, rank);
  tmpl.theta0 = std::move(theta);
  tmpl.spans = std::move(spans);
}

class Substituter {
 public:
  explicit Substituter(std::span<const double> theta) : theta_(theta) {}

  void Block(std::vector<Stmt>& block) {
    for (Stmt& s : block) {
      Visit(s.target);
      Visit(s.value);
      Block(s.body);
      Block(s.orelse);
    }
  }

  void Visit(Expr& e) {
    if (e.kind == ExprKind::kParamSlot) {
      const double v = theta_[static_cast<std::size_t>(e.index)];
      const SourceLocation loc = e.loc;
      if (std::signbit(v)) {
        e = Expr::Unary(UnaryOp::kNeg, Expr::Float(-v));
      } else {
        e = Expr::Float(v);
      }
      e.loc = loc;
      return;
    }
    for (Expr& c : e.args) Visit(c);
  }

 private:
  std::span<const double> theta_;
};

void CheckDimension(const ParamTemplate& tmpl, std::span<const double> theta) {
  if (theta.size() != tmpl.n_params()) {
    throw DimensionMismatch("theta", tmpl.n_params(), theta.size());
  }
}

}  // namespace

ParamTemplate ExtractParameters(const PolicyAst& ast) {
  ParamTemplate tmpl;
  tmpl.ast = ast;
  Lifter(tmpl).Block(tmpl.ast.body);
  SortBySource(tmpl);
  return tmpl;
}

PolicyAst Substitute(const ParamTemplate& tmpl, std::span<const double> theta) {
  CheckDimension(tmpl, theta);
  PolicyAst out = tmpl.ast;
  Substituter(theta).Block(out.body);
  return out;
}

std::vector<double> EvaluatePolicy(const ParamTemplate& tmpl,
                                   std::span<const double> theta,
                                   std::span<const double> obs, Rng& rng,
                                   EvalOptions options) {
  CheckDimension(tmpl, theta);
  return Interpreter(tmpl.ast, options).Run(theta, obs, rng);
}

std::string FormatFloat(double v) {
  if (std::isnan(v)) return "(1e999 - 1e999)";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, end);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string RewriteSource(std::string_view source, const ParamTemplate& tmpl,
                          std::span<const double> theta) {
  CheckDimension(tmpl, theta);
  std::string out;
  out.reserve(source.size() + 8 * theta.size());
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < tmpl.spans.size(); ++i) {
    const LiteralSpan& span = tmpl.spans[i];
    out.append(source.substr(cursor, span.offset - cursor));
    const double v = theta[i];
    if (std::signbit(v) && !span.folded) {
      out += "(-" + FormatFloat(-v) + ")";
    } else if (std::signbit(v)) {
      out += "-" + FormatFloat(-v);
    } else {
      out += FormatFloat(v);
    }
    cursor = span.offset + span.length;
  }
  out.append(source.substr(cursor));
  return out;
}

}  // namespace policyforge::lang
