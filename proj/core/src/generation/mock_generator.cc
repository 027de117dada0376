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

#include "policyforge/generation/mock_generator.h"

#include <chrono>
#include <cmath>
#include <functional>
#include <thread>
#include <utility>

#include "policyforge/lang/parameterize.h"
#include "policyforge/lang/parser.h"
#include "policyforge/lang/render.h"

namespace policyforge::generation {
namespace {

using lang::CompareOp;
using lang::Expr;
using lang::ExprKind;
using lang::PolicyAst;
using lang::Stmt;
using lang::StmtKind;

// Three decimals, like the constants language models tend to write.
double LlmRound(double v) {
  const double r = std::round(v * 1000.0) / 1000.0;
  return r == 0.0 ? v : r;
}

void CollectCompares(Expr& e, std::vector<Expr*>& out) {
  if (e.kind == ExprKind::kCompare) out.push_back(&e);
  for (Expr& c : e.args) CollectCompares(c, out);
}

void WalkStatements(std::vector<Stmt>& block, const std::function<void(Stmt&)>& fn) {
  for (Stmt& s : block) {
    fn(s);
    WalkStatements(s.body, fn);
    WalkStatements(s.orelse, fn);
  }
}

CompareOp Mirror(CompareOp op) {
  switch (op) {
    case CompareOp::kLt:
      return CompareOp::kGt;
    case CompareOp::kGt:
      return CompareOp::kLt;
    case CompareOp::kLe:
      return CompareOp::kGe;
    case CompareOp::kGe:
      return CompareOp::kLe;
    case CompareOp::kEq:
      return CompareOp::kNe;
    case CompareOp::kNe:
      return CompareOp::kEq;
  }
  return op;
}

template <typename T>
T* Pick(std::vector<T*>& items, Rng& rng) {
  return items[rng.UniformInt(items.size())];
}

// Renders `ast` and keeps it only if it parses back.
std::optional<std::string> Checked(const PolicyAst& ast) {
  std::string text = lang::Render(ast, "policy");
  try {
    lang::Parse(text);
  } catch (const Error&) {
    return std::nullopt;
  }
  return text;
}

}  // namespace

std::string_view MockOperatorName(MockOperator op) {
  switch (op) {
    case MockOperator::kPerturbLiteral:
      return "perturb_literal";
    case MockOperator::kFlipComparison:
      return "flip_comparison";
    case MockOperator::kCrossover:
      return "crossover";
    case MockOperator::kInsertTerm:
      return "insert_term";
    case MockOperator::kFresh:
      return "fresh";
  }
  return "unknown";
}

MockGenerator::MockGenerator(MockOptions options) : options_(options) {
  if (options_.obs_dim == 0) options_.obs_dim = 1;
  if (options_.act_dim == 0) options_.act_dim = 1;
}

std::optional<std::string> MockGenerator::Apply(MockOperator op, const std::string& v0,
                                                const std::string& v1, Rng& rng) const {
  if (op == MockOperator::kFresh) {
    auto term = [&] {
      const double c = LlmRound(rng.Normal(0.0, 1.0));
      const std::size_t i = rng.UniformInt(options_.obs_dim);
      return lang::FormatFloat(c) + " * obs[" + std::to_string(i) + "]";
    };
    std::string expr;
    if (options_.act_dim == 1) {
      expr = term() + " + " + term();
    } else {
      expr = "[";
      for (std::size_t k = 0; k < options_.act_dim; ++k) {
        if (k > 0) expr += ", ";
        expr += term();
      }
      expr += "]";
    }
    return "def policy(obs):\n  return " + expr + "\n";
  }

  PolicyAst parent;
  try {
    parent = lang::Parse(v1);
  } catch (const Error&) {
    return std::nullopt;
  }

  switch (op) {
    case MockOperator::kPerturbLiteral: {
      const lang::ParamTemplate tmpl = lang::ExtractParameters(parent);
      if (tmpl.n_params() == 0) return std::nullopt;
      std::vector<double> theta = tmpl.theta0;
      const std::size_t k = rng.UniformInt(theta.size());
      theta[k] = LlmRound(theta[k] * std::exp(0.5 * rng.Normal()));
      return lang::RewriteSource(v1, tmpl, theta);
    }
    case MockOperator::kFlipComparison: {
      std::vector<Expr*> compares;
      WalkStatements(parent.body, [&](Stmt& s) { CollectCompares(s.value, compares); });
      if (compares.empty()) return std::nullopt;
      Expr* e = Pick(compares, rng);
      const std::size_t k = rng.UniformInt(e->compare_ops.size());
      e->compare_ops[k] = Mirror(e->compare_ops[k]);
      return Checked(parent);
    }
    case MockOperator::kCrossover: {
      PolicyAst donor;
      try {
        donor = lang::Parse(v0);
      } catch (const Error&) {
        return std::nullopt;
      }
      std::vector<Stmt*> donors;
      std::vector<Stmt*> targets;
      WalkStatements(donor.body, [&](Stmt& s) {
        if (s.kind == StmtKind::kIf) donors.push_back(&s);
      });
      WalkStatements(parent.body, [&](Stmt& s) {
        if (s.kind == StmtKind::kIf) targets.push_back(&s);
      });
      if (donors.empty() || targets.empty()) return std::nullopt;
      const Stmt* from = Pick(donors, rng);
      Stmt* to = Pick(targets, rng);
      if (rng.Uniform01() < 0.5) {
        to->body = from->body;
      } else {
        to->orelse = from->orelse;
      }
      return Checked(parent);
    }
    case MockOperator::kInsertTerm: {
      std::vector<Stmt*> returns;
      WalkStatements(parent.body, [&](Stmt& s) {
        if (s.kind == StmtKind::kReturn) returns.push_back(&s);
      });
      if (returns.empty()) return std::nullopt;
      Stmt* ret = Pick(returns, rng);
      const double c = LlmRound(rng.Normal(0.0, 1.0));
      const int i = static_cast<int>(rng.UniformInt(options_.obs_dim));
      Expr term = Expr::Binary(lang::BinaryOp::kMul, Expr::Float(std::fabs(c)),
                               Expr::Index(Expr::Name(parent.params.at(0)), Expr::Int(i)));
      ret->value = Expr::Binary(c < 0 ? lang::BinaryOp::kSub : lang::BinaryOp::kAdd,
                                std::move(ret->value), std::move(term));
      return Checked(parent);
    }
    case MockOperator::kFresh:
      break;
  }
  return std::nullopt;
}

std::string MockGenerator::Offspring(MockOperator op, const std::string& v0,
                                     const std::string& v1, Rng& rng,
                                     MockOperator* used) const {
  for (MockOperator attempt : {op, MockOperator::kInsertTerm, MockOperator::kFresh}) {
    if (std::optional<std::string> out = Apply(attempt, v0, v1, rng)) {
      if (used != nullptr) *used = attempt;
      return *out;
    }
  }
  // kFresh always applies.
  return {};
}

std::vector<std::string> MockGenerator::Sample(const Prompt& prompt, int n,
                                               std::uint64_t seed) {
  if (options_.latency_s > 0.0) {
    std::this_thread::sleep_for(std::chrono::duration<double>(options_.latency_s));
  }
  const std::string v0 = FindFunction(prompt.text, "policy_v0").value_or("");
  const std::string v1 = FindFunction(prompt.text, "policy_v1").value_or("");
  double total = 0.0;
  for (double w : options_.weights) total += w;
  std::vector<std::string> out;
  for (int k = 0; k < n; ++k) {
    Rng rng(DeriveSeed({seed, static_cast<std::uint64_t>(k), 0x6d6f636bULL}));
    double u = rng.Uniform01() * total;
    std::size_t pick = 0;
    while (pick + 1 < kNumMockOperators && u >= options_.weights[pick]) {
      u -= options_.weights[pick];
      ++pick;
    }
    const std::string child =
        Offspring(static_cast<MockOperator>(pick), v0, v1, rng);
    std::string text = "Here is an improved policy.\n\n```python\n";
    const std::size_t paren = child.find('(');
    text += "def policy_v2" + child.substr(paren);
    text += "```\n";
    out.push_back(std::move(text));
  }
  return out;
}

}  // namespace policyforge::generation
