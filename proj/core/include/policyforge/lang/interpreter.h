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

#ifndef POLICYFORGE_LANG_INTERPRETER_H_
#define POLICYFORGE_LANG_INTERPRETER_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "policyforge/common/errors.h"
#include "policyforge/common/rng.h"
#include "policyforge/lang/ast.h"

namespace policyforge::lang {

enum class FaultKind : std::uint8_t {
  kIndex,           // subscript out of range
  kLengthMismatch,  // vector lengths disagree, empty reduction, oversize
  kType,            // scalar/vector misuse, ambiguous truth value
  kUnbound,         // variable read before assignment on this path
  kNoReturn,        // execution fell off the end of the function
  kNonFinite,       // NaN or Inf in the returned action
  kBudget,          // evaluation-node budget exhausted
};

std::string_view FaultKindName(FaultKind kind);

// Runtime failure of a policy program. Never aborts the host.
class PolicyFault : public Error {
 public:
  PolicyFault(FaultKind kind, const std::string& message)
      : Error(std::string(FaultKindName(kind)) + ": " + message), kind_(kind) {}

  FaultKind kind() const { return kind_; }

 private:
  FaultKind kind_;
};

struct EvalOptions {
  std::size_t node_budget = 100000;
};

// Tree-walking evaluator bound to one AST. Holds scratch state, so an
// instance must not be shared between threads; the AST must outlive it.
class Interpreter {
 public:
  explicit Interpreter(const PolicyAst& ast, EvalOptions options = {});
  ~Interpreter();
  Interpreter(Interpreter&&) noexcept;
  Interpreter& operator=(Interpreter&&) noexcept;

  // Runs the policy on `obs`. `params` supplies values for parameter slots.
  // The result is the returned value as a flat vector (scalars become
  // length-1 vectors). Throws PolicyFault.
  std::vector<double> Run(std::span<const double> params,
                          std::span<const double> obs, Rng& rng);

  // Allocation-free variant for hot loops.
  void RunInto(std::span<const double> params, std::span<const double> obs,
               Rng& rng, std::vector<double>& out);

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot evaluation of a program without parameter slots.
std::vector<double> Evaluate(const PolicyAst& ast, std::span<const double> obs,
                             Rng& rng, EvalOptions options = {});

}  // namespace policyforge::lang

#endif  // POLICYFORGE_LANG_INTERPRETER_H_
