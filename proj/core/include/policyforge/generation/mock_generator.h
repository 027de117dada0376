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

#ifndef POLICYFORGE_GENERATION_MOCK_GENERATOR_H_
#define POLICYFORGE_GENERATION_MOCK_GENERATOR_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "policyforge/common/rng.h"
#include "policyforge/generation/generator.h"

namespace policyforge::generation {

enum class MockOperator {
  kPerturbLiteral,  // scale one literal by lognormal(0, 0.5)
  kFlipComparison,  // mirror one comparison operator
  kCrossover,       // graft if-arms from policy_v0 onto policy_v1
  kInsertTerm,      // add c * obs[i] to a returned expression
  kFresh,           // a new minimal linear program
};

inline constexpr std::size_t kNumMockOperators = 5;

std::string_view MockOperatorName(MockOperator op);

struct MockOptions {
  std::size_t obs_dim = 1;
  std::size_t act_dim = 1;
  double latency_s = 0.0;
  // Relative operator frequencies, indexed by MockOperator.
  std::array<double, kNumMockOperators> weights = {0.4, 0.1, 0.15, 0.25, 0.1};
};

// Offline stand-in for an LLM. Reads policy_v0 and policy_v1 back out of
// the prompt and answers with fenced `policy_v2` definitions, each made by
// one operator. Deterministic in the seed.
class MockGenerator : public Generator {
 public:
  explicit MockGenerator(MockOptions options);

  std::vector<std::string> Sample(const Prompt& prompt, int n,
                                  std::uint64_t seed) override;

  // Applies `op` to the parents (sources of functions named `policy`).
  // Returns nullopt when the operator does not apply or its result would
  // not parse.
  std::optional<std::string> Apply(MockOperator op, const std::string& v0,
                                   const std::string& v1, Rng& rng) const;

  // A parseable program built by `op`, falling back to term insertion and
  // then a fresh program. Records the operator actually used.
  std::string Offspring(MockOperator op, const std::string& v0, const std::string& v1,
                        Rng& rng, MockOperator* used = nullptr) const;

 private:
  MockOptions options_;
};

}  // namespace policyforge::generation

#endif  // POLICYFORGE_GENERATION_MOCK_GENERATOR_H_
