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

#ifndef POLICYFORGE_ENVS_ROLLOUT_H_
#define POLICYFORGE_ENVS_ROLLOUT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "policyforge/envs/environment.h"
#include "policyforge/lang/interpreter.h"
#include "policyforge/lang/parameterize.h"

namespace policyforge::envs {

struct Transition {
  int t = 0;
  std::vector<double> obs;
  std::vector<double> action;
  double reward = 0.0;
};

struct RolloutOptions {
  bool record_trajectory = false;
  lang::EvalOptions eval;
};

// One episode. A fault (policy runtime error, bad action, simulator failure)
// ends the episode early; `episode_return` keeps what was earned before it.
struct RolloutResult {
  double episode_return = 0.0;
  int steps = 0;
  bool faulted = false;
  std::string fault;
  std::vector<Transition> trajectory;
};

struct ScoreReport {
  double mean_return = 0.0;
  std::vector<double> returns;
  std::vector<std::uint64_t> seeds;
  int faulted_episodes = 0;
  std::string first_fault;
};

// Seed of the policy's noise stream for an episode.
std::uint64_t PolicySeed(std::uint64_t episode_seed);

RolloutResult Rollout(Environment& env, const lang::ParamTemplate& tmpl,
                      std::span<const double> theta, std::uint64_t seed,
                      const RolloutOptions& options = {});

// Mean return over episodes with seeds seed_base .. seed_base + episodes - 1.
// Throws DimensionMismatch when theta does not match the template.
ScoreReport Score(Environment& env, const lang::ParamTemplate& tmpl,
                  std::span<const double> theta, int episodes,
                  std::uint64_t seed_base, const lang::EvalOptions& eval = {});

}  // namespace policyforge::envs

#endif  // POLICYFORGE_ENVS_ROLLOUT_H_
