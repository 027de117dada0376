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

#ifndef POLICYFORGE_ENVS_ENVIRONMENT_H_
#define POLICYFORGE_ENVS_ENVIRONMENT_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace policyforge::envs {

enum class EnvKind { kPendulum, kBallInCup, kExternal };

struct EnvSpec {
  std::string name;
  EnvKind kind = EnvKind::kPendulum;
  std::size_t obs_dim = 0;
  std::size_t act_dim = 0;
  int horizon = 1000;
  double control_interval = 0.02;  // seconds
  int substeps = 10;
};

struct StepResult {
  double reward = 0.0;
  bool done = false;
};

// A discrete-time control task. Instances hold mutable state and belong to
// one thread at a time; create one per worker.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const = 0;

  // Starts an episode. Deterministic in `seed`. Writes the first observation.
  virtual void Reset(std::uint64_t seed, std::vector<double>& obs) = 0;

  // Advances one control step. Throws DimensionMismatch when the action has
  // the wrong length. Writes the next observation.
  virtual StepResult Step(std::span<const double> action,
                          std::vector<double>& obs) = 0;
};

using EnvFactory = std::function<std::unique_ptr<Environment>()>;

}  // namespace policyforge::envs

#endif  // POLICYFORGE_ENVS_ENVIRONMENT_H_
