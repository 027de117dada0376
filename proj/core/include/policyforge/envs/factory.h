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

#ifndef POLICYFORGE_ENVS_FACTORY_H_
#define POLICYFORGE_ENVS_FACTORY_H_

#include <memory>
#include <string>
#include <string_view>

#include "policyforge/envs/environment.h"
#include "policyforge/envs/external.h"

namespace policyforge::envs {

struct EnvConfig {
  std::string name = "pendulum_swingup";  // pendulum_swingup | ball_in_cup | external
  int horizon = 1000;
  ExternalConfig external;
};

// Accepts the canonical names plus the short forms `pendulum` and `cup`.
// Throws ConfigError for unknown names.
std::string CanonicalEnvName(std::string_view name);

std::unique_ptr<Environment> MakeEnvironment(const EnvConfig& config);

// A factory that builds a fresh instance per call, for worker pools.
EnvFactory MakeEnvFactory(const EnvConfig& config);

}  // namespace policyforge::envs

#endif  // POLICYFORGE_ENVS_FACTORY_H_
