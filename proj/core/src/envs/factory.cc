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

#include "policyforge/envs/factory.h"

#include "policyforge/common/errors.h"
#include "policyforge/envs/ball_in_cup.h"
#include "policyforge/envs/pendulum.h"

namespace policyforge::envs {

std::string CanonicalEnvName(std::string_view name) {
  if (name == "pendulum_swingup" || name == "pendulum") return "pendulum_swingup";
  if (name == "ball_in_cup" || name == "cup") return "ball_in_cup";
  if (name == "external") return "external";
  throw ConfigError("unknown environment '" + std::string(name) +
                    "' (expected pendulum_swingup, ball_in_cup or external)");
}

std::unique_ptr<Environment> MakeEnvironment(const EnvConfig& config) {
  if (config.horizon < 1) throw ConfigError("horizon must be at least 1");
  const std::string name = CanonicalEnvName(config.name);
  if (name == "pendulum_swingup") return std::make_unique<Pendulum>(config.horizon);
  if (name == "ball_in_cup") return std::make_unique<BallInCup>(config.horizon);
  ExternalConfig external = config.external;
  return std::make_unique<ExternalEnv>(external);
}

EnvFactory MakeEnvFactory(const EnvConfig& config) {
  CanonicalEnvName(config.name);
  return [config] { return MakeEnvironment(config); };
}

}  // namespace policyforge::envs
