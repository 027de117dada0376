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

#include "policyforge/generation/task.h"

#include "policyforge/lang/parser.h"

namespace policyforge::generation {

void Validate(const TaskSpec& task) {
  if (task.description.empty()) throw ConfigError("task.description must not be empty");
  if (task.episodes < 1) throw ConfigError("task.episodes must be at least 1");
  if (task.env.horizon < 1) throw ConfigError("task.horizon must be at least 1");
  if (task.gfo_budget < 0) throw ConfigError("gfo.budget must not be negative");
  if (task.generator.batch_size < 1) throw ConfigError("generator.batch_size must be at least 1");
  if (task.generator.temperature < 0.0) {
    throw ConfigError("generator.temperature must not be negative");
  }
  if (task.database.islands < 1) throw ConfigError("database.islands must be at least 1");
  if (task.database.reset_period < 0) {
    throw ConfigError("database.reset_period must not be negative");
  }
  if (task.starter_code.empty()) throw ConfigError("task.starter must not be empty");
  envs::CanonicalEnvName(task.env.name);
  lang::Parse(task.starter_code);
}

}  // namespace policyforge::generation
