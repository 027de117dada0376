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

#ifndef POLICYFORGE_GENERATION_TASK_H_
#define POLICYFORGE_GENERATION_TASK_H_

#include <cstdint>
#include <string>

#include "policyforge/database/database.h"
#include "policyforge/envs/factory.h"
#include "policyforge/generation/generator.h"
#include "policyforge/gfo/optimizer.h"

namespace policyforge::generation {

// Everything the search needs to know about the problem.
struct TaskSpec {
  std::string description;
  std::string starter_code;
  envs::EnvConfig env;
  int episodes = 10;            // M, episodes per score
  std::uint64_t seed_base = 0;  // first episode seed, shared by all candidates
  gfo::Method gfo_method = gfo::Method::kEs;
  int gfo_budget = 100;
  GeneratorConfig generator;
  database::DatabaseConfig database;
};

// Throws ConfigError naming the offending field, or ParseError /
// UnsupportedConstruct for bad starter code.
void Validate(const TaskSpec& task);

}  // namespace policyforge::generation

#endif  // POLICYFORGE_GENERATION_TASK_H_
