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

#ifndef POLICYFORGE_ORCHESTRATOR_ORCHESTRATOR_H_
#define POLICYFORGE_ORCHESTRATOR_ORCHESTRATOR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "policyforge/database/database.h"
#include "policyforge/envs/environment.h"
#include "policyforge/generation/generator.h"
#include "policyforge/generation/task.h"

namespace policyforge::orchestrator {

struct RunConfig {
  generation::TaskSpec task;
  int queue_capacity = 4;  // batches waiting for evaluation
  int workers = 0;         // 0: hardware threads minus one, at least 1
  // Stopping rules; at least one of the first two must be set. A generation
  // is one prompt -> batch -> evaluate -> insert cycle.
  std::optional<int> max_generations;
  double wall_clock_s = 0.0;  // 0: no wall-clock limit
  // Stop once the global best reaches this score. Ignored when unset.
  std::optional<double> stop_at_score;
  // Prompts for generation g are sampled after generation g - 1 - lag has
  // been committed. Lag 1 overlaps generation with evaluation; lag 0 runs
  // the two strictly in turn.
  int prompt_lag = 1;
  std::uint64_t seed = 0;
  std::string out_dir;  // empty: no files are written
};

// Throws ConfigError. Also validates the task.
void Validate(const RunConfig& config);

// Number of evaluation threads `config.workers` resolves to.
int ResolveWorkers(const RunConfig& config);

enum class Disposition { kInserted, kRejectedDuplicate, kRejectedParse, kFaulted };
std::string_view DispositionName(Disposition d);

struct CandidateRecord {
  int generation = 0;  // 1-based; 0 is the starter
  int index = 0;       // position within the batch
  int island = 0;
  std::string hash;    // empty when the candidate did not parse
  Disposition disposition = Disposition::kRejectedParse;
  double pre_gfo_score = 0.0;
  double post_gfo_score = 0.0;
  std::size_t n_params = 0;
  int gfo_evaluations = 0;
  std::string reason;  // rejection or fault message
  double generation_ms = 0.0;  // latency of the batch this came from
  double evaluation_ms = 0.0;
};

struct BestSoFarRow {
  int generation = 0;
  double global_best = 0.0;
  std::vector<double> island_best;
};

// What evaluating one parsed candidate produced, before database insertion.
struct CandidateResult {
  bool faulted = false;
  std::string reason;
  std::string hash;
  std::size_t n_params = 0;
  double pre_gfo_score = 0.0;
  double post_gfo_score = 0.0;
  int gfo_evaluations = 0;
  std::optional<database::Entry> entry;  // set unless faulted
};

// Parameterizes, optimizes and scores one candidate on common episode seeds.
// A fault at the candidate's own literals marks it faulted; parameter
// vectors that fault during optimization score -infinity. Never throws.
CandidateResult EvaluateCandidate(const generation::TaskSpec& task, envs::Environment& env,
                                  const lang::PolicyAst& ast, std::string_view source,
                                  std::uint64_t gfo_seed);

// Replaceable stages, for tests and timing experiments.
struct RunHooks {
  std::unique_ptr<generation::Generator> generator;  // default: MakeGenerator
  std::function<CandidateResult(const generation::Extraction&, envs::Environment&,
                                std::uint64_t gfo_seed)>
      evaluator;  // default: EvaluateCandidate
  envs::EnvFactory env_factory;  // default: MakeEnvFactory(task.env)
};

struct RunTotals {
  int candidates = 0;
  int inserted = 0;
  int rejected_duplicate = 0;
  int rejected_parse = 0;
  int faulted = 0;
};

struct RunSummary {
  std::vector<CandidateRecord> records;
  std::vector<BestSoFarRow> best_so_far;  // row 0 is the seeded database
  database::ProgramDatabase database;
  std::optional<database::Entry> best;
  double starter_score = 0.0;
  int generations = 0;  // completed cycles
  // First generation whose commit brought the best to stop_at_score.
  std::optional<int> generations_to_target;
  std::string stop_reason;  // max_generations | wall_clock | stop_at_score
  RunTotals totals;
  int workers = 1;
  double wall_time_s = 0.0;      // whole run
  double pipeline_time_s = 0.0;  // first prompt to last commit
};

// Seeds every island with the starter code, then runs the generation loop
// until a stopping rule fires. Writes the output files as it goes when
// out_dir is set. Throws ConfigError for a bad config or a starter that
// faults, IoError when out_dir is not writable, and GeneratorUnavailable
// when the startup probe fails. Per-candidate failures are recorded.
RunSummary Run(const RunConfig& config, RunHooks hooks = {});

}  // namespace policyforge::orchestrator

#endif  // POLICYFORGE_ORCHESTRATOR_ORCHESTRATOR_H_
