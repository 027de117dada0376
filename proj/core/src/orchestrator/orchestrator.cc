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

#include "policyforge/orchestrator/orchestrator.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <future>
#include <limits>
#include <thread>
#include <utility>

#include <spdlog/spdlog.h>

#include "policyforge/common/rng.h"
#include "policyforge/envs/factory.h"
#include "policyforge/envs/rollout.h"
#include "policyforge/generation/prompt.h"
#include "policyforge/gfo/optimizer.h"
#include "policyforge/lang/hash.h"
#include "policyforge/lang/parameterize.h"
#include "policyforge/orchestrator/bounded_queue.h"
#include "policyforge/orchestrator/logs.h"

namespace policyforge::orchestrator {
namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kPairTag = 0x70616972;  // "pair"
constexpr std::uint64_t kGenTag = 0x67656e;     // "gen"
constexpr std::uint64_t kGfoTag = 0x67666f;     // "gfo"

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string Timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct PromptJob {
  int generation = 0;
  int island = 0;
  generation::Prompt prompt;
  std::uint64_t seed = 0;
};

struct BatchMessage {
  int generation = 0;
  int island = 0;
  bool skipped = false;  // the deadline passed before generation started
  generation::CandidateBatch batch;
};

// Fixed set of threads, each owning an environment instance.
class WorkerPool {
 public:
  using Task = std::function<void(envs::Environment&)>;

  WorkerPool(int workers, const envs::EnvFactory& factory)
      : tasks_(static_cast<std::size_t>(std::max(workers, 1)) * 16) {
    std::vector<std::unique_ptr<envs::Environment>> envs;
    for (int i = 0; i < workers; ++i) envs.push_back(factory());
    for (auto& env : envs) {
      threads_.emplace_back([this, env = std::move(env)]() mutable {
        while (std::optional<Task> task = tasks_.Pop()) (*task)(*env);
      });
    }
  }
  ~WorkerPool() {
    tasks_.Close();
    for (std::thread& t : threads_) t.join();
  }
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  void Submit(Task task) { tasks_.Push(std::move(task)); }

 private:
  BoundedQueue<Task> tasks_;
  std::vector<std::thread> threads_;
};

void Tally(RunTotals& totals, Disposition d) {
  ++totals.candidates;
  switch (d) {
    case Disposition::kInserted: ++totals.inserted; break;
    case Disposition::kRejectedDuplicate: ++totals.rejected_duplicate; break;
    case Disposition::kRejectedParse: ++totals.rejected_parse; break;
    case Disposition::kFaulted: ++totals.faulted; break;
  }
}

}  // namespace

std::string_view DispositionName(Disposition d) {
  switch (d) {
    case Disposition::kInserted: return "inserted";
    case Disposition::kRejectedDuplicate: return "rejected-duplicate";
    case Disposition::kRejectedParse: return "rejected-parse";
    case Disposition::kFaulted: return "faulted";
  }
  return "?";
}

void Validate(const RunConfig& config) {
  generation::Validate(config.task);
  if (config.queue_capacity < 1) throw ConfigError("run.queue_capacity must be at least 1");
  if (config.workers < 0) throw ConfigError("run.workers must not be negative");
  if (config.prompt_lag < 0) throw ConfigError("run.prompt_lag must not be negative");
  if (config.wall_clock_s < 0.0 || !std::isfinite(config.wall_clock_s)) {
    throw ConfigError("run.wall_clock_s must be a non-negative number");
  }
  if (config.max_generations && *config.max_generations < 0) {
    throw ConfigError("run.max_generations must not be negative");
  }
  if (!config.max_generations && config.wall_clock_s <= 0.0) {
    throw ConfigError("set run.max_generations or run.wall_clock_s");
  }
}

int ResolveWorkers(const RunConfig& config) {
  if (config.workers > 0) return config.workers;
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, hw - 1);
}

CandidateResult EvaluateCandidate(const generation::TaskSpec& task, envs::Environment& env,
                                  const lang::PolicyAst& ast, std::string_view source,
                                  std::uint64_t gfo_seed) {
  CandidateResult r;
  try {
    r.hash = lang::StructuralHash(ast);
    const lang::ParamTemplate tmpl = lang::ExtractParameters(ast);
    r.n_params = tmpl.n_params();
    const envs::ScoreReport pre =
        envs::Score(env, tmpl, tmpl.theta0, task.episodes, task.seed_base);
    r.pre_gfo_score = pre.mean_return;
    r.post_gfo_score = pre.mean_return;
    r.gfo_evaluations = 1;
    if (pre.faulted_episodes > 0) {
      r.faulted = true;
      r.reason = pre.first_fault;
      return r;
    }
    // The optimizer's first call is theta0, which is already scored.
    bool first = true;
    gfo::Objective objective{[&](std::span<const double> theta) {
                               if (first) {
                                 first = false;
                                 if (std::equal(theta.begin(), theta.end(),
                                                tmpl.theta0.begin(), tmpl.theta0.end())) {
                                   return pre.mean_return;
                                 }
                               }
                               const envs::ScoreReport s = envs::Score(
                                   env, tmpl, theta, task.episodes, task.seed_base);
                               return s.faulted_episodes > 0 ? kNegInf : s.mean_return;
                             },
                             tmpl.n_params()};
    const gfo::OptResult opt =
        gfo::Optimize(task.gfo_method, objective, tmpl.theta0, task.gfo_budget, gfo_seed);
    std::vector<double> theta = tmpl.theta0;
    if (opt.evaluated && opt.best_score > pre.mean_return) {
      theta = opt.best_theta;
      r.post_gfo_score = opt.best_score;
    }
    r.gfo_evaluations = std::max(1, opt.evaluations_used);
    std::string tuned = lang::RewriteSource(source, tmpl, theta);
    r.entry = database::MakeEntry(std::move(tuned), r.post_gfo_score, r.pre_gfo_score, 0);
    r.entry->best_theta = theta;
  } catch (const std::exception& e) {
    r.faulted = true;
    r.reason = e.what();
    r.entry.reset();
  }
  return r;
}

RunSummary Run(const RunConfig& config, RunHooks hooks) {
  Validate(config);
  const generation::TaskSpec& task = config.task;
  const Clock::time_point run_start = Clock::now();
  const std::string started_at = Timestamp();
  const Clock::time_point deadline =
      config.wall_clock_s > 0.0
          ? run_start + std::chrono::duration_cast<Clock::duration>(
                            std::chrono::duration<double>(config.wall_clock_s))
          : Clock::time_point::max();

  std::optional<RunLog> log;
  if (!config.out_dir.empty()) log.emplace(config.out_dir, task.database.islands);

  envs::EnvFactory factory =
      hooks.env_factory ? hooks.env_factory : envs::MakeEnvFactory(task.env);
  std::unique_ptr<envs::Environment> env = factory();
  std::unique_ptr<generation::Generator> generator = std::move(hooks.generator);
  if (!generator) {
    generator = generation::MakeGenerator(
        task.generator, {env->spec().obs_dim, env->spec().act_dim});
  }
  generator->Probe();
  auto evaluator = hooks.evaluator;
  if (!evaluator) {
    evaluator = [&task](const generation::Extraction& ex, envs::Environment& e,
                        std::uint64_t seed) {
      return EvaluateCandidate(task, e, *ex.ast, ex.source, seed);
    };
  }

  RunSummary summary;
  summary.workers = ResolveWorkers(config);
  summary.database = database::ProgramDatabase(task.database);
  database::ProgramDatabase& db = summary.database;

  // Seed every island with the starter, scored as written.
  database::Entry starter = database::MakeEntry(task.starter_code, 0.0, 0.0, 0);
  const envs::RolloutResult probe =
      envs::Rollout(*env, *starter.tmpl, starter.tmpl->theta0, task.seed_base);
  if (probe.faulted) throw ConfigError("starter code faults on the first episode: " + probe.fault);
  const envs::ScoreReport starter_report = envs::Score(
      *env, *starter.tmpl, starter.tmpl->theta0, task.episodes, task.seed_base);
  if (starter_report.faulted_episodes > 0) {
    throw ConfigError("starter code faults: " + starter_report.first_fault);
  }
  starter.score = starter.pre_gfo_score = starter_report.mean_return;
  summary.starter_score = starter.score;
  for (int i = 0; i < db.num_islands(); ++i) db.Insert(i, starter);
  spdlog::info("seeded {} islands with the starter (score {:.3f}), {} workers",
               db.num_islands(), starter.score, summary.workers);

  auto record_row = [&](int g) {
    BestSoFarRow row{g, db.best_score(), db.IslandBestScores()};
    if (log) log->Append(row);
    summary.best_so_far.push_back(std::move(row));
  };
  record_row(0);

  bool target_reached = false;
  auto check_target = [&](int g) {
    if (config.stop_at_score && !target_reached && db.best_score() >= *config.stop_at_score) {
      target_reached = true;
      summary.generations_to_target = g;
    }
  };
  check_target(0);

  BoundedQueue<PromptJob> prompts(static_cast<std::size_t>(config.prompt_lag) + 2);
  BoundedQueue<BatchMessage> batches(static_cast<std::size_t>(config.queue_capacity));
  const int batch_size = task.generator.batch_size;

  std::thread producer([&] {
    while (std::optional<PromptJob> job = prompts.Pop()) {
      BatchMessage msg;
      msg.generation = job->generation;
      msg.island = job->island;
      if (Clock::now() >= deadline) {
        msg.skipped = true;
      } else {
        try {
          msg.batch = generation::GenerateBatch(*generator, job->prompt, batch_size, job->seed);
        } catch (const std::exception& e) {
          spdlog::error("generation {} failed: {}", job->generation, e.what());
        }
        if (msg.batch.candidates.empty()) {
          spdlog::warn("generation {} produced an empty batch", job->generation);
        }
      }
      if (!batches.Push(std::move(msg))) break;
    }
  });

  // Prompts are issued in generation order until a stopping rule fires.
  int next_generation = 1;
  int issued = 0;
  bool issuing = true;
  std::string stop_reason;
  auto issue_through = [&](int last) {
    while (issuing && next_generation <= last) {
      const int g = next_generation;
      if (target_reached) {
        stop_reason = "stop_at_score";
      } else if (config.max_generations && g > *config.max_generations) {
        stop_reason = "max_generations";
      } else if (Clock::now() >= deadline) {
        stop_reason = "wall_clock";
      }
      if (!stop_reason.empty()) {
        issuing = false;
        break;
      }
      const std::uint64_t pair_seed = DeriveSeed({config.seed, static_cast<std::uint64_t>(g), kPairTag});
      const database::PromptPair pair = db.SamplePair(pair_seed);
      PromptJob job;
      job.generation = g;
      job.island = pair.island;
      job.prompt = generation::BuildPrompt(task.description, pair);
      job.seed = DeriveSeed({config.seed, static_cast<std::uint64_t>(g), kGenTag});
      prompts.Push(std::move(job));
      ++issued;
      ++next_generation;
    }
  };

  const Clock::time_point pipeline_start = Clock::now();
  issue_through(1 + config.prompt_lag);
  {
    WorkerPool pool(summary.workers, factory);
    int received = 0;
    while (received < issued) {
      std::optional<BatchMessage> msg = batches.Pop();
      if (!msg) break;
      ++received;
      if (msg->skipped) {
        if (stop_reason.empty()) stop_reason = "wall_clock";
        issuing = false;
        continue;
      }
      const int g = msg->generation;
      const double generation_ms = msg->batch.latency_s * 1000.0;
      std::vector<generation::Candidate>& candidates = msg->batch.candidates;

      std::vector<std::future<std::pair<CandidateResult, double>>> futures(candidates.size());
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        if (!candidates[k].extraction.ok()) continue;
        auto promise = std::make_shared<std::promise<std::pair<CandidateResult, double>>>();
        futures[k] = promise->get_future();
        const std::uint64_t gfo_seed = DeriveSeed(
            {config.seed, static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(k), kGfoTag});
        const generation::Extraction* ex = &candidates[k].extraction;
        pool.Submit([promise, ex, gfo_seed, &evaluator](envs::Environment& e) {
          const Clock::time_point start = Clock::now();
          CandidateResult r;
          try {
            r = evaluator(*ex, e, gfo_seed);
          } catch (const std::exception& err) {
            r.faulted = true;
            r.reason = err.what();
          }
          promise->set_value({std::move(r), MillisSince(start)});
        });
      }

      // Commit in candidate order so the database evolves deterministically.
      for (std::size_t k = 0; k < candidates.size(); ++k) {
        CandidateRecord rec;
        rec.generation = g;
        rec.index = static_cast<int>(k);
        rec.island = msg->island;
        rec.generation_ms = generation_ms;
        if (!candidates[k].extraction.ok()) {
          rec.disposition = Disposition::kRejectedParse;
          rec.reason = candidates[k].extraction.rejection;
        } else {
          auto [r, eval_ms] = futures[k].get();
          rec.evaluation_ms = eval_ms;
          rec.hash = r.hash;
          rec.n_params = r.n_params;
          rec.pre_gfo_score = r.pre_gfo_score;
          rec.post_gfo_score = r.post_gfo_score;
          rec.gfo_evaluations = r.gfo_evaluations;
          rec.reason = r.reason;
          if (r.faulted || !r.entry) {
            rec.disposition = Disposition::kFaulted;
          } else {
            r.entry->generation = g;
            const bool known = db.island(msg->island).count(r.entry->hash) > 0;
            const database::InsertOutcome outcome = db.Insert(msg->island, std::move(*r.entry));
            if (outcome != database::InsertOutcome::kRejected) {
              rec.disposition = Disposition::kInserted;
            } else if (known) {
              rec.disposition = Disposition::kRejectedDuplicate;
            } else {
              rec.disposition = Disposition::kFaulted;
              rec.reason = "non-finite score or parameter";
            }
          }
        }
        Tally(summary.totals, rec.disposition);
        if (log) log->Append(rec);
        summary.records.push_back(std::move(rec));
      }
      summary.generations = g;
      db.MaybeReset(g);
      record_row(g);
      check_target(g);
      if (log) log->Flush();
      spdlog::debug("generation {} (island {}): {} candidates, best {:.3f}", g, msg->island,
                    candidates.size(), db.best_score());
      issue_through(g + 1 + config.prompt_lag);
    }
    summary.pipeline_time_s =
        std::chrono::duration<double>(Clock::now() - pipeline_start).count();
  }
  prompts.Close();
  batches.Close();
  producer.join();

  if (target_reached) stop_reason = "stop_at_score";
  if (stop_reason.empty()) stop_reason = "max_generations";
  summary.stop_reason = stop_reason;
  summary.best = db.Best();
  summary.wall_time_s = std::chrono::duration<double>(Clock::now() - run_start).count();
  if (log) log->Finish(config, summary, started_at, Timestamp());
  spdlog::info("run finished after {} generations ({}): best {:.3f}, {} candidates",
               summary.generations, summary.stop_reason, db.best_score(),
               summary.totals.candidates);
  return summary;
}

}  // namespace policyforge::orchestrator
