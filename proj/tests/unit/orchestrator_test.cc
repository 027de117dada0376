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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "policyforge/common/errors.h"
#include "policyforge/database/database.h"
#include "policyforge/generation/extract.h"
#include "policyforge/generation/generator.h"
#include "policyforge/orchestrator/bounded_queue.h"
#include "policyforge/orchestrator/logs.h"
#include "policyforge/orchestrator/orchestrator.h"
#include "support/corpus.h"

namespace policyforge::orchestrator {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const char kStarter[] =
    "def policy(obs):\n"
    "  if obs[0] > 0.5:\n"
    "    return -2.0 * obs[2]\n"
    "  else:\n"
    "    return 1.0\n";

RunConfig SmallConfig(int generations) {
  RunConfig c;
  c.task.description = "Swing up the pendulum.";
  c.task.starter_code = kStarter;
  c.task.env.horizon = 100;
  c.task.episodes = 2;
  c.task.gfo_budget = 8;
  c.task.generator.batch_size = 3;
  c.max_generations = generations;
  c.workers = 1;
  return c;
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("pf_orch_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t Lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// A program with `n` structurally distinct terms.
std::string Chain(int n) {
  std::string body = "obs[0]";
  for (int i = 1; i < n; ++i) body = "(" + body + " + obs[" + std::to_string(i % 3) + "])";
  return "```python\ndef policy_v2(obs):\n  return " + body + "\n```";
}

// Emits fresh chains with a fixed latency.
class ChainGenerator : public generation::Generator {
 public:
  explicit ChainGenerator(double latency_s = 0.0) : latency_s_(latency_s) {}
  std::vector<std::string> Sample(const generation::Prompt&, int n, std::uint64_t) override {
    if (latency_s_ > 0) std::this_thread::sleep_for(std::chrono::duration<double>(latency_s_));
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(Chain(++next_));
    return out;
  }

 private:
  double latency_s_;
  int next_ = 1;
};

// Scores a program by its length; optionally sleeps.
std::function<CandidateResult(const generation::Extraction&, envs::Environment&, std::uint64_t)>
LengthEvaluator(double sleep_s = 0.0) {
  return [sleep_s](const generation::Extraction& ex, envs::Environment&, std::uint64_t) {
    if (sleep_s > 0) std::this_thread::sleep_for(std::chrono::duration<double>(sleep_s));
    CandidateResult r;
    const double score = static_cast<double>(ex.source.size());
    r.entry = database::MakeEntry(ex.source, score, score, 0);
    r.hash = r.entry->hash;
    r.n_params = r.entry->best_theta.size();
    r.pre_gfo_score = r.post_gfo_score = score;
    r.gfo_evaluations = 1;
    return r;
  };
}

RunHooks StubHooks(double gen_latency = 0.0, double eval_sleep = 0.0) {
  RunHooks h;
  h.generator = std::make_unique<ChainGenerator>(gen_latency);
  h.evaluator = LengthEvaluator(eval_sleep);
  return h;
}

void ExpectMonotone(const RunSummary& s) {
  for (std::size_t i = 1; i < s.best_so_far.size(); ++i) {
    EXPECT_GE(s.best_so_far[i].global_best, s.best_so_far[i - 1].global_best) << i;
    EXPECT_EQ(s.best_so_far[i].generation, static_cast<int>(i));
  }
}

TEST(BoundedQueueTest, FifoAndClose) {
  BoundedQueue<int> q(2);
  EXPECT_TRUE(q.Push(1));
  EXPECT_TRUE(q.Push(2));
  std::thread t([&] { EXPECT_TRUE(q.Push(3)); });  // blocks until a pop
  EXPECT_EQ(q.Pop(), 1);
  t.join();
  q.Close();
  EXPECT_FALSE(q.Push(4));
  EXPECT_EQ(q.Pop(), 2);
  EXPECT_EQ(q.Pop(), 3);
  EXPECT_FALSE(q.Pop().has_value());
}

TEST(ValidateTest, RejectsBadRunSettings) {
  RunConfig c = SmallConfig(1);
  EXPECT_NO_THROW(Validate(c));
  RunConfig bad = c;
  bad.max_generations.reset();
  EXPECT_THROW(Validate(bad), ConfigError);
  bad.wall_clock_s = 2.0;
  EXPECT_NO_THROW(Validate(bad));
  bad = c;
  bad.queue_capacity = 0;
  EXPECT_THROW(Validate(bad), ConfigError);
  bad = c;
  bad.prompt_lag = -1;
  EXPECT_THROW(Validate(bad), ConfigError);
  bad = c;
  bad.max_generations = -3;
  EXPECT_THROW(Validate(bad), ConfigError);
  EXPECT_GE(ResolveWorkers(RunConfig{}), 1);
}

TEST(RunTest, ZeroGenerationsLeavesOnlyTheStarter) {
  const RunSummary s = orchestrator::Run(SmallConfig(0), StubHooks());
  EXPECT_TRUE(s.records.empty());
  EXPECT_EQ(s.generations, 0);
  EXPECT_EQ(s.database.size(), 4u);
  ASSERT_EQ(s.best_so_far.size(), 1u);
  EXPECT_DOUBLE_EQ(s.best_so_far[0].global_best, s.starter_score);
  ASSERT_TRUE(s.best.has_value());
  EXPECT_EQ(s.best->source, kStarter);
  EXPECT_EQ(s.stop_reason, "max_generations");
}

TEST(RunTest, MockRunImprovesAndKeepsInvariants) {
  RunConfig c = SmallConfig(30);
  const RunSummary s = orchestrator::Run(c);
  EXPECT_EQ(s.generations, 30);
  EXPECT_EQ(s.records.size(), 90u);
  ASSERT_TRUE(s.best.has_value());
  EXPECT_GE(s.best->score, s.starter_score);
  ExpectMonotone(s);
  const RunTotals& t = s.totals;
  EXPECT_EQ(t.candidates, 90);
  EXPECT_EQ(t.inserted + t.rejected_duplicate + t.rejected_parse + t.faulted, t.candidates);
  EXPECT_GT(t.inserted, 0);
  for (const CandidateRecord& r : s.records) {
    if (r.disposition == Disposition::kInserted) {
      EXPECT_GE(r.post_gfo_score, r.pre_gfo_score) << r.hash;
      EXPECT_LE(r.gfo_evaluations, c.task.gfo_budget);
      EXPECT_FALSE(r.hash.empty());
    }
  }
  // Every stored entry's source reproduces its hash and score ordering.
  for (int i = 0; i < s.database.num_islands(); ++i) {
    for (const auto& [hash, e] : s.database.island(i)) {
      EXPECT_EQ(database::MakeEntry(e.source, 0, 0, 0).hash, hash);
      EXPECT_LE(e.score, s.best->score);
    }
  }
}

TEST(RunTest, RecordsAreInGenerationAndCandidateOrder) {
  RunConfig c = SmallConfig(12);
  c.queue_capacity = 1;
  c.workers = 1;
  const RunSummary s = orchestrator::Run(c, StubHooks());
  ASSERT_EQ(s.records.size(), 36u);
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    EXPECT_EQ(s.records[i].generation, static_cast<int>(i / 3) + 1);
    EXPECT_EQ(s.records[i].index, static_cast<int>(i % 3));
  }
  // Chains grow monotonically, so every candidate is new and better.
  EXPECT_EQ(s.totals.inserted, 36);
  EXPECT_EQ(s.best->source, generation::ExtractFunction(Chain(37)).source);
}

TEST(RunTest, LogsMatchTheSummary) {
  RunConfig c = SmallConfig(6);
  c.out_dir = TempDir("logs").string();
  const RunSummary s = orchestrator::Run(c);
  const fs::path dir = c.out_dir;
  const std::string candidates = Slurp(dir / "candidates.csv");
  EXPECT_EQ(Lines(candidates), s.records.size() + 1);
  EXPECT_EQ(candidates.rfind(
                "generation,candidate,island,hash,disposition,pre_gfo_score,post_gfo_score,"
                "n_params,gfo_evaluations,reason\r\n",
                0),
            0u);
  EXPECT_EQ(Lines(Slurp(dir / "timings.csv")), s.records.size() + 1);
  const std::string best = Slurp(dir / "best_so_far.csv");
  EXPECT_EQ(Lines(best), s.best_so_far.size() + 1);
  EXPECT_EQ(best.rfind("generation,global_best,island_0,island_1,island_2,island_3\r\n", 0), 0u);
  EXPECT_EQ(Slurp(dir / "best_policy.txt"), s.best->source);

  const auto run = nlohmann::json::parse(Slurp(dir / "run.json"));
  EXPECT_EQ(run["format"], "policyforge-run");
  EXPECT_EQ(run["totals"]["generations"], 6);
  EXPECT_EQ(run["totals"]["candidates"], s.totals.candidates);
  EXPECT_EQ(run["stop_reason"], "max_generations");
  EXPECT_DOUBLE_EQ(run["best_score"].get<double>(), s.best->score);
  fs::remove_all(dir);
}

TEST(RunTest, EqualSeedsGiveIdenticalLogs) {
  std::string first;
  for (int workers : {1, 3}) {
    RunConfig c = SmallConfig(8);
    c.workers = workers;
    c.seed = 5;
    c.out_dir = TempDir("det" + std::to_string(workers)).string();
    orchestrator::Run(c);
    const std::string text = Slurp(fs::path(c.out_dir) / "candidates.csv") +
                             Slurp(fs::path(c.out_dir) / "best_so_far.csv");
    if (first.empty()) {
      first = text;
    } else {
      EXPECT_EQ(text, first);
    }
    fs::remove_all(c.out_dir);
  }
}

TEST(RunTest, DifferentSeedsDiverge) {
  RunConfig a = SmallConfig(5);
  RunConfig b = a;
  b.seed = 1;
  const RunSummary sa = orchestrator::Run(a);
  const RunSummary sb = orchestrator::Run(b);
  std::vector<std::string> ha, hb;
  for (const auto& r : sa.records) ha.push_back(r.hash);
  for (const auto& r : sb.records) hb.push_back(r.hash);
  EXPECT_NE(ha, hb);
}

TEST(RunTest, DeadlineNeverSplitsABatch) {
  RunConfig c = SmallConfig(0);
  c.max_generations.reset();
  c.wall_clock_s = 0.5;
  c.workers = 2;
  const RunSummary s = orchestrator::Run(c, StubHooks(0.04, 0.01));
  EXPECT_EQ(s.stop_reason, "wall_clock");
  EXPECT_GT(s.generations, 0);
  std::map<int, std::vector<int>> by_gen;
  std::set<std::pair<int, int>> seen;
  for (const auto& r : s.records) {
    EXPECT_TRUE(seen.insert({r.generation, r.index}).second);
    by_gen[r.generation].push_back(r.index);
  }
  ASSERT_EQ(static_cast<int>(by_gen.size()), s.generations);
  int expect_g = 1;
  for (const auto& [g, idx] : by_gen) {
    EXPECT_EQ(g, expect_g++);
    EXPECT_EQ(idx, (std::vector<int>{0, 1, 2}));
  }
  EXPECT_EQ(s.best_so_far.size(), static_cast<std::size_t>(s.generations) + 1);
  EXPECT_LT(s.wall_time_s, 2.0);
}

TEST(RunTest, StopAtScoreStopsWithinTheLag) {
  RunConfig c = SmallConfig(100);
  // Chain lengths grow by about 12 characters per term.
  const double start = static_cast<double>(generation::ExtractFunction(Chain(2)).source.size());
  c.stop_at_score = start + 12.0 * 15;
  const RunSummary s = orchestrator::Run(c, StubHooks());
  EXPECT_EQ(s.stop_reason, "stop_at_score");
  ASSERT_TRUE(s.generations_to_target.has_value());
  EXPECT_GE(s.best->score, *c.stop_at_score);
  EXPECT_LE(s.generations, *s.generations_to_target + c.prompt_lag);
  EXPECT_GT(*s.generations_to_target, 1);
}

TEST(RunTest, EvaluatorExceptionsBecomeFaults) {
  RunHooks h;
  h.generator = std::make_unique<ChainGenerator>();
  h.evaluator = [](const generation::Extraction&, envs::Environment&,
                   std::uint64_t) -> CandidateResult { throw std::runtime_error("boom"); };
  const RunSummary s = orchestrator::Run(SmallConfig(3), std::move(h));
  EXPECT_EQ(s.totals.faulted, 9);
  for (const auto& r : s.records) {
    EXPECT_EQ(r.disposition, Disposition::kFaulted);
    EXPECT_EQ(r.reason, "boom");
  }
  EXPECT_EQ(s.database.size(), 4u);
}

TEST(RunTest, DuplicatesAndParseFailuresAreRecorded) {
  class Fixed : public generation::Generator {
   public:
    std::vector<std::string> Sample(const generation::Prompt&, int, std::uint64_t) override {
      return {"```python\ndef policy_v2(obs):\n  return 2.0 * obs[0]\n```",
              "```python\ndef policy_v2(obs):\n  return 3.0 * obs[0]\n```", "no code today"};
    }
  };
  RunHooks h;
  h.generator = std::make_unique<Fixed>();
  RunConfig c = SmallConfig(1);
  c.task.database.islands = 1;
  const RunSummary s = orchestrator::Run(c, std::move(h));
  ASSERT_EQ(s.records.size(), 3u);
  EXPECT_EQ(s.records[0].disposition, Disposition::kInserted);
  EXPECT_EQ(s.records[1].disposition, Disposition::kRejectedDuplicate);
  EXPECT_EQ(s.records[1].hash, s.records[0].hash);
  EXPECT_EQ(s.records[2].disposition, Disposition::kRejectedParse);
  EXPECT_EQ(s.records[2].reason, "no function found");
}

TEST(RunTest, StarterThatFaultsIsAConfigError) {
  RunConfig c = SmallConfig(1);
  c.task.starter_code = "def policy(obs):\n  return obs[7]\n";
  EXPECT_THROW(orchestrator::Run(c, StubHooks()), ConfigError);
}

TEST(RunTest, UnreachableGeneratorFailsBeforeTheFirstGeneration) {
  RunConfig c = SmallConfig(1);
  c.task.generator.kind = "http";
  c.task.generator.endpoint = "http://127.0.0.1:9/v1";
  c.task.generator.request_timeout_s = 1.0;
  EXPECT_THROW(orchestrator::Run(c), generation::GeneratorUnavailable);
}

TEST(RunTest, PipelineOverlapsGenerationAndEvaluation) {
  RunConfig c = SmallConfig(6);
  c.task.generator.batch_size = 1;
  c.prompt_lag = 0;
  const RunSummary serial = orchestrator::Run(c, StubHooks(0.2, 0.15));
  c.prompt_lag = 1;
  const RunSummary piped = orchestrator::Run(c, StubHooks(0.2, 0.15));
  // Serialized is about 6 * 0.35 s, pipelined about 6 * 0.2 + 0.15 s.
  EXPECT_GT(serial.pipeline_time_s, 1.9);
  EXPECT_LT(piped.pipeline_time_s, 0.8 * serial.pipeline_time_s);
  EXPECT_EQ(serial.records.size(), piped.records.size());
}

}  // namespace
}  // namespace policyforge::orchestrator
