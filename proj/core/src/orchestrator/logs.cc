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

#include "policyforge/orchestrator/logs.h"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "policyforge/common/errors.h"
#include "policyforge/gfo/optimizer.h"

#ifndef POLICYFORGE_VERSION
#define POLICYFORGE_VERSION "0.0.0"
#endif

namespace policyforge::orchestrator {
namespace {

using nlohmann::json;

constexpr int kRunManifestVersion = 1;

std::ofstream OpenFile(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void WriteRow(std::ofstream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << CsvField(fields[i]);
  }
  out << "\r\n";
}

json Number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string CsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string FormatScore(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::vector<std::string> CandidateColumns() {
  return {"generation",     "candidate",      "island",   "hash",
          "disposition",    "pre_gfo_score",  "post_gfo_score",
          "n_params",       "gfo_evaluations", "reason"};
}

std::vector<std::string> TimingColumns() {
  return {"generation", "candidate", "generation_ms", "evaluation_ms"};
}

std::vector<std::string> BestSoFarColumns(int islands) {
  std::vector<std::string> cols = {"generation", "global_best"};
  for (int i = 0; i < islands; ++i) cols.push_back("island_" + std::to_string(i));
  return cols;
}

RunLog::RunLog(const std::string& out_dir, int islands) : dir_(out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create output directory " + dir_ + ": " + ec.message());
  const std::filesystem::path dir(dir_);
  candidates_ = OpenFile(dir / "candidates.csv");
  timings_ = OpenFile(dir / "timings.csv");
  best_so_far_ = OpenFile(dir / "best_so_far.csv");
  WriteRow(candidates_, CandidateColumns());
  WriteRow(timings_, TimingColumns());
  WriteRow(best_so_far_, BestSoFarColumns(islands));
  Flush();
}

void RunLog::Append(const CandidateRecord& r) {
  const bool scored = r.disposition != Disposition::kRejectedParse;
  WriteRow(candidates_, {std::to_string(r.generation), std::to_string(r.index),
                         std::to_string(r.island), r.hash,
                         std::string(DispositionName(r.disposition)),
                         scored ? FormatScore(r.pre_gfo_score) : "",
                         scored ? FormatScore(r.post_gfo_score) : "",
                         std::to_string(r.n_params), std::to_string(r.gfo_evaluations),
                         r.reason});
  char gen[32];
  char eval[32];
  std::snprintf(gen, sizeof gen, "%.3f", r.generation_ms);
  std::snprintf(eval, sizeof eval, "%.3f", r.evaluation_ms);
  WriteRow(timings_, {std::to_string(r.generation), std::to_string(r.index), gen, eval});
}

void RunLog::Append(const BestSoFarRow& row) {
  std::vector<std::string> fields = {std::to_string(row.generation),
                                     FormatScore(row.global_best)};
  for (double v : row.island_best) fields.push_back(FormatScore(v));
  WriteRow(best_so_far_, fields);
}

void RunLog::Flush() {
  candidates_.flush();
  timings_.flush();
  best_so_far_.flush();
  if (!candidates_ || !timings_ || !best_so_far_) throw IoError("write failed in " + dir_);
}

void RunLog::Finish(const RunConfig& config, const RunSummary& summary,
                    std::string_view started_at, std::string_view finished_at) {
  Flush();
  const generation::TaskSpec& task = config.task;
  json manifest = {
      {"format", "policyforge-run"},
      {"version", kRunManifestVersion},
      {"policyforge_version", POLICYFORGE_VERSION},
      {"started_at", started_at},
      {"finished_at", finished_at},
      {"config",
       {{"task",
         {{"description", task.description},
          {"env", task.env.name},
          {"horizon", task.env.horizon},
          {"episodes", task.episodes},
          {"seed_base", task.seed_base}}},
        {"gfo", {{"method", gfo::MethodName(task.gfo_method)}, {"budget", task.gfo_budget}}},
        {"generator",
         {{"kind", task.generator.kind},
          {"endpoint", task.generator.endpoint},
          {"model", task.generator.model},
          {"temperature", task.generator.temperature},
          {"max_tokens", task.generator.max_tokens},
          {"batch_size", task.generator.batch_size}}},
        {"database",
         {{"islands", task.database.islands},
          {"temperature", task.database.temperature},
          {"reset_period", task.database.reset_period}}},
        {"run",
         {{"seed", config.seed},
          {"max_generations",
           config.max_generations ? json(*config.max_generations) : json(nullptr)},
          {"wall_clock_s", config.wall_clock_s},
          {"stop_at_score", config.stop_at_score ? Number(*config.stop_at_score) : json(nullptr)},
          {"queue_capacity", config.queue_capacity},
          {"workers", summary.workers},
          {"prompt_lag", config.prompt_lag}}}}},
      {"seeds",
       {{"run", config.seed},
        {"episode_seed_base", task.seed_base},
        {"episodes", task.episodes}}},
      {"totals",
       {{"generations", summary.generations},
        {"candidates", summary.totals.candidates},
        {"inserted", summary.totals.inserted},
        {"rejected_duplicate", summary.totals.rejected_duplicate},
        {"rejected_parse", summary.totals.rejected_parse},
        {"faulted", summary.totals.faulted}}},
      {"stop_reason", summary.stop_reason},
      {"starter_score", Number(summary.starter_score)},
      {"best_score", Number(summary.database.best_score())},
      {"generations_to_target", summary.generations_to_target
                                    ? json(*summary.generations_to_target)
                                    : json(nullptr)},
      {"wall_time_s", summary.wall_time_s},
      {"pipeline_time_s", summary.pipeline_time_s}};
  if (summary.best) {
    manifest["best"] = {{"hash", summary.best->hash},
                        {"island", summary.best->island},
                        {"generation", summary.best->generation},
                        {"score", Number(summary.best->score)},
                        {"pre_gfo_score", Number(summary.best->pre_gfo_score)}};
  }
  const std::filesystem::path dir(dir_);
  std::ofstream run = OpenFile(dir / "run.json");
  run << manifest.dump(2) << '\n';
  if (summary.best) {
    std::ofstream best = OpenFile(dir / "best_policy.txt");
    best << summary.best->source;
    if (summary.best->source.empty() || summary.best->source.back() != '\n') best << '\n';
  }
  if (!run) throw IoError("write failed in " + dir_);
}

}  // namespace policyforge::orchestrator
