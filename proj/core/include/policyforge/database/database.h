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

#ifndef POLICYFORGE_DATABASE_DATABASE_H_
#define POLICYFORGE_DATABASE_DATABASE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "policyforge/lang/parameterize.h"

namespace policyforge::database {

// A scored program. `source` has the best parameters written in, and
// `tmpl` is the template extracted from it.
struct Entry {
  std::string hash;
  std::string source;
  std::shared_ptr<const lang::ParamTemplate> tmpl;
  std::vector<double> best_theta;
  double score = 0.0;
  double pre_gfo_score = 0.0;
  int generation = 0;
  int island = 0;
  bool faulted = false;
};

// Parses `source` and fills hash, template and best_theta (the literals as
// written). Throws ParseError or UnsupportedConstruct.
Entry MakeEntry(std::string source, double score, double pre_gfo_score,
                int generation);

enum class InsertOutcome { kAdded, kReplaced, kRejected };

std::string_view InsertOutcomeName(InsertOutcome outcome);

struct DatabaseConfig {
  int islands = 4;
  // Softmax temperature for sampling within an island. Zero or negative
  // means adaptive: the island's score standard deviation, at least 1.
  double temperature = 0.0;
  // Every `reset_period` generations the worse half of the islands are
  // restarted from the global best. Zero disables resets.
  int reset_period = 0;
};

struct PromptPair {
  int island = 0;
  Entry worse;
  Entry better;
};

// Island-partitioned program store with structural deduplication. Not
// thread-safe: one owner performs all mutations and samples.
class ProgramDatabase {
 public:
  using Island = std::map<std::string, Entry>;

  explicit ProgramDatabase(DatabaseConfig config = {});

  const DatabaseConfig& config() const { return config_; }
  int num_islands() const { return static_cast<int>(islands_.size()); }
  const Island& island(int index) const { return islands_.at(static_cast<std::size_t>(index)); }
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  // Added when the hash is new to the island, replaced when it improves on
  // the stored score, otherwise rejected. Faulted entries and entries with a
  // non-finite score or parameter are always rejected. Throws
  // std::out_of_range for a bad island index.
  InsertOutcome Insert(int island, Entry entry);

  // Picks a non-empty island uniformly, then two distinct entries without
  // replacement with probability proportional to exp(score / tau). A
  // single-entry island yields that entry twice. Throws EmptyDatabase.
  PromptPair SamplePair(std::uint64_t seed) const;

  // Sampling temperature currently in effect for an island.
  double Temperature(int island) const;

  // Runs ResetIslands when `generation` is a positive multiple of the reset
  // period. Returns whether a reset happened.
  bool MaybeReset(int generation);

  // Clears the worse half of the islands (ranked by best score, empty
  // islands last) and seeds each with a copy of the global best.
  void ResetIslands();

  std::optional<Entry> Best() const;
  // Best score per island; -infinity for empty islands.
  std::vector<double> IslandBestScores() const;
  // Highest score ever inserted, which resets never lower.
  double best_score() const { return best_score_; }

  // Versioned JSON-lines snapshot: one header line, then one entry per line.
  // Throws IoError.
  void Snapshot(const std::string& path) const;
  // Throws IoError, SchemaVersionMismatch, or ProtocolError for a corrupt
  // entry line.
  static ProgramDatabase Restore(const std::string& path);

  static constexpr int kSnapshotVersion = 1;

 private:
  DatabaseConfig config_;
  std::vector<Island> islands_;
  double best_score_;
};

}  // namespace policyforge::database

#endif  // POLICYFORGE_DATABASE_DATABASE_H_
