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

#include "policyforge/database/database.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "policyforge/common/errors.h"
#include "policyforge/common/rng.h"
#include "policyforge/lang/hash.h"
#include "policyforge/lang/parser.h"

namespace policyforge::database {
namespace {

using nlohmann::json;

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();
constexpr std::string_view kSnapshotFormat = "policyforge-database";

bool Storable(const Entry& e) {
  if (e.faulted || !std::isfinite(e.score)) return false;
  return std::all_of(e.best_theta.begin(), e.best_theta.end(),
                     [](double v) { return std::isfinite(v); });
}

json FiniteOrNull(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double NumberOrMinusInf(const json& v) {
  return v.is_number() ? v.get<double>() : kMinusInf;
}

}  // namespace

Entry MakeEntry(std::string source, double score, double pre_gfo_score,
                int generation) {
  const lang::PolicyAst ast = lang::Parse(source);
  auto tmpl = std::make_shared<lang::ParamTemplate>(lang::ExtractParameters(ast));
  Entry e;
  e.hash = lang::StructuralHash(ast);
  e.best_theta = tmpl->theta0;
  e.tmpl = std::move(tmpl);
  e.source = std::move(source);
  e.score = score;
  e.pre_gfo_score = pre_gfo_score;
  e.generation = generation;
  return e;
}

std::string_view InsertOutcomeName(InsertOutcome outcome) {
  switch (outcome) {
    case InsertOutcome::kAdded:
      return "added";
    case InsertOutcome::kReplaced:
      return "replaced";
    case InsertOutcome::kRejected:
      return "rejected";
  }
  return "unknown";
}

ProgramDatabase::ProgramDatabase(DatabaseConfig config)
    : config_(config), best_score_(kMinusInf) {
  if (config_.islands < 1) throw ConfigError("database needs at least one island");
  if (config_.reset_period < 0) throw ConfigError("reset_period must be non-negative");
  islands_.resize(static_cast<std::size_t>(config_.islands));
}

std::size_t ProgramDatabase::size() const {
  std::size_t n = 0;
  for (const Island& island : islands_) n += island.size();
  return n;
}

InsertOutcome ProgramDatabase::Insert(int island, Entry entry) {
  if (island < 0 || island >= num_islands()) {
    throw std::out_of_range("island index " + std::to_string(island));
  }
  if (!Storable(entry)) return InsertOutcome::kRejected;
  entry.island = island;
  Island& target = islands_[static_cast<std::size_t>(island)];
  const double score = entry.score;
  auto it = target.find(entry.hash);
  InsertOutcome outcome;
  if (it == target.end()) {
    target.emplace(entry.hash, std::move(entry));
    outcome = InsertOutcome::kAdded;
  } else if (it->second.score < score) {
    it->second = std::move(entry);
    outcome = InsertOutcome::kReplaced;
  } else {
    return InsertOutcome::kRejected;
  }
  best_score_ = std::max(best_score_, score);
  return outcome;
}

double ProgramDatabase::Temperature(int island) const {
  if (config_.temperature > 0.0) return config_.temperature;
  const Island& entries = islands_.at(static_cast<std::size_t>(island));
  if (entries.size() < 2) return 1.0;
  double mean = 0.0;
  for (const auto& [hash, e] : entries) mean += e.score;
  mean /= static_cast<double>(entries.size());
  double var = 0.0;
  for (const auto& [hash, e] : entries) var += (e.score - mean) * (e.score - mean);
  var /= static_cast<double>(entries.size());
  return std::max(std::sqrt(var), 1.0);
}

PromptPair ProgramDatabase::SamplePair(std::uint64_t seed) const {
  std::vector<int> candidates;
  for (int i = 0; i < num_islands(); ++i) {
    if (!islands_[static_cast<std::size_t>(i)].empty()) candidates.push_back(i);
  }
  if (candidates.empty()) throw EmptyDatabase();
  Rng rng(seed);
  const int island = candidates[rng.UniformInt(candidates.size())];
  const Island& entries = islands_[static_cast<std::size_t>(island)];

  std::vector<const Entry*> pool;
  pool.reserve(entries.size());
  for (const auto& [hash, e] : entries) pool.push_back(&e);
  if (pool.size() == 1) return {island, *pool[0], *pool[0]};

  const double tau = Temperature(island);
  auto draw = [&](const Entry* exclude) {
    double top = kMinusInf;
    for (const Entry* e : pool) {
      if (e != exclude) top = std::max(top, e->score);
    }
    std::vector<double> weights(pool.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i] == exclude) continue;
      weights[i] = std::exp((pool[i]->score - top) / tau);
      total += weights[i];
    }
    double u = rng.Uniform01() * total;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i] == exclude) continue;
      if (u < weights[i]) return pool[i];
      u -= weights[i];
    }
    // Rounding left u at the top of the range; take the last eligible entry.
    for (std::size_t i = pool.size(); i-- > 0;) {
      if (pool[i] != exclude) return pool[i];
    }
    return pool[0];
  };
  const Entry* first = draw(nullptr);
  const Entry* second = draw(first);
  if (second->score < first->score) std::swap(first, second);
  return {island, *first, *second};
}

std::optional<Entry> ProgramDatabase::Best() const {
  const Entry* best = nullptr;
  for (const Island& island : islands_) {
    for (const auto& [hash, e] : island) {
      if (best == nullptr || e.score > best->score) best = &e;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

std::vector<double> ProgramDatabase::IslandBestScores() const {
  std::vector<double> out;
  out.reserve(islands_.size());
  for (const Island& island : islands_) {
    double best = kMinusInf;
    for (const auto& [hash, e] : island) best = std::max(best, e.score);
    out.push_back(best);
  }
  return out;
}

bool ProgramDatabase::MaybeReset(int generation) {
  if (config_.reset_period <= 0 || generation <= 0 ||
      generation % config_.reset_period != 0) {
    return false;
  }
  ResetIslands();
  return true;
}

void ProgramDatabase::ResetIslands() {
  const std::optional<Entry> best = Best();
  if (!best) return;
  const std::vector<double> scores = IslandBestScores();
  std::vector<int> order(islands_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return scores[static_cast<std::size_t>(a)] < scores[static_cast<std::size_t>(b)];
  });
  const std::size_t cleared = islands_.size() / 2;
  for (std::size_t k = 0; k < cleared; ++k) {
    const int index = order[k];
    Island& island = islands_[static_cast<std::size_t>(index)];
    island.clear();
    Entry copy = *best;
    copy.island = index;
    island.emplace(copy.hash, std::move(copy));
  }
}

void ProgramDatabase::Snapshot(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write snapshot '" + path + "'");
  json header = {{"format", kSnapshotFormat},
                 {"version", kSnapshotVersion},
                 {"islands", config_.islands},
                 {"temperature", config_.temperature},
                 {"reset_period", config_.reset_period},
                 {"best_score", FiniteOrNull(best_score_)}};
  out << header.dump() << '\n';
  for (const Island& island : islands_) {
    for (const auto& [hash, e] : island) {
      json line = {{"island", e.island},
                   {"hash", e.hash},
                   {"score", e.score},
                   {"pre_gfo_score", FiniteOrNull(e.pre_gfo_score)},
                   {"generation", e.generation},
                   {"best_theta", e.best_theta},
                   {"source", e.source}};
      out << line.dump() << '\n';
    }
  }
  out.flush();
  if (!out) throw IoError("failed writing snapshot '" + path + "'");
}

ProgramDatabase ProgramDatabase::Restore(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read snapshot '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw SchemaVersionMismatch("snapshot has no header line");
  const json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object() ||
      header.value("format", std::string()) != kSnapshotFormat) {
    throw SchemaVersionMismatch("not a policyforge database snapshot");
  }
  if (!header.contains("version") || header["version"] != kSnapshotVersion) {
    throw SchemaVersionMismatch("unsupported snapshot version " +
                                header.value("version", json()).dump());
  }
  DatabaseConfig config;
  try {
    config.islands = header.at("islands").get<int>();
    config.temperature = header.at("temperature").get<double>();
    config.reset_period = header.at("reset_period").get<int>();
  } catch (const json::exception& e) {
    throw ProtocolError("header", e.what());
  }
  ProgramDatabase db(config);
  db.best_score_ = NumberOrMinusInf(header.value("best_score", json()));
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ProtocolError("line " + std::to_string(line_number), "not a JSON object");
    }
    Entry e;
    try {
      e = MakeEntry(j.at("source").get<std::string>(), j.at("score").get<double>(),
                    NumberOrMinusInf(j.value("pre_gfo_score", json())),
                    j.at("generation").get<int>());
      e.best_theta = j.at("best_theta").get<std::vector<double>>();
      e.island = j.at("island").get<int>();
    } catch (const json::exception& ex) {
      throw ProtocolError("line " + std::to_string(line_number), ex.what());
    } catch (const Error& ex) {
      throw ProtocolError("source", "line " + std::to_string(line_number) + ": " + ex.what());
    }
    if (e.hash != j.value("hash", std::string())) {
      throw ProtocolError("hash", "line " + std::to_string(line_number) +
                                      " does not match its source");
    }
    if (e.island < 0 || e.island >= db.num_islands()) {
      throw ProtocolError("island", "line " + std::to_string(line_number) + " out of range");
    }
    db.islands_[static_cast<std::size_t>(e.island)][e.hash] = std::move(e);
  }
  return db;
}

}  // namespace policyforge::database
