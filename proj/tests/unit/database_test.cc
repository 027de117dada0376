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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "policyforge/common/errors.h"
#include "policyforge/common/rng.h"
#include "policyforge/database/database.h"
#include "policyforge/lang/parameterize.h"

namespace policyforge::database {
namespace {

// Program shapes with two literal holes; literals do not affect the hash.
const std::vector<std::string>& Shapes() {
  static const std::vector<std::string> shapes = {
      "def policy(obs):\n  return {a} * obs[0] + {b}",
      "def policy(obs):\n  return {a} * obs[1] - {b} * obs[2]",
      "def policy(obs):\n  if obs[0] > {a}:\n    return {b}\n  return 0.0",
      "def policy(obs):\n  if obs[0] < {a}:\n    return {b}\n  return 0.0",
      "def policy(obs):\n  x = np.sin(obs[0]) * {a}\n  return x + {b}",
      "def policy(obs):\n  x = np.cos(obs[0]) * {a}\n  return x + {b}",
      "def policy(obs):\n  return np.clip({a} * obs[2], -{b}, 1.0)",
      "def policy(obs):\n  return max({a}, min({b}, obs[0]))",
  };
  return shapes;
}

std::string Program(std::size_t shape, double a, double b) {
  std::string s = Shapes()[shape];
  s.replace(s.find("{a}"), 3, lang::FormatFloat(a));
  s.replace(s.find("{b}"), 3, lang::FormatFloat(b));
  return s;
}

Entry RandomEntry(Rng& rng, std::size_t shapes = 8) {
  const std::size_t shape = rng.UniformInt(shapes);
  const double a = std::round(rng.Uniform(0.0, 10.0) * 1000) / 1000;
  const double b = std::round(rng.Uniform(0.0, 10.0) * 1000) / 1000;
  const double score = std::round(rng.Uniform(0.0, 1000.0));
  return MakeEntry(Program(shape, a, b), score, score - 1.0, 1);
}

TEST(EntryTest, MakeEntryFillsTemplate) {
  const Entry e = MakeEntry(Program(0, 2.5, 1.5), 10.0, 9.0, 3);
  EXPECT_EQ(e.hash.size(), 16u);
  ASSERT_NE(e.tmpl, nullptr);
  EXPECT_EQ(e.best_theta, (std::vector<double>{2.5, 1.5}));
  EXPECT_EQ(e.tmpl->theta0, e.best_theta);
  EXPECT_EQ(e.score, 10.0);
  EXPECT_EQ(e.pre_gfo_score, 9.0);
  EXPECT_EQ(e.generation, 3);
  EXPECT_EQ(MakeEntry(Program(0, 7.0, 8.0), 0, 0, 0).hash, e.hash);
  EXPECT_NE(MakeEntry(Program(1, 2.5, 1.5), 0, 0, 0).hash, e.hash);
  EXPECT_THROW(MakeEntry("def policy(obs):\n  while True:\n    pass", 0, 0, 0), Error);
}

TEST(DatabaseTest, ConfigValidation) {
  EXPECT_THROW(ProgramDatabase({0, 0.0, 0}), ConfigError);
  EXPECT_THROW(ProgramDatabase({2, 0.0, -1}), ConfigError);
}

TEST(DatabaseTest, InsertOutcomes) {
  ProgramDatabase db({2, 0.0, 0});
  EXPECT_EQ(db.Insert(0, MakeEntry(Program(0, 1, 1), 5.0, 5.0, 0)), InsertOutcome::kAdded);
  EXPECT_EQ(db.Insert(0, MakeEntry(Program(0, 2, 2), 4.0, 4.0, 0)), InsertOutcome::kRejected);
  EXPECT_EQ(db.Insert(0, MakeEntry(Program(0, 2, 2), 5.0, 5.0, 0)), InsertOutcome::kRejected);
  EXPECT_EQ(db.Insert(0, MakeEntry(Program(0, 3, 3), 6.0, 6.0, 0)), InsertOutcome::kReplaced);
  EXPECT_EQ(db.island(0).begin()->second.best_theta, (std::vector<double>{3.0, 3.0}));
  // The same shape is new to another island.
  EXPECT_EQ(db.Insert(1, MakeEntry(Program(0, 2, 2), 1.0, 1.0, 0)), InsertOutcome::kAdded);
  EXPECT_EQ(db.size(), 2u);
  EXPECT_EQ(db.best_score(), 6.0);
  EXPECT_THROW(db.Insert(2, MakeEntry(Program(0, 1, 1), 1.0, 1.0, 0)), std::out_of_range);
  EXPECT_EQ(InsertOutcomeName(InsertOutcome::kReplaced), "replaced");
}

TEST(DatabaseTest, RejectsFaultedAndNonFinite) {
  ProgramDatabase db({1, 0.0, 0});
  Entry faulted = MakeEntry(Program(0, 1, 1), 5.0, 5.0, 0);
  faulted.faulted = true;
  EXPECT_EQ(db.Insert(0, faulted), InsertOutcome::kRejected);
  EXPECT_EQ(db.Insert(0, MakeEntry(Program(0, 1, 1), std::nan(""), 0, 0)),
            InsertOutcome::kRejected);
  EXPECT_EQ(db.Insert(0, MakeEntry(Program(0, 1, 1), -HUGE_VAL, 0, 0)),
            InsertOutcome::kRejected);
  Entry bad_theta = MakeEntry(Program(0, 1, 1), 5.0, 5.0, 0);
  bad_theta.best_theta[0] = HUGE_VAL;
  EXPECT_EQ(db.Insert(0, bad_theta), InsertOutcome::kRejected);
  EXPECT_TRUE(db.empty());
}

TEST(DatabaseTest, DedupHoldsUnderRandomInserts) {
  ProgramDatabase db({4, 0.0, 0});
  std::map<std::pair<int, std::string>, double> model;
  Rng rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const int island = static_cast<int>(rng.UniformInt(4));
    Entry e = RandomEntry(rng);
    const auto key = std::make_pair(island, e.hash);
    const auto it = model.find(key);
    InsertOutcome expected;
    if (it == model.end()) {
      expected = InsertOutcome::kAdded;
      model[key] = e.score;
    } else if (e.score > it->second) {
      expected = InsertOutcome::kReplaced;
      it->second = e.score;
    } else {
      expected = InsertOutcome::kRejected;
    }
    ASSERT_EQ(db.Insert(island, std::move(e)), expected) << "insert " << i;
  }
  ASSERT_EQ(db.size(), model.size());
  for (int i = 0; i < 4; ++i) {
    for (const auto& [hash, e] : db.island(i)) {
      EXPECT_EQ(e.hash, hash);
      EXPECT_EQ(e.island, i);
      EXPECT_EQ(e.score, model.at({i, hash}));
    }
  }
}

TEST(DatabaseTest, GlobalBestNeverDecreasesAcrossResets) {
  ProgramDatabase db({5, 0.0, 0});
  Rng rng(99);
  double last = -HUGE_VAL;
  for (int i = 0; i < 3000; ++i) {
    if (rng.Uniform01() < 0.05) {
      db.ResetIslands();
    } else {
      db.Insert(static_cast<int>(rng.UniformInt(5)), RandomEntry(rng));
    }
    ASSERT_GE(db.best_score(), last);
    last = db.best_score();
    const std::optional<Entry> best = db.Best();
    ASSERT_TRUE(best.has_value());
    ASSERT_EQ(best->score, db.best_score());
  }
}

TEST(DatabaseTest, ResetClearsWorseHalfToGlobalBest) {
  ProgramDatabase db({4, 0.0, 0});
  for (int i = 0; i < 4; ++i) {
    db.Insert(i, MakeEntry(Program(static_cast<std::size_t>(i), 1, 1), 10.0 * (i + 1), 0, 0));
    db.Insert(i, MakeEntry(Program(4 + static_cast<std::size_t>(i), 1, 1), 1.0, 0, 0));
  }
  db.ResetIslands();
  const std::vector<double> best = db.IslandBestScores();
  EXPECT_EQ(best, (std::vector<double>{40.0, 40.0, 30.0, 40.0}));
  EXPECT_EQ(db.island(0).size(), 1u);
  EXPECT_EQ(db.island(0).begin()->second.island, 0);
  EXPECT_EQ(db.island(2).size(), 2u);
}

TEST(DatabaseTest, MaybeResetFollowsPeriod) {
  ProgramDatabase db({2, 0.0, 3});
  db.Insert(0, MakeEntry(Program(0, 1, 1), 1.0, 0, 0));
  EXPECT_FALSE(db.MaybeReset(0));
  EXPECT_FALSE(db.MaybeReset(2));
  EXPECT_TRUE(db.MaybeReset(3));
  EXPECT_TRUE(db.MaybeReset(6));
  ProgramDatabase off({2, 0.0, 0});
  EXPECT_FALSE(off.MaybeReset(3));
}

TEST(DatabaseTest, IslandBestOfEmptyIsMinusInfinity) {
  ProgramDatabase db({3, 0.0, 0});
  db.Insert(1, MakeEntry(Program(0, 1, 1), 2.0, 0, 0));
  const std::vector<double> best = db.IslandBestScores();
  EXPECT_EQ(best[0], -HUGE_VAL);
  EXPECT_EQ(best[1], 2.0);
}

TEST(SampleTest, EmptyDatabaseThrows) {
  ProgramDatabase db({2, 0.0, 0});
  EXPECT_THROW(db.SamplePair(0), EmptyDatabase);
}

TEST(SampleTest, SingleEntryComesBackTwice) {
  ProgramDatabase db({3, 0.0, 0});
  db.Insert(2, MakeEntry(Program(0, 1, 1), 2.0, 0, 0));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const PromptPair p = db.SamplePair(s);
    EXPECT_EQ(p.island, 2);
    EXPECT_EQ(p.worse.hash, p.better.hash);
  }
}

TEST(SampleTest, PairIsDistinctOrderedAndDeterministic) {
  ProgramDatabase db({1, 0.0, 0});
  Rng rng(1);
  for (int i = 0; i < 30; ++i) db.Insert(0, RandomEntry(rng));
  for (std::uint64_t s = 0; s < 200; ++s) {
    const PromptPair p = db.SamplePair(s);
    EXPECT_NE(p.worse.hash, p.better.hash);
    EXPECT_LE(p.worse.score, p.better.score);
    const PromptPair q = db.SamplePair(s);
    EXPECT_EQ(p.worse.hash, q.worse.hash);
    EXPECT_EQ(p.better.hash, q.better.hash);
  }
}

TEST(SampleTest, LowTemperaturePrefersHighScores) {
  ProgramDatabase db({1, 1.0, 0});
  db.Insert(0, MakeEntry(Program(0, 1, 1), 0.0, 0, 0));
  db.Insert(0, MakeEntry(Program(1, 1, 1), 0.0, 0, 0));
  db.Insert(0, MakeEntry(Program(2, 1, 1), 0.0, 0, 0));
  db.Insert(0, MakeEntry(Program(3, 1, 1), 20.0, 0, 0));
  int top = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) top += db.SamplePair(s).better.score == 20.0;
  EXPECT_GE(top, 995);
}

TEST(SampleTest, HighTemperatureIsNearlyUniform) {
  ProgramDatabase db({1, 1e9, 0});
  for (std::size_t k = 0; k < 3; ++k) {
    db.Insert(0, MakeEntry(Program(k, 1, 1), static_cast<double>(k), 0, 0));
  }
  std::map<double, int> better;
  for (std::uint64_t s = 0; s < 3000; ++s) ++better[db.SamplePair(s).better.score];
  // The better of a uniform pair is score 2 in 2/3 and score 1 in 1/3 of draws.
  EXPECT_NEAR(better[2.0] / 3000.0, 2.0 / 3.0, 0.04);
  EXPECT_NEAR(better[1.0] / 3000.0, 1.0 / 3.0, 0.04);
  EXPECT_EQ(better[0.0], 0);
}

TEST(SampleTest, AdaptiveTemperatureIsScoreSpread) {
  ProgramDatabase db({2, 0.0, 0});
  db.Insert(0, MakeEntry(Program(0, 1, 1), 0.0, 0, 0));
  db.Insert(0, MakeEntry(Program(1, 1, 1), 10.0, 0, 0));
  EXPECT_DOUBLE_EQ(db.Temperature(0), 5.0);
  db.Insert(1, MakeEntry(Program(0, 1, 1), 3.0, 0, 0));
  db.Insert(1, MakeEntry(Program(1, 1, 1), 3.5, 0, 0));
  EXPECT_DOUBLE_EQ(db.Temperature(1), 1.0);
  ProgramDatabase fixed({1, 2.5, 0});
  EXPECT_EQ(fixed.Temperature(0), 2.5);
}

class SnapshotTest : public ::testing::Test {
 protected:
  void SetUp() override {
    path_ = (std::filesystem::temp_directory_path() /
             ("pf_snapshot_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
              "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name() + ".jsonl"))
                .string();
  }
  void TearDown() override { std::filesystem::remove(path_); }
  void Write(const std::string& text) {
    std::ofstream out(path_);
    out << text;
  }
  std::string path_;
};

TEST_F(SnapshotTest, RoundTripIsLossless) {
  ProgramDatabase db({3, 0.0, 7});
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    Entry e = RandomEntry(rng);
    e.score += rng.Uniform01() * 1e-7;  // values that need all 17 digits
    e.best_theta[0] = rng.Normal() * 1e-3;
    e.generation = i;
    db.Insert(static_cast<int>(rng.UniformInt(3)), std::move(e));
  }
  db.ResetIslands();
  db.Snapshot(path_);
  const ProgramDatabase back = ProgramDatabase::Restore(path_);
  EXPECT_EQ(back.num_islands(), 3);
  EXPECT_EQ(back.config().reset_period, 7);
  EXPECT_EQ(back.best_score(), db.best_score());
  for (int i = 0; i < 3; ++i) {
    ASSERT_EQ(back.island(i).size(), db.island(i).size());
    for (const auto& [hash, e] : db.island(i)) {
      const Entry& r = back.island(i).at(hash);
      EXPECT_EQ(r.source, e.source);
      EXPECT_EQ(r.score, e.score);
      EXPECT_EQ(r.pre_gfo_score, e.pre_gfo_score);
      EXPECT_EQ(r.best_theta, e.best_theta);
      EXPECT_EQ(r.generation, e.generation);
      EXPECT_EQ(r.island, e.island);
      ASSERT_NE(r.tmpl, nullptr);
    }
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_EQ(back.SamplePair(s).better.hash, db.SamplePair(s).better.hash);
  }
  // Snapshot of the restored database is byte-identical.
  const std::string second = path_ + ".2";
  back.Snapshot(second);
  std::ifstream a(path_);
  std::ifstream b(second);
  std::stringstream sa;
  std::stringstream sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
  std::filesystem::remove(second);
}

TEST_F(SnapshotTest, EmptyDatabaseRoundTrips) {
  ProgramDatabase db({2, 1.5, 0});
  db.Snapshot(path_);
  const ProgramDatabase back = ProgramDatabase::Restore(path_);
  EXPECT_TRUE(back.empty());
  EXPECT_EQ(back.best_score(), -HUGE_VAL);
  EXPECT_EQ(back.config().temperature, 1.5);
}

TEST_F(SnapshotTest, RejectsOtherVersions) {
  Write(R"({"format":"policyforge-database","version":2,"islands":1,"temperature":0,"reset_period":0})"
        "\n");
  EXPECT_THROW(ProgramDatabase::Restore(path_), SchemaVersionMismatch);
  Write("{\"format\":\"something-else\",\"version\":1}\n");
  EXPECT_THROW(ProgramDatabase::Restore(path_), SchemaVersionMismatch);
  Write("");
  EXPECT_THROW(ProgramDatabase::Restore(path_), SchemaVersionMismatch);
}

TEST_F(SnapshotTest, RejectsCorruptEntries) {
  const std::string header =
      R"({"format":"policyforge-database","version":1,"islands":1,"temperature":0,"reset_period":0,"best_score":1})"
      "\n";
  Write(header + "not json\n");
  EXPECT_THROW(ProgramDatabase::Restore(path_), ProtocolError);
  const Entry e = MakeEntry(Program(0, 1, 1), 1.0, 1.0, 0);
  std::string line = R"({"island":0,"hash":"0000000000000000","score":1,"pre_gfo_score":1,)"
                     R"("generation":0,"best_theta":[1,1],"source":"def policy(obs):\n  return 1.0 * obs[0] + 1.0"})";
  Write(header + line + "\n");
  try {
    ProgramDatabase::Restore(path_);
    ADD_FAILURE() << "hash mismatch accepted";
  } catch (const ProtocolError& err) {
    EXPECT_EQ(err.field(), "hash");
  }
  line.replace(line.find("0000000000000000"), 16, e.hash);
  line.replace(line.find("\"island\":0"), 10, "\"island\":4");
  Write(header + line + "\n");
  EXPECT_THROW(ProgramDatabase::Restore(path_), ProtocolError);
  EXPECT_THROW(ProgramDatabase::Restore(path_ + ".missing"), IoError);
}

}  // namespace
}  // namespace policyforge::database
