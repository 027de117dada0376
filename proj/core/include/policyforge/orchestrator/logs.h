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

#ifndef POLICYFORGE_ORCHESTRATOR_LOGS_H_
#define POLICYFORGE_ORCHESTRATOR_LOGS_H_

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "policyforge/orchestrator/orchestrator.h"

namespace policyforge::orchestrator {

// Quotes a CSV field per RFC 4180 when it contains a comma, quote, CR or LF.
std::string CsvField(std::string_view field);

// Shortest round-trip decimal; "inf", "-inf" and "nan" for non-finite values.
std::string FormatScore(double v);

// Splits one CSV record. Handles quoted fields but not embedded newlines.
std::vector<std::string> SplitCsvLine(std::string_view line);

// Column layouts of the run outputs.
std::vector<std::string> CandidateColumns();
std::vector<std::string> TimingColumns();
std::vector<std::string> BestSoFarColumns(int islands);

// Appends rows to the run's CSV files. candidates.csv and best_so_far.csv
// hold only values that are deterministic under the mock generator; wall
// times go to timings.csv.
class RunLog {
 public:
  // Creates out_dir if needed and writes the headers. Throws IoError.
  RunLog(const std::string& out_dir, int islands);

  void Append(const CandidateRecord& record);
  void Append(const BestSoFarRow& row);
  void Flush();

  // run.json and best_policy.txt. Throws IoError.
  void Finish(const RunConfig& config, const RunSummary& summary,
              std::string_view started_at, std::string_view finished_at);

 private:
  std::string dir_;
  std::ofstream candidates_;
  std::ofstream timings_;
  std::ofstream best_so_far_;
};

}  // namespace policyforge::orchestrator

#endif  // POLICYFORGE_ORCHESTRATOR_LOGS_H_
