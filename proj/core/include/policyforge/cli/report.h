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

#ifndef POLICYFORGE_CLI_REPORT_H_
#define POLICYFORGE_CLI_REPORT_H_

#include <string>
#include <string_view>
#include <vector>

namespace policyforge::cli {

struct BestSoFarSeries {
  std::vector<int> generations;
  std::vector<double> global_best;
  std::vector<std::vector<double>> island_best;  // [island][row]
};

// Parses best_so_far.csv text. Throws ConfigError for a wrong header,
// ragged or non-numeric rows, or a file with no data rows.
BestSoFarSeries ParseBestSoFar(std::string_view csv);

// Line chart: the global series as a solid polyline, each island dashed.
// Higher scores are drawn higher. Non-finite points are left out.
std::string RenderBestSoFarSvg(const BestSoFarSeries& series);

}  // namespace policyforge::cli

#endif  // POLICYFORGE_CLI_REPORT_H_
