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

#ifndef POLICYFORGE_GFO_OPTIMIZER_H_
#define POLICYFORGE_GFO_OPTIMIZER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace policyforge::gfo {

enum class Method { kEs, kRandom, kNone };

std::string_view MethodName(Method method);
// Accepts "es", "random" and "none". Throws ConfigError.
Method ParseMethod(std::string_view name);

// Function to maximize. NaN results rank below every other score.
struct Objective {
  std::function<double(std::span<const double>)> fn;
  std::size_t dim = 0;
};

struct HistoryPoint {
  int evaluation = 0;  // 0-based call index
  double score = 0.0;
};

struct OptResult {
  std::vector<double> best_theta;
  double best_score = 0.0;
  std::vector<HistoryPoint> history;
  int evaluations_used = 0;
  // False only for a zero budget, where theta0 is returned unscored and
  // best_score is -infinity.
  bool evaluated = true;
};

// Initial per-coordinate mutation scale: max(0.1 * |theta0_i|, 0.1).
std::vector<double> InitialStepSizes(std::span<const double> theta0);

// Elitist (1+1)-ES with per-coordinate step sizes and the 1/5 success rule
// (success: sigma *= exp(1/3), failure: sigma *= exp(-1/12)). theta0 is
// evaluated first. Throws DimensionMismatch.
OptResult OnePlusOneEs(const Objective& objective, std::span<const double> theta0,
                       int max_evaluations, std::uint64_t seed);

// theta0 plus independent Gaussian samples around it at the initial scale.
// Ties keep the earliest point.
OptResult RandomSearch(const Objective& objective, std::span<const double> theta0,
                       int max_evaluations, std::uint64_t seed);

// `kNone` scores theta0 exactly once, whatever the budget.
OptResult Optimize(Method method, const Objective& objective,
                   std::span<const double> theta0, int max_evaluations,
                   std::uint64_t seed);

// Best score seen after each evaluation.
std::vector<double> BestSoFar(const OptResult& result);

}  // namespace policyforge::gfo

#endif  // POLICYFORGE_GFO_OPTIMIZER_H_
