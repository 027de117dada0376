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

#include "policyforge/gfo/optimizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <spdlog/spdlog.h>

#include "policyforge/common/errors.h"
#include "policyforge/common/rng.h"

namespace policyforge::gfo {
namespace {

constexpr std::size_t kManyParameters = 32;
constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

double Sanitize(double score) { return std::isnan(score) ? kMinusInf : score; }

// Shared bookkeeping: counts calls and tracks the incumbent.
class Tracker {
 public:
  Tracker(const Objective& objective, std::span<const double> theta0, int budget)
      : objective_(objective), budget_(budget) {
    if (objective.dim != theta0.size()) {
      throw DimensionMismatch("theta0", objective.dim, theta0.size());
    }
    if (budget < 0) throw ConfigError("optimizer budget must be non-negative");
    if (theta0.size() > kManyParameters) {
      spdlog::warn("optimizing {} parameters; search quality degrades beyond {}",
                   theta0.size(), kManyParameters);
    }
    result_.best_theta.assign(theta0.begin(), theta0.end());
    result_.best_score = kMinusInf;
    result_.evaluated = budget > 0;
  }

  bool exhausted() const { return result_.evaluations_used >= budget_; }

  double Evaluate(std::span<const double> theta) {
    const double score = Sanitize(objective_.fn(theta));
    result_.history.push_back({result_.evaluations_used, score});
    ++result_.evaluations_used;
    return score;
  }

  // Records `theta` as the incumbent when it strictly improves.
  bool Offer(std::span<const double> theta, double score, bool first = false) {
    if (!first && !(score > result_.best_score)) return false;
    result_.best_score = score;
    result_.best_theta.assign(theta.begin(), theta.end());
    return true;
  }

  OptResult Take() { return std::move(result_); }

 private:
  const Objective& objective_;
  int budget_;
  OptResult result_;
};

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kEs:
      return "es";
    case Method::kRandom:
      return "random";
    case Method::kNone:
      return "none";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  if (name == "es") return Method::kEs;
  if (name == "random") return Method::kRandom;
  if (name == "none") return Method::kNone;
  throw ConfigError("unknown optimizer method '" + std::string(name) +
                    "' (expected es, random or none)");
}

std::vector<double> InitialStepSizes(std::span<const double> theta0) {
  std::vector<double> sigma(theta0.size());
  for (std::size_t i = 0; i < theta0.size(); ++i) {
    sigma[i] = std::max(0.1 * std::fabs(theta0[i]), 0.1);
    if (!std::isfinite(sigma[i])) sigma[i] = 0.1;
  }
  return sigma;
}

OptResult OnePlusOneEs(const Objective& objective, std::span<const double> theta0,
                       int max_evaluations, std::uint64_t seed) {
  Tracker tracker(objective, theta0, max_evaluations);
  if (tracker.exhausted()) return tracker.Take();
  std::vector<double> parent(theta0.begin(), theta0.end());
  double parent_score = tracker.Evaluate(parent);
  tracker.Offer(parent, parent_score, true);
  if (parent.empty()) return tracker.Take();

  const double grow = std::exp(1.0 / 3.0);
  const double shrink = std::exp(-1.0 / 12.0);
  std::vector<double> sigma = InitialStepSizes(theta0);
  std::vector<double> child(parent.size());
  Rng rng(DeriveSeed({seed, 0x6573ULL}));
  while (!tracker.exhausted()) {
    for (std::size_t i = 0; i < parent.size(); ++i) {
      child[i] = parent[i] + sigma[i] * rng.Normal();
    }
    const double score = tracker.Evaluate(child);
    const double factor = score > parent_score ? grow : shrink;
    if (score > parent_score) {
      parent.swap(child);
      parent_score = score;
      tracker.Offer(parent, parent_score);
    }
    for (double& s : sigma) s *= factor;
  }
  return tracker.Take();
}

OptResult RandomSearch(const Objective& objective, std::span<const double> theta0,
                       int max_evaluations, std::uint64_t seed) {
  Tracker tracker(objective, theta0, max_evaluations);
  if (tracker.exhausted()) return tracker.Take();
  tracker.Offer(theta0, tracker.Evaluate(theta0), true);
  if (theta0.empty()) return tracker.Take();
  const std::vector<double> sigma = InitialStepSizes(theta0);
  std::vector<double> sample(theta0.size());
  Rng rng(DeriveSeed({seed, 0x726e64ULL}));
  while (!tracker.exhausted()) {
    for (std::size_t i = 0; i < sample.size(); ++i) {
      sample[i] = theta0[i] + sigma[i] * rng.Normal();
    }
    tracker.Offer(sample, tracker.Evaluate(sample));
  }
  return tracker.Take();
}

OptResult Optimize(Method method, const Objective& objective,
                   std::span<const double> theta0, int max_evaluations,
                   std::uint64_t seed) {
  switch (method) {
    case Method::kEs:
      return OnePlusOneEs(objective, theta0, max_evaluations, seed);
    case Method::kRandom:
      return RandomSearch(objective, theta0, max_evaluations, seed);
    case Method::kNone:
      return OnePlusOneEs(objective, theta0, 1, seed);
  }
  throw ConfigError("unknown optimizer method");
}

std::vector<double> BestSoFar(const OptResult& result) {
  std::vector<double> out;
  out.reserve(result.history.size());
  double best = kMinusInf;
  for (const HistoryPoint& p : result.history) {
    best = std::max(best, p.score);
    out.push_back(best);
  }
  return out;
}

}  // namespace policyforge::gfo
