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
#include <limits>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "policyforge/common/errors.h"
#include "policyforge/gfo/optimizer.h"

namespace policyforge::gfo {
namespace {

Objective Sphere(std::size_t dim, int* calls = nullptr) {
  return {[calls](std::span<const double> x) {
            if (calls) ++*calls;
            double s = 0.0;
            for (double v : x) s += v * v;
            return -s;
          },
          dim};
}

bool Monotone(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1]) return false;
  }
  return true;
}

TEST(MethodTest, NamesRoundTrip) {
  for (Method m : {Method::kEs, Method::kRandom, Method::kNone}) {
    EXPECT_EQ(ParseMethod(MethodName(m)), m);
  }
  EXPECT_THROW(ParseMethod("cma"), ConfigError);
}

TEST(StepSizeTest, TenPercentWithFloor) {
  const std::vector<double> theta = {0.0, 0.5, -20.0, 3.0};
  const std::vector<double> sigma = InitialStepSizes(theta);
  EXPECT_EQ(sigma, (std::vector<double>{0.1, 0.1, 2.0, 0.1 * 3.0}));
}

TEST(EsTest, SphereConvergesOnAlmostEverySeed) {
  const std::vector<double> theta0(5, 1.0);
  int reached = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const OptResult r = OnePlusOneEs(Sphere(5), theta0, 2000, seed);
    EXPECT_EQ(r.evaluations_used, 2000);
    EXPECT_TRUE(Monotone(BestSoFar(r))) << seed;
    if (r.best_score >= -1e-3) ++reached;
  }
  EXPECT_GE(reached, 95);
}

TEST(EsTest, FirstEvaluationIsThetaZero) {
  std::vector<std::vector<double>> seen;
  const Objective f{[&](std::span<const double> x) {
                      seen.emplace_back(x.begin(), x.end());
                      return 0.0;
                    },
                    2};
  const std::vector<double> theta0 = {3.0, -4.0};
  OnePlusOneEs(f, theta0, 5, 0);
  ASSERT_EQ(seen.size(), 5u);
  EXPECT_EQ(seen[0], theta0);
}

TEST(EsTest, ElitistBestIsBestEvaluated) {
  const std::vector<double> theta0 = {2.0, 2.0, 2.0};
  const OptResult r = OnePlusOneEs(Sphere(3), theta0, 300, 4);
  double best = -std::numeric_limits<double>::infinity();
  for (const HistoryPoint& p : r.history) best = std::max(best, p.score);
  EXPECT_EQ(r.best_score, best);
  double check = 0.0;
  for (double v : r.best_theta) check -= v * v;
  EXPECT_EQ(check, r.best_score);
  EXPECT_GE(r.best_score, r.history.front().score);
}

TEST(EsTest, DeterministicInSeed) {
  const std::vector<double> theta0 = {1.0, -1.0};
  const OptResult a = OnePlusOneEs(Sphere(2), theta0, 200, 11);
  const OptResult b = OnePlusOneEs(Sphere(2), theta0, 200, 11);
  const OptResult c = OnePlusOneEs(Sphere(2), theta0, 200, 12);
  EXPECT_EQ(a.best_theta, b.best_theta);
  EXPECT_EQ(a.best_score, b.best_score);
  EXPECT_NE(a.best_theta, c.best_theta);
}

TEST(EsTest, StepSizeGrowsOnALinearSlope) {
  // On f(x) = x every improving step succeeds half the time; the 1/5 rule
  // expands the step, so progress is far beyond the initial scale.
  const Objective slope{[](std::span<const double> x) { return x[0]; }, 1};
  const std::vector<double> theta0 = {0.0};
  const OptResult r = OnePlusOneEs(slope, theta0, 200, 3);
  EXPECT_GT(r.best_theta[0], 100.0);
}

TEST(EsTest, NanRanksBelowEverything) {
  const Objective f{[](std::span<const double> x) {
                      return x[0] > 1.0 ? std::nan("") : -std::abs(x[0] - 1.0);
                    },
                    1};
  const std::vector<double> theta0 = {0.0};
  const OptResult r = OnePlusOneEs(f, theta0, 500, 1);
  EXPECT_TRUE(std::isfinite(r.best_score));
  EXPECT_LE(r.best_theta[0], 1.0);
  for (const HistoryPoint& p : r.history) EXPECT_FALSE(std::isnan(p.score));
}

TEST(EsTest, ZeroBudgetReturnsThetaZeroUnscored) {
  int calls = 0;
  const std::vector<double> theta0 = {1.0, 2.0};
  const OptResult r = OnePlusOneEs(Sphere(2, &calls), theta0, 0, 0);
  EXPECT_EQ(calls, 0);
  EXPECT_FALSE(r.evaluated);
  EXPECT_EQ(r.best_theta, theta0);
  EXPECT_EQ(r.best_score, -std::numeric_limits<double>::infinity());
  EXPECT_TRUE(r.history.empty());
}

TEST(EsTest, ZeroDimensionStopsAfterOneCall) {
  int calls = 0;
  const OptResult r = OnePlusOneEs(Sphere(0, &calls), {}, 100, 0);
  EXPECT_EQ(calls, 1);
  EXPECT_EQ(r.evaluations_used, 1);
  EXPECT_EQ(r.best_score, 0.0);
}

TEST(EsTest, BadInputsThrow) {
  const std::vector<double> theta0 = {1.0};
  EXPECT_THROW(OnePlusOneEs(Sphere(2), theta0, 10, 0), DimensionMismatch);
  EXPECT_THROW(OnePlusOneEs(Sphere(1), theta0, -1, 0), ConfigError);
}

TEST(RandomSearchTest, ImprovesAndStaysMonotone) {
  const std::vector<double> theta0 = {0.3, 0.3};
  const OptResult r = RandomSearch(Sphere(2), theta0, 500, 5);
  EXPECT_EQ(r.evaluations_used, 500);
  EXPECT_TRUE(Monotone(BestSoFar(r)));
  EXPECT_GT(r.best_score, -0.18);
}

TEST(RandomSearchTest, TiesKeepTheEarliestPoint) {
  const Objective flat{[](std::span<const double>) { return 1.0; }, 2};
  const std::vector<double> theta0 = {5.0, 6.0};
  const OptResult r = RandomSearch(flat, theta0, 50, 0);
  EXPECT_EQ(r.best_theta, theta0);
}

TEST(OptimizeTest, NoneEvaluatesExactlyOnce) {
  for (int budget : {0, 1, 100}) {
    int calls = 0;
    const std::vector<double> theta0 = {1.0, 1.0};
    const OptResult r = Optimize(Method::kNone, Sphere(2, &calls), theta0, budget, 0);
    EXPECT_EQ(calls, 1);
    EXPECT_EQ(r.best_theta, theta0);
    EXPECT_EQ(r.best_score, -2.0);
    EXPECT_TRUE(r.evaluated);
  }
}

TEST(OptimizeTest, BudgetIsRespected) {
  for (Method m : {Method::kEs, Method::kRandom}) {
    for (int budget : {1, 2, 17}) {
      int calls = 0;
      const std::vector<double> theta0 = {1.0};
      const OptResult r = Optimize(m, Sphere(1, &calls), theta0, budget, 0);
      EXPECT_EQ(calls, budget);
      EXPECT_EQ(r.evaluations_used, budget);
      EXPECT_EQ(r.history.size(), static_cast<std::size_t>(budget));
    }
  }
}

TEST(BestSoFarTest, RunningMaximum) {
  OptResult r;
  r.history = {{0, 1.0}, {1, 0.5}, {2, 3.0}, {3, 2.0}};
  EXPECT_EQ(BestSoFar(r), (std::vector<double>{1.0, 1.0, 3.0, 3.0}));
}

}  // namespace
}  // namespace policyforge::gfo
