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

#include "policyforge/envs/rollout.h"

#include "policyforge/common/errors.h"
#include "policyforge/common/rng.h"

namespace policyforge::envs {
namespace {

RolloutResult RunEpisode(Environment& env, lang::Interpreter& policy,
                         std::span<const double> theta, std::uint64_t seed,
                         bool record) {
  RolloutResult result;
  Rng rng(PolicySeed(seed));
  std::vector<double> obs;
  std::vector<double> next_obs;
  std::vector<double> action;
  const std::size_t act_dim = env.spec().act_dim;
  try {
    env.Reset(seed, obs);
    for (int t = 0; t < env.spec().horizon; ++t) {
      policy.RunInto(theta, obs, rng, action);
      if (action.size() != act_dim) {
        throw DimensionMismatch("action", act_dim, action.size());
      }
      const StepResult step = env.Step(action, next_obs);
      result.episode_return += step.reward;
      result.steps = t + 1;
      if (record) result.trajectory.push_back({t, obs, action, step.reward});
      obs.swap(next_obs);
      if (step.done) break;
    }
  } catch (const Error& e) {
    result.faulted = true;
    result.fault = e.what();
  }
  return result;
}

}  // namespace

std::uint64_t PolicySeed(std::uint64_t episode_seed) {
  return DeriveSeed({episode_seed, 0x706f6c696379ULL});
}

RolloutResult Rollout(Environment& env, const lang::ParamTemplate& tmpl,
                      std::span<const double> theta, std::uint64_t seed,
                      const RolloutOptions& options) {
  if (theta.size() != tmpl.n_params()) {
    throw DimensionMismatch("theta", tmpl.n_params(), theta.size());
  }
  lang::Interpreter policy(tmpl.ast, options.eval);
  return RunEpisode(env, policy, theta, seed, options.record_trajectory);
}

ScoreReport Score(Environment& env, const lang::ParamTemplate& tmpl,
                  std::span<const double> theta, int episodes,
                  std::uint64_t seed_base, const lang::EvalOptions& eval) {
  if (theta.size() != tmpl.n_params()) {
    throw DimensionMismatch("theta", tmpl.n_params(), theta.size());
  }
  ScoreReport report;
  lang::Interpreter policy(tmpl.ast, eval);
  double total = 0.0;
  for (int i = 0; i < episodes; ++i) {
    const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(i);
    const RolloutResult r = RunEpisode(env, policy, theta, seed, false);
    report.seeds.push_back(seed);
    report.returns.push_back(r.episode_return);
    total += r.episode_return;
    if (r.faulted) {
      if (report.faulted_episodes == 0) report.first_fault = r.fault;
      ++report.faulted_episodes;
    }
  }
  report.mean_return = episodes > 0 ? total / episodes : 0.0;
  return report;
}

}  // namespace policyforge::envs
