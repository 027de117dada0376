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

#include "policyforge/envs/ball_in_cup.h"

#include <algorithm>
#include <cmath>

#include "policyforge/common/errors.h"
#include "policyforge/common/rng.h"

namespace policyforge::envs {

BallInCup::BallInCup(int horizon) {
  spec_.name = "ball_in_cup";
  spec_.kind = EnvKind::kBallInCup;
  spec_.obs_dim = 8;
  spec_.act_dim = 2;
  spec_.horizon = horizon;
  spec_.control_interval = 0.02;
  spec_.substeps = 10;
}

bool BallInCup::InCup(const State& s) {
  return std::fabs(s.ball.x - s.cup.x) <= kCupHalfWidth &&
         s.ball.z >= s.cup.z - kCupDepth && s.ball.z <= s.cup.z;
}

double BallInCup::StringDistance() const {
  return std::hypot(state_.ball.x - state_.cup.x, state_.ball.z - state_.cup.z);
}

void BallInCup::Observe(std::vector<double>& obs) const {
  obs.assign({state_.cup.x, state_.cup.z, state_.ball.x, state_.ball.z,
              state_.cup_velocity.x, state_.cup_velocity.z,
              state_.ball_velocity.x, state_.ball_velocity.z});
}

void BallInCup::ProjectBall() {
  const double dx = state_.ball.x - state_.cup.x;
  const double dz = state_.ball.z - state_.cup.z;
  const double d = std::hypot(dx, dz);
  if (d <= kStringLength) return;
  const double nx = dx / d;
  const double nz = dz / d;
  state_.ball.x = state_.cup.x + kStringLength * nx;
  state_.ball.z = state_.cup.z + kStringLength * nz;
  // Remove the outward part of the velocity relative to the cup.
  const double radial = (state_.ball_velocity.x - state_.cup_velocity.x) * nx +
                        (state_.ball_velocity.z - state_.cup_velocity.z) * nz;
  if (radial > 0.0) {
    state_.ball_velocity.x -= radial * nx;
    state_.ball_velocity.z -= radial * nz;
  }
}

void BallInCup::Reset(std::uint64_t seed, std::vector<double>& obs) {
  Rng rng(DeriveSeed({seed, 0x62616c6cULL}));
  state_ = State{};
  state_.ball.x = rng.Uniform(-kResetJitter, kResetJitter);
  state_.ball.z = -kStringLength + rng.Uniform(-kResetJitter, kResetJitter);
  ProjectBall();
  max_violation_ = std::max(0.0, StringDistance() - kStringLength);
  Observe(obs);
}

StepResult BallInCup::Step(std::span<const double> action, std::vector<double>& obs) {
  if (action.size() != spec_.act_dim) {
    throw DimensionMismatch("action", spec_.act_dim, action.size());
  }
  StepResult result;
  result.reward = InCup(state_) ? 1.0 : 0.0;
  auto reference = [](double a) {
    return std::isnan(a) ? 0.0 : std::clamp(a, -kWorkspace, kWorkspace);
  };
  const double ref_x = reference(action[0]);
  const double ref_z = reference(action[1]);
  const double kp = kNaturalFrequency * kNaturalFrequency;
  const double kd = 2.0 * kNaturalFrequency;
  const double dt = spec_.control_interval / spec_.substeps;
  for (int i = 0; i < spec_.substeps; ++i) {
    state_.cup_velocity.x += dt * (kp * (ref_x - state_.cup.x) - kd * state_.cup_velocity.x);
    state_.cup_velocity.z += dt * (kp * (ref_z - state_.cup.z) - kd * state_.cup_velocity.z);
    state_.cup.x += dt * state_.cup_velocity.x;
    state_.cup.z += dt * state_.cup_velocity.z;
    state_.ball_velocity.z -= dt * kGravity;
    state_.ball.x += dt * state_.ball_velocity.x;
    state_.ball.z += dt * state_.ball_velocity.z;
    ProjectBall();
    max_violation_ = std::max(max_violation_, StringDistance() - kStringLength);
  }
  Observe(obs);
  return result;
}

}  // namespace policyforge::envs
