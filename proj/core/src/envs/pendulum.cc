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

#include "policyforge/envs/pendulum.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "policyforge/common/errors.h"
#include "policyforge/common/rng.h"

namespace policyforge::envs {

Pendulum::Pendulum(int horizon) {
  spec_.name = "pendulum_swingup";
  spec_.kind = EnvKind::kPendulum;
  spec_.obs_dim = 3;
  spec_.act_dim = 1;
  spec_.horizon = horizon;
  spec_.control_interval = 0.02;
  spec_.substeps = 10;
}

double Pendulum::Energy(const State& s) {
  return 0.5 * kMass * kLength * kLength * s.omega * s.omega +
         kMass * kGravity * kLength * std::cos(s.theta);
}

double Pendulum::ClampTorque(double u) {
  if (std::isnan(u)) return 0.0;
  return std::clamp(u, -kMaxTorque, kMaxTorque);
}

double Pendulum::WrapAngle(double theta) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::fmod(theta + std::numbers::pi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  w -= std::numbers::pi;
  // fmod rounding can land exactly on +pi.
  return w >= std::numbers::pi ? -std::numbers::pi : w;
}

void Pendulum::Observe(std::vector<double>& obs) const {
  obs.assign({std::cos(state_.theta), std::sin(state_.theta), state_.omega});
}

void Pendulum::Reset(std::uint64_t seed, std::vector<double>& obs) {
  Rng rng(DeriveSeed({seed, 0x70656e64ULL}));
  state_.theta = rng.Uniform(-std::numbers::pi, std::numbers::pi);
  state_.omega = rng.Uniform(-1.0, 1.0);
  last_torque_ = 0.0;
  Observe(obs);
}

StepResult Pendulum::Step(std::span<const double> action, std::vector<double>& obs) {
  if (action.size() != spec_.act_dim) {
    throw DimensionMismatch("action", spec_.act_dim, action.size());
  }
  StepResult result;
  result.reward = std::fabs(state_.theta) < kRewardBand ? 1.0 : 0.0;
  const double u = ClampTorque(action[0]);
  last_torque_ = u;
  const double dt = spec_.control_interval / spec_.substeps;
  constexpr double kInertia = kMass * kLength * kLength;
  for (int i = 0; i < spec_.substeps; ++i) {
    state_.omega += dt * ((kGravity / kLength) * std::sin(state_.theta) + u / kInertia);
    state_.theta = WrapAngle(state_.theta + dt * state_.omega);
  }
  Observe(obs);
  return result;
}

}  // namespace policyforge::envs
