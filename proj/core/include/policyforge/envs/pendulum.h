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

#ifndef POLICYFORGE_ENVS_PENDULUM_H_
#define POLICYFORGE_ENVS_PENDULUM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "policyforge/envs/environment.h"

namespace policyforge::envs {

// Undamped pendulum swing-up. The angle is measured from upright, so the
// upright equilibrium is theta = 0.
class Pendulum : public Environment {
 public:
  static constexpr double kMass = 1.0;     // kg
  static constexpr double kLength = 1.0;   // m
  static constexpr double kGravity = 9.81; // m/s^2
  // One sixth of the torque needed to hold the arm horizontal.
  static constexpr double kMaxTorque = kMass * kGravity * kLength / 6.0;
  static constexpr double kRewardBand = 0.5;  // rad

  struct State {
    double theta = 0.0;
    double omega = 0.0;
  };

  explicit Pendulum(int horizon = 1000);

  const EnvSpec& spec() const override { return spec_; }
  void Reset(std::uint64_t seed, std::vector<double>& obs) override;
  StepResult Step(std::span<const double> action,
                  std::vector<double>& obs) override;

  const State& state() const { return state_; }
  void set_state(const State& s) { state_ = s; }
  double last_torque() const { return last_torque_; }

  // Kinetic plus potential energy, zero potential at the pivot height.
  static double Energy(const State& s);
  static double ClampTorque(double u);
  // Wraps into [-pi, pi).
  static double WrapAngle(double theta);
  void Observe(std::vector<double>& obs) const;

 private:
  EnvSpec spec_;
  State state_;
  double last_torque_ = 0.0;
};

}  // namespace policyforge::envs

#endif  // POLICYFORGE_ENVS_PENDULUM_H_
