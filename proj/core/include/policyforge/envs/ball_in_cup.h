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

#ifndef POLICYFORGE_ENVS_BALL_IN_CUP_H_
#define POLICYFORGE_ENVS_BALL_IN_CUP_H_

#include <cstdint>
#include <span>
#include <vector>

#include "policyforge/envs/environment.h"

namespace policyforge::envs {

// Planar ball-in-cup. The action is a reference cup position that a
// critically damped PD loop tracks; the ball hangs from the cup on a string
// that can go slack but never stretch. The ball passes through the cup walls.
class BallInCup : public Environment {
 public:
  static constexpr double kStringLength = 0.3;   // m
  static constexpr double kGravity = 9.81;       // m/s^2
  static constexpr double kNaturalFrequency = 10.0;  // rad/s
  static constexpr double kWorkspace = 1.0;      // |reference| bound, m
  static constexpr double kCupHalfWidth = 0.06;  // m
  static constexpr double kCupDepth = 0.05;      // m
  static constexpr double kResetJitter = 0.05;   // m

  struct Vec2 {
    double x = 0.0;
    double z = 0.0;
  };
  struct State {
    Vec2 cup;
    Vec2 cup_velocity;
    Vec2 ball;
    Vec2 ball_velocity;
  };

  explicit BallInCup(int horizon = 1000);

  const EnvSpec& spec() const override { return spec_; }
  void Reset(std::uint64_t seed, std::vector<double>& obs) override;
  StepResult Step(std::span<const double> action,
                  std::vector<double>& obs) override;

  const State& state() const { return state_; }
  void set_state(const State& s) { state_ = s; }

  static bool InCup(const State& s);
  double StringDistance() const;
  // Largest |ball - cup| - L seen at the end of any substep since Reset.
  double max_constraint_violation() const { return max_violation_; }
  void Observe(std::vector<double>& obs) const;

 private:
  void ProjectBall();

  EnvSpec spec_;
  State state_;
  double max_violation_ = 0.0;
};

}  // namespace policyforge::envs

#endif  // POLICYFORGE_ENVS_BALL_IN_CUP_H_
