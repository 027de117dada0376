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
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "policyforge/common/errors.h"
#include "policyforge/envs/ball_in_cup.h"
#include "policyforge/envs/external.h"
#include "policyforge/envs/factory.h"
#include "policyforge/envs/pendulum.h"
#include "policyforge/envs/rollout.h"
#include "policyforge/lang/parameterize.h"
#include "policyforge/lang/parser.h"
#include "support/corpus.h"

namespace policyforge::envs {
namespace {

constexpr double kPi = std::numbers::pi;

lang::ParamTemplate Template(const std::string& src) {
  return lang::ExtractParameters(lang::Parse(src));
}

RolloutResult RunPolicy(Environment& env, const std::string& src, std::uint64_t seed,
                        bool record = false) {
  const lang::ParamTemplate t = Template(src);
  RolloutOptions options;
  options.record_trajectory = record;
  return Rollout(env, t, t.theta0, seed, options);
}

// Straight transcription of the swing-up update rule, kept separate from
// the library so the two can be compared step for step.
struct OraclePendulum {
  double theta;
  double omega;
  double Step(double action) {
    const double reward = std::abs(theta) < 0.5 ? 1.0 : 0.0;
    const double u_max = 9.81 / 6.0;
    const double u = std::isnan(action) ? 0.0 : std::min(std::max(action, -u_max), u_max);
    for (int i = 0; i < 10; ++i) {
      omega = omega + 0.002 * (9.81 * std::sin(theta) + u);
      theta = std::remainder(theta + 0.002 * omega, 2 * kPi);
      if (theta >= kPi) theta -= 2 * kPi;
    }
    return reward;
  }
};

TEST(PendulumTest, SpecMatchesTaskTable) {
  Pendulum env;
  EXPECT_EQ(env.spec().obs_dim, 3u);
  EXPECT_EQ(env.spec().act_dim, 1u);
  EXPECT_EQ(env.spec().horizon, 1000);
  EXPECT_DOUBLE_EQ(env.spec().control_interval, 0.02);
  EXPECT_EQ(env.spec().substeps, 10);
}

TEST(PendulumTest, ResetIsDeterministicAndObservesCosSinOmega) {
  Pendulum a;
  Pendulum b;
  std::vector<double> oa;
  std::vector<double> ob;
  a.Reset(42, oa);
  b.Reset(42, ob);
  EXPECT_EQ(oa, ob);
  ASSERT_EQ(oa.size(), 3u);
  EXPECT_EQ(oa[0], std::cos(a.state().theta));
  EXPECT_EQ(oa[1], std::sin(a.state().theta));
  EXPECT_EQ(oa[2], a.state().omega);
  a.Reset(43, oa);
  EXPECT_NE(oa, ob);
}

TEST(PendulumTest, ResetDistributionOverSeeds) {
  Pendulum env;
  std::vector<double> obs;
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    env.Reset(s, obs);
    const Pendulum::State st = env.state();
    ASSERT_GE(st.theta, -kPi);
    ASSERT_LT(st.theta, kPi);
    ASSERT_GE(st.omega, -1.0);
    ASSERT_LT(st.omega, 1.0);
    sum += st.theta;
  }
  EXPECT_NEAR(sum / 10000.0, 0.0, 0.1);
}

TEST(PendulumTest, UprightRestIsAFixedPoint) {
  Pendulum env;
  std::vector<double> obs;
  env.Reset(0, obs);
  env.set_state({0.0, 0.0});
  const double u = 0.0;
  const StepResult r = env.Step({&u, 1}, obs);
  EXPECT_EQ(r.reward, 1.0);
  EXPECT_EQ(env.state().theta, 0.0);
  EXPECT_EQ(env.state().omega, 0.0);
}

TEST(PendulumTest, OutsideBandEarnsNothing) {
  Pendulum env;
  std::vector<double> obs;
  env.Reset(0, obs);
  for (double omega : {-3.0, 0.0, 3.0}) {
    for (double u : {-5.0, 0.0, 5.0}) {
      env.set_state({0.6, omega});
      EXPECT_EQ(env.Step({&u, 1}, obs).reward, 0.0);
      env.set_state({-0.6, omega});
      EXPECT_EQ(env.Step({&u, 1}, obs).reward, 0.0);
    }
  }
}

TEST(PendulumTest, MaxTorqueCannotHoldHorizontal) {
  // Gravity at horizontal (9.81) beats the torque limit either way round.
  Pendulum env;
  std::vector<double> obs;
  env.Reset(0, obs);
  for (double u : {Pendulum::kMaxTorque, -Pendulum::kMaxTorque}) {
    env.set_state({kPi / 2, 0.0});
    env.Step({&u, 1}, obs);
    EXPECT_GT(env.state().omega, 0.0);
    EXPECT_GT(std::abs(env.state().theta), kPi / 2);
  }
}

TEST(PendulumTest, TorqueClampIsExact) {
  EXPECT_EQ(Pendulum::kMaxTorque, 9.81 / 6.0);
  EXPECT_NEAR(Pendulum::kMaxTorque, 1.635, 1e-12);
  Pendulum env;
  std::vector<double> obs;
  env.Reset(3, obs);
  const double inf = std::numeric_limits<double>::infinity();
  for (double u : {-1e300, -inf, -2.0, -1.635, 0.3, 1.635, 1.7, 1e9, inf}) {
    env.Step({&u, 1}, obs);
    EXPECT_LE(std::abs(env.last_torque()), 1.635) << u;
  }
  EXPECT_EQ(Pendulum::ClampTorque(100.0), Pendulum::kMaxTorque);
  EXPECT_EQ(Pendulum::ClampTorque(-100.0), -Pendulum::kMaxTorque);
  EXPECT_EQ(Pendulum::ClampTorque(std::nan("")), 0.0);
}

TEST(PendulumTest, WrapAngleRange) {
  for (double a : {-100.0, -kPi, -3.0, 0.0, 3.0, kPi, 7.0, 1e6}) {
    const double w = Pendulum::WrapAngle(a);
    EXPECT_GE(w, -kPi);
    EXPECT_LT(w, kPi);
    EXPECT_NEAR(std::cos(w), std::cos(a), 1e-6);
    EXPECT_NEAR(std::sin(w), std::sin(a), 1e-6);
  }
  EXPECT_EQ(Pendulum::WrapAngle(kPi), -kPi);
}

TEST(PendulumTest, ZeroTorqueEnergyDriftUnderOnePercent) {
  const double mgl = Pendulum::kMass * Pendulum::kGravity * Pendulum::kLength;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Pendulum env;
    std::vector<double> obs;
    env.Reset(seed, obs);
    const double e0 = Pendulum::Energy(env.state());
    double worst = 0.0;
    const double u = 0.0;
    for (int t = 0; t < 1000; ++t) {
      env.Step({&u, 1}, obs);
      worst = std::max(worst, std::abs(Pendulum::Energy(env.state()) - e0));
    }
    EXPECT_LT(worst, 0.01 * mgl) << "seed " << seed;
  }
}

TEST(PendulumTest, MatchesOracleStepForStep) {
  Pendulum env;
  std::vector<double> obs;
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    env.Reset(seed, obs);
    OraclePendulum oracle{env.state().theta, env.state().omega};
    for (int t = 0; t < 300; ++t) {
      const double u = rng.Uniform(-3.0, 3.0);
      const double expected = oracle.Step(u);
      ASSERT_EQ(env.Step({&u, 1}, obs).reward, expected);
      ASSERT_NEAR(env.state().theta, oracle.theta, 1e-9);
      ASSERT_NEAR(env.state().omega, oracle.omega, 1e-9);
    }
  }
}

TEST(PendulumTest, WrongActionLengthThrows) {
  Pendulum env;
  std::vector<double> obs;
  env.Reset(0, obs);
  const std::vector<double> two = {0.0, 0.0};
  EXPECT_THROW(env.Step(two, obs), DimensionMismatch);
}

TEST(BallInCupTest, SpecAndResetGeometry) {
  BallInCup env;
  EXPECT_EQ(env.spec().obs_dim, 8u);
  EXPECT_EQ(env.spec().act_dim, 2u);
  std::vector<double> obs;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    env.Reset(s, obs);
    const BallInCup::State& st = env.state();
    EXPECT_EQ(st.cup.x, 0.0);
    EXPECT_EQ(st.cup.z, 0.0);
    EXPECT_EQ(st.ball_velocity.x, 0.0);
    EXPECT_EQ(st.ball_velocity.z, 0.0);
    EXPECT_LE(env.StringDistance(), BallInCup::kStringLength + 1e-12);
    EXPECT_LE(std::abs(st.ball.x), BallInCup::kResetJitter);
    EXPECT_LT(st.ball.z, 0.0);
    ASSERT_EQ(obs.size(), 8u);
    EXPECT_EQ(obs[2], st.ball.x);
    EXPECT_EQ(obs[3], st.ball.z);
  }
}

TEST(BallInCupTest, InCupBox) {
  BallInCup::State s;
  s.cup = {0.2, 0.1};
  s.ball = {0.2, 0.08};
  EXPECT_TRUE(BallInCup::InCup(s));
  s.ball = {0.2 + 0.061, 0.08};
  EXPECT_FALSE(BallInCup::InCup(s));
  s.ball = {0.2, 0.1 - 0.051};
  EXPECT_FALSE(BallInCup::InCup(s));
  s.ball = {0.2, 0.11};
  EXPECT_FALSE(BallInCup::InCup(s));
}

TEST(BallInCupTest, StringConstraintHoldsAfterEverySubstep) {
  Rng rng(17);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BallInCup env;
    std::vector<double> obs;
    env.Reset(seed, obs);
    for (int t = 0; t < 1000; ++t) {
      // Aggressive bang-bang references stress the projection.
      const double a[2] = {rng.Uniform(-2.0, 2.0), rng.Uniform(-2.0, 2.0)};
      const StepResult r = env.Step(a, obs);
      ASSERT_GE(r.reward, 0.0);
      ASSERT_LE(r.reward, 1.0);
    }
    EXPECT_LE(env.max_constraint_violation(), 1e-9) << "seed " << seed;
  }
}

TEST(BallInCupTest, BallInsideCupScores) {
  BallInCup env;
  std::vector<double> obs;
  env.Reset(0, obs);
  BallInCup::State s;
  s.ball = {0.0, -0.02};
  env.set_state(s);
  const double a[2] = {0.0, 0.0};
  EXPECT_EQ(env.Step(a, obs).reward, 1.0);
}

TEST(BallInCupTest, NanReferenceHoldsOrigin) {
  BallInCup env;
  std::vector<double> obs;
  env.Reset(0, obs);
  const double a[2] = {std::nan(""), std::nan("")};
  for (int t = 0; t < 50; ++t) env.Step(a, obs);
  for (double v : obs) EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(env.state().cup.x, 0.0, 1e-12);
}

TEST(RolloutTest, ZeroPolicyFromHangingEarnsNothing) {
  Pendulum env;
  const lang::ParamTemplate t = Template("def policy(obs):\n  return 0.0");
  // Reset, then start from straight down.
  std::vector<double> obs;
  env.Reset(0, obs);
  env.set_state({-kPi, 0.0});
  double total = 0.0;
  Rng rng(0);
  for (int i = 0; i < 1000; ++i) {
    env.Observe(obs);
    const std::vector<double> a = lang::EvaluatePolicy(t, t.theta0, obs, rng);
    total += env.Step(a, obs).reward;
  }
  EXPECT_EQ(total, 0.0);
}

TEST(RolloutTest, UprightRestEarnsTheHorizon) {
  Pendulum env;
  std::vector<double> obs;
  env.Reset(0, obs);
  env.set_state({0.0, 0.0});
  double total = 0.0;
  const double u = 0.0;
  for (int i = 0; i < 1000; ++i) total += env.Step({&u, 1}, obs).reward;
  EXPECT_EQ(total, 1000.0);
}

TEST(RolloutTest, FaultAtFirstStep) {
  Pendulum env;
  const RolloutResult r = RunPolicy(env, "def policy(obs):\n  return obs[99]", 0);
  EXPECT_TRUE(r.faulted);
  EXPECT_EQ(r.episode_return, 0.0);
  EXPECT_EQ(r.steps, 0);
  EXPECT_NE(r.fault.find("index"), std::string::npos) << r.fault;
}

TEST(RolloutTest, WrongActionLengthFaults) {
  Pendulum env;
  const RolloutResult r = RunPolicy(env, "def policy(obs):\n  return [1.0, 2.0]", 0);
  EXPECT_TRUE(r.faulted);
  EXPECT_NE(r.fault.find("action"), std::string::npos);
}

TEST(RolloutTest, LateFaultKeepsPartialReturn) {
  Pendulum env;
  // Stays upright (reward 1 per step) until omega drifts; obs[2] index is fine,
  // so fault via a non-finite action once the clock passes.
  const std::string src =
      "def policy(obs):\n"
      "  if obs[0] > 0.9999:\n"
      "    return 0.0\n"
      "  return 1.0 / 0.0\n";
  std::vector<double> obs;
  env.Reset(0, obs);
  const lang::ParamTemplate t = Template(src);
  const RolloutResult r = Rollout(env, t, t.theta0, 0);
  EXPECT_TRUE(r.faulted);
  EXPECT_GE(r.episode_return, 0.0);
  EXPECT_LE(r.episode_return, r.steps);
}

TEST(RolloutTest, TrajectoryRecordsEveryStep) {
  Pendulum env;
  const RolloutResult r = RunPolicy(env, "def policy(obs):\n  return -obs[2]", 3, true);
  EXPECT_FALSE(r.faulted);
  ASSERT_EQ(r.trajectory.size(), 1000u);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    EXPECT_EQ(r.trajectory[i].t, static_cast<int>(i));
    EXPECT_EQ(r.trajectory[i].obs.size(), 3u);
    EXPECT_EQ(r.trajectory[i].action.size(), 1u);
    sum += r.trajectory[i].reward;
  }
  EXPECT_EQ(sum, r.episode_return);
}

TEST(RolloutTest, BitReproducibleAcrossInstances) {
  const std::string src = policyforge::testing::ReadCorpus("pendulum_swingup");
  const lang::ParamTemplate t = Template(src);
  for (std::uint64_t seed : {0ULL, 7ULL, 123456789ULL}) {
    Pendulum a;
    Pendulum b;
    RolloutOptions options;
    options.record_trajectory = true;
    const RolloutResult ra = Rollout(a, t, t.theta0, seed, options);
    const RolloutResult rb = Rollout(b, t, t.theta0, seed, options);
    ASSERT_EQ(ra.trajectory.size(), rb.trajectory.size());
    for (std::size_t i = 0; i < ra.trajectory.size(); ++i) {
      ASSERT_EQ(ra.trajectory[i].obs, rb.trajectory[i].obs);
      ASSERT_EQ(ra.trajectory[i].action, rb.trajectory[i].action);
    }
    EXPECT_EQ(ra.episode_return, rb.episode_return);
  }
}

TEST(RolloutTest, NoisyPolicyIsSeededPerEpisode) {
  const lang::ParamTemplate t = Template("def policy(obs):\n  return normal(0.0, 1.0)");
  Pendulum a;
  Pendulum b;
  RolloutOptions options;
  options.record_trajectory = true;
  const RolloutResult ra = Rollout(a, t, t.theta0, 9, options);
  const RolloutResult rb = Rollout(b, t, t.theta0, 9, options);
  ASSERT_EQ(ra.trajectory.size(), rb.trajectory.size());
  for (std::size_t i = 0; i < ra.trajectory.size(); ++i) {
    ASSERT_EQ(ra.trajectory[i].action, rb.trajectory[i].action);
  }
}

TEST(ScoreTest, MeanOfReturnsOverConsecutiveSeeds) {
  Pendulum env;
  const lang::ParamTemplate t = Template(policyforge::testing::ReadCorpus("pendulum_swingup"));
  const ScoreReport report = Score(env, t, t.theta0, 7, 100);
  ASSERT_EQ(report.returns.size(), 7u);
  double sum = 0.0;
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_EQ(report.seeds[i], 100 + i);
    EXPECT_EQ(report.returns[i], Rollout(env, t, t.theta0, 100 + i).episode_return);
    EXPECT_GE(report.returns[i], 0.0);
    EXPECT_LE(report.returns[i], 1000.0);
    sum += report.returns[i];
  }
  EXPECT_DOUBLE_EQ(report.mean_return, sum / 7);
  const ScoreReport again = Score(env, t, t.theta0, 7, 100);
  EXPECT_EQ(again.returns, report.returns);
  const ScoreReport one = Score(env, t, t.theta0, 1, 100);
  EXPECT_EQ(one.mean_return, report.returns[0]);
}

TEST(ScoreTest, DimensionMismatchThrows) {
  Pendulum env;
  const lang::ParamTemplate t = Template("def policy(obs):\n  return 1.0 * obs[0]");
  const std::vector<double> theta = {1.0, 2.0};
  EXPECT_THROW(Score(env, t, theta, 1, 0), DimensionMismatch);
}

TEST(ScoreTest, CorpusPendulumPolicyCalibration) {
  // Native dynamics differ from the reference simulator, so this pins the
  // measured value rather than a published one.
  Pendulum env;
  const lang::ParamTemplate t = Template(policyforge::testing::ReadCorpus("pendulum_swingup"));
  const ScoreReport report = Score(env, t, t.theta0, 100, 0);
  EXPECT_EQ(report.faulted_episodes, 0);
  EXPECT_NEAR(report.mean_return, 282.63, 0.005);
}

TEST(FactoryTest, NamesAndAliases) {
  EXPECT_EQ(CanonicalEnvName("pendulum"), "pendulum_swingup");
  EXPECT_EQ(CanonicalEnvName("cup"), "ball_in_cup");
  EXPECT_EQ(CanonicalEnvName("external"), "external");
  EXPECT_THROW(CanonicalEnvName("cartpole"), ConfigError);
  EnvConfig config;
  config.name = "ball_in_cup";
  config.horizon = 50;
  const auto env = MakeEnvironment(config);
  EXPECT_EQ(env->spec().name, "ball_in_cup");
  EXPECT_EQ(env->spec().horizon, 50);
  config.horizon = 0;
  EXPECT_THROW(MakeEnvironment(config), ConfigError);
}

// External environment over the echo server.

std::string EchoServer(const std::string& flags = "") {
  return std::string(POLICYFORGE_ECHO_SERVER) + (flags.empty() ? "" : " " + flags);
}

ExternalConfig EchoConfig(const std::string& flags = "") {
  ExternalConfig c;
  c.command = EchoServer(flags);
  c.timeout_ms = 2000;
  return c;
}

TEST(ExternalEnvTest, FixedRewardProtocolArithmetic) {
  ExternalEnv env(EchoConfig());
  EXPECT_EQ(env.spec().obs_dim, 2u);
  EXPECT_EQ(env.spec().act_dim, 1u);
  EXPECT_EQ(env.spec().horizon, 10);
  const RolloutResult r = RunPolicy(env, "def policy(obs):\n  return 0.25", 3, true);
  EXPECT_FALSE(r.faulted) << r.fault;
  EXPECT_EQ(r.episode_return, 5.0);
  EXPECT_EQ(r.steps, 10);
  ASSERT_EQ(r.trajectory.size(), 10u);
  EXPECT_EQ(r.trajectory[1].obs[0], 0.25);
  // A second episode on the same connection.
  EXPECT_EQ(RunPolicy(env, "def policy(obs):\n  return 0.25", 4).episode_return, 5.0);
}

TEST(ExternalEnvTest, ServerClosingMidEpisodeFaults) {
  ExternalEnv env(EchoConfig("--close-after 4"));
  const RolloutResult r = RunPolicy(env, "def policy(obs):\n  return 0.0", 0);
  EXPECT_TRUE(r.faulted);
  EXPECT_EQ(r.episode_return, 2.0);
  EXPECT_EQ(r.steps, 4);
}

TEST(ExternalEnvTest, MalformedFieldNamed) {
  for (const std::string field : {"reward", "obs", "done"}) {
    ExternalEnv env(EchoConfig("--malformed " + field));
    std::vector<double> obs;
    env.Reset(0, obs);
    const double a = 0.0;
    try {
      env.Step({&a, 1}, obs);
      ADD_FAILURE() << "no error for " << field;
    } catch (const ProtocolError& e) {
      EXPECT_EQ(e.field(), field);
    }
  }
}

TEST(ExternalEnvTest, GarbageLineIsProtocolError) {
  ExternalEnv env(EchoConfig("--garbage"));
  std::vector<double> obs;
  env.Reset(0, obs);
  const double a = 0.0;
  EXPECT_THROW(env.Step({&a, 1}, obs), ProtocolError);
}

TEST(ExternalEnvTest, SilentServerTimesOutIntoFault) {
  ExternalConfig c = EchoConfig("--silent");
  c.timeout_ms = 200;
  ExternalEnv env(c);
  const RolloutResult r = RunPolicy(env, "def policy(obs):\n  return 0.0", 0);
  EXPECT_TRUE(r.faulted);
  EXPECT_NE(r.fault.find("in time"), std::string::npos) << r.fault;
}

TEST(ExternalEnvTest, MissingCommandFails) {
  ExternalConfig c;
  c.command = "/nonexistent/env-server";
  c.timeout_ms = 2000;
  EXPECT_THROW(ExternalEnv env(c), Error);
}

TEST(ExternalEnvTest, TcpTransport) {
  FILE* server = ::popen((EchoServer("--tcp")).c_str(), "r");
  ASSERT_NE(server, nullptr);
  int port = 0;
  ASSERT_EQ(std::fscanf(server, "%d", &port), 1);
  {
    ExternalConfig c;
    c.host = "127.0.0.1";
    c.port = port;
    c.timeout_ms = 2000;
    ExternalEnv env(c);
    EXPECT_EQ(RunPolicy(env, "def policy(obs):\n  return 1.0", 0).episode_return, 5.0);
  }
  EXPECT_EQ(::pclose(server), 0);
}

}  // namespace
}  // namespace policyforge::envs
