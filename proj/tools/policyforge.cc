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

// policyforge: command-line front end.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "policyforge/cli/commands.h"

namespace {

using policyforge::cli::kExitConfig;
using policyforge::envs::EnvConfig;

void AddEnvFlags(CLI::App* cmd, EnvConfig& env) {
  cmd->add_option("--env", env.name, "pendulum_swingup, ball_in_cup or external")
      ->capture_default_str();
  cmd->add_option("--horizon", env.horizon, "Control steps per episode")->capture_default_str();
  cmd->add_option("--external-command", env.external.command,
                  "Command serving an external env on stdin/stdout");
  cmd->add_option("--external-host", env.external.host, "Host of a TCP env server");
  cmd->add_option("--external-port", env.external.port, "Port of a TCP env server");
  cmd->add_option("--external-timeout-ms", env.external.timeout_ms, "Per-message timeout")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PolicyForge: search for programmatic control policies"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", POLICYFORGE_VERSION);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->capture_default_str();

  policyforge::cli::SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Run a policy search from a config file");
  synth_cmd->add_option("--config", synth.config_path, "TOML config file")->required();
  synth_cmd->add_option("--seed", synth.seed, "Override run.seed");
  synth_cmd->add_option("--out-dir", synth.out_dir, "Override run.out_dir");
  synth_cmd->add_option("--max-generations", synth.max_generations,
                        "Override run.max_generations");

  policyforge::cli::EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score a policy file; CSV on stdout");
  eval_cmd->add_option("--policy", eval.policy_path, "Policy source file")->required();
  AddEnvFlags(eval_cmd, eval.env);
  eval_cmd->add_option("--episodes", eval.episodes, "Episodes (M)")->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "First episode seed")->capture_default_str();

  policyforge::cli::TuneArgs tune;
  CLI::App* tune_cmd = app.add_subcommand("tune", "Optimize a policy's literals");
  tune_cmd->add_option("--policy", tune.policy_path, "Policy source file")->required();
  AddEnvFlags(tune_cmd, tune.env);
  tune_cmd->add_option("--method", tune.method, "es, random or none")->capture_default_str();
  tune_cmd->add_option("--budget", tune.budget, "Objective evaluations")->capture_default_str();
  tune_cmd->add_option("--episodes", tune.episodes, "Episodes per evaluation")
      ->capture_default_str();
  tune_cmd->add_option("--seed", tune.seed, "Optimizer seed")->capture_default_str();
  tune_cmd->add_option("--seed-base", tune.seed_base, "First episode seed")
      ->capture_default_str();
  tune_cmd->add_option("--out", tune.output_path,
                       "Where to write the tuned policy (default <policy>.tuned.py)");

  policyforge::cli::ReportArgs report;
  CLI::App* report_cmd = app.add_subcommand("report", "Render best_so_far.csv as SVG");
  report_cmd->add_option("--run", report.run_dir, "Run output directory")->required();
  report_cmd->add_option("--out", report.output_path,
                         "SVG path (default <run>/best_so_far.svg)");

  policyforge::cli::RolloutArgs rollout;
  CLI::App* rollout_cmd = app.add_subcommand("rollout", "Print one trajectory as CSV");
  rollout_cmd->add_option("--policy", rollout.policy_path, "Policy source file")->required();
  AddEnvFlags(rollout_cmd, rollout.env);
  rollout_cmd->add_option("--seed", rollout.seed, "Episode seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error kind=usage message=\"" << e.what() << "\"\n";
    return kExitConfig;
  }

  return policyforge::cli::RunGuarded(
      [&] {
        policyforge::cli::ConfigureLogging(log_level);
        if (*synth_cmd) return policyforge::cli::CmdSynth(synth, std::cout);
        if (*eval_cmd) return policyforge::cli::CmdEval(eval, std::cout);
        if (*tune_cmd) return policyforge::cli::CmdTune(tune, std::cout);
        if (*report_cmd) return policyforge::cli::CmdReport(report, std::cout);
        return policyforge::cli::CmdRollout(rollout, std::cout);
      },
      std::cerr);
}
