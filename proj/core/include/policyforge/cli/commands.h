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

#ifndef POLICYFORGE_CLI_COMMANDS_H_
#define POLICYFORGE_CLI_COMMANDS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "policyforge/envs/factory.h"

namespace policyforge::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

struct SynthArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> max_generations;
};

struct EvalArgs {
  std::string policy_path;
  envs::EnvConfig env;
  int episodes = 10;
  std::uint64_t seed = 0;  // first episode seed
};

struct TuneArgs {
  std::string policy_path;
  envs::EnvConfig env;
  std::string method = "es";
  int budget = 100;
  int episodes = 10;
  std::uint64_t seed = 0;       // optimizer seed
  std::uint64_t seed_base = 0;  // first episode seed
  std::string output_path;      // empty: <policy>.tuned.py
};

struct ReportArgs {
  std::string run_dir;
  std::string output_path;  // empty: <run_dir>/best_so_far.svg
};

struct RolloutArgs {
  std::string policy_path;
  envs::EnvConfig env;
  std::uint64_t seed = 0;
};

// Each command writes data to `out` and returns an exit code. Errors are
// thrown; RunGuarded turns them into codes.
int CmdSynth(const SynthArgs& args, std::ostream& out);
int CmdEval(const EvalArgs& args, std::ostream& out);
int CmdTune(const TuneArgs& args, std::ostream& out);
int CmdReport(const ReportArgs& args, std::ostream& out);
int CmdRollout(const RolloutArgs& args, std::ostream& out);

// Runs `body`; on an exception writes one line
//   error kind=<kind> message="<text>"
// to `err` and returns 1 for configuration errors, 2 for anything else.
int RunGuarded(const std::function<int()>& body, std::ostream& err);

// Routes library logging to stderr. `level` is an spdlog level name.
void ConfigureLogging(std::string_view level);

}  // namespace policyforge::cli

#endif  // POLICYFORGE_CLI_COMMANDS_H_
