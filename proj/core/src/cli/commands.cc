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

#include "policyforge/cli/commands.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "policyforge/cli/config.h"
#include "policyforge/cli/report.h"
#include "policyforge/common/errors.h"
#include "policyforge/envs/rollout.h"
#include "policyforge/generation/generator.h"
#include "policyforge/gfo/optimizer.h"
#include "policyforge/lang/interpreter.h"
#include "policyforge/lang/parameterize.h"
#include "policyforge/lang/parser.h"
#include "policyforge/orchestrator/logs.h"
#include "policyforge/orchestrator/orchestrator.h"

namespace policyforge::cli {
namespace {

namespace fs = std::filesystem;
using orchestrator::FormatScore;

// Failure reading a command's input file.
class InputError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A rollout ended early because the policy or simulator failed.
class EpisodeFault : public Error {
 public:
  using Error::Error;
};

std::string ReadText(const std::string& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + std::string(what) + " " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

struct LoadedPolicy {
  std::string source;
  lang::ParamTemplate tmpl;
};

LoadedPolicy LoadPolicy(const std::string& path) {
  LoadedPolicy p;
  p.source = ReadText(path, "policy");
  p.tmpl = lang::ExtractParameters(lang::Parse(p.source));
  return p;
}

std::string ErrorKind(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return "input";
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const UnsupportedConstruct*>(&e)) return "unsupported";
  if (dynamic_cast<const generation::GeneratorUnavailable*>(&e)) return "generator_unavailable";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const TimeoutError*>(&e)) return "timeout";
  if (dynamic_cast<const ProtocolError*>(&e)) return "protocol";
  if (dynamic_cast<const lang::PolicyFault*>(&e) || dynamic_cast<const EpisodeFault*>(&e)) {
    return "fault";
  }
  if (dynamic_cast<const DimensionMismatch*>(&e)) return "dimension";
  return "runtime";
}

std::string QuoteMessage(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out + "\"";
}

}  // namespace

int CmdSynth(const SynthArgs& args, std::ostream& out) {
  orchestrator::RunConfig config = LoadRunConfig(args.config_path);
  if (args.seed) config.seed = *args.seed;
  if (args.out_dir) config.out_dir = *args.out_dir;
  if (args.max_generations) config.max_generations = *args.max_generations;
  orchestrator::Validate(config);
  const orchestrator::RunSummary summary = orchestrator::Run(config);
  out << "best_score=" << FormatScore(summary.database.best_score()) << '\n';
  out << "generations=" << summary.generations << '\n';
  out << "stop_reason=" << summary.stop_reason << '\n';
  out << "best_policy=" << (fs::path(config.out_dir) / "best_policy.txt").string() << '\n';
  return kExitOk;
}

int CmdEval(const EvalArgs& args, std::ostream& out) {
  if (args.episodes < 1) throw ConfigError("--episodes must be at least 1");
  const LoadedPolicy policy = LoadPolicy(args.policy_path);
  std::unique_ptr<envs::Environment> env = envs::MakeEnvironment(args.env);
  const envs::ScoreReport report =
      envs::Score(*env, policy.tmpl, policy.tmpl.theta0, args.episodes, args.seed);
  out << "episode,seed,return\n";
  for (std::size_t i = 0; i < report.returns.size(); ++i) {
    out << i << ',' << report.seeds[i] << ',' << FormatScore(report.returns[i]) << '\n';
  }
  out << "mean,," << FormatScore(report.mean_return) << '\n';
  if (report.faulted_episodes > 0) {
    spdlog::warn("{} of {} episodes faulted; first: {}", report.faulted_episodes,
                 args.episodes, report.first_fault);
  }
  return kExitOk;
}

int CmdTune(const TuneArgs& args, std::ostream& out) {
  if (args.episodes < 1) throw ConfigError("--episodes must be at least 1");
  if (args.budget < 0) throw ConfigError("--budget must not be negative");
  const gfo::Method method = gfo::ParseMethod(args.method);
  const LoadedPolicy policy = LoadPolicy(args.policy_path);
  const std::string output =
      args.output_path.empty() ? args.policy_path + ".tuned.py" : args.output_path;
  std::unique_ptr<envs::Environment> env = envs::MakeEnvironment(args.env);
  const lang::ParamTemplate& tmpl = policy.tmpl;
  auto score = [&](std::span<const double> theta) {
    return envs::Score(*env, tmpl, theta, args.episodes, args.seed_base);
  };

  const envs::ScoreReport pre = score(tmpl.theta0);
  out << "n_params=" << tmpl.n_params() << '\n';
  out << "pre_score=" << FormatScore(pre.mean_return) << '\n';
  if (tmpl.n_params() == 0 || args.budget == 0) {
    if (tmpl.n_params() == 0) spdlog::info("0 parameters; skipping optimization");
    WriteText(output, policy.source);
    out << "post_score=" << FormatScore(pre.mean_return) << '\n';
    out << "evaluations=" << 1 << '\n';
    out << "tuned_policy=" << output << '\n';
    return kExitOk;
  }
  const double pre_value = pre.faulted_episodes > 0 ? -HUGE_VAL : pre.mean_return;
  bool first = true;
  gfo::Objective objective{[&](std::span<const double> theta) {
                             if (first) {
                               first = false;
                               if (std::equal(theta.begin(), theta.end(), tmpl.theta0.begin(),
                                              tmpl.theta0.end())) {
                                 return pre_value;
                               }
                             }
                             const envs::ScoreReport r = score(theta);
                             return r.faulted_episodes > 0 ? -HUGE_VAL : r.mean_return;
                           },
                           tmpl.n_params()};
  const gfo::OptResult result =
      gfo::Optimize(method, objective, tmpl.theta0, args.budget, args.seed);
  const bool improved = result.evaluated && result.best_score > pre_value;
  const std::vector<double>& theta = improved ? result.best_theta : tmpl.theta0;
  const double post = improved ? result.best_score : pre.mean_return;
  WriteText(output, improved ? lang::RewriteSource(policy.source, tmpl, theta) : policy.source);
  out << "post_score=" << FormatScore(post) << '\n';
  out << "evaluations=" << result.evaluations_used << '\n';
  out << "theta=";
  for (std::size_t i = 0; i < theta.size(); ++i) out << (i ? ";" : "") << FormatScore(theta[i]);
  out << '\n';
  out << "tuned_policy=" << output << '\n';
  return kExitOk;
}

int CmdReport(const ReportArgs& args, std::ostream& out) {
  const fs::path csv = fs::path(args.run_dir) / "best_so_far.csv";
  std::ifstream in(csv, std::ios::binary);
  if (!in) throw InputError("cannot read " + csv.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  BestSoFarSeries series;
  try {
    series = ParseBestSoFar(ss.str());
  } catch (const ConfigError& e) {
    throw InputError(e.what());
  }
  const std::string output = args.output_path.empty()
                                 ? (fs::path(args.run_dir) / "best_so_far.svg").string()
                                 : args.output_path;
  WriteText(output, RenderBestSoFarSvg(series));
  out << "svg=" << output << '\n';
  return kExitOk;
}

int CmdRollout(const RolloutArgs& args, std::ostream& out) {
  const LoadedPolicy policy = LoadPolicy(args.policy_path);
  std::unique_ptr<envs::Environment> env = envs::MakeEnvironment(args.env);
  envs::RolloutOptions options;
  options.record_trajectory = true;
  const envs::RolloutResult result =
      envs::Rollout(*env, policy.tmpl, policy.tmpl.theta0, args.seed, options);
  out << 't';
  for (std::size_t i = 0; i < env->spec().obs_dim; ++i) out << ",obs_" << i;
  for (std::size_t i = 0; i < env->spec().act_dim; ++i) out << ",action_" << i;
  out << ",reward\n";
  for (const envs::Transition& tr : result.trajectory) {
    out << tr.t;
    for (double v : tr.obs) out << ',' << FormatScore(v);
    for (double v : tr.action) out << ',' << FormatScore(v);
    out << ',' << FormatScore(tr.reward) << '\n';
  }
  out.flush();
  if (result.faulted) {
    throw EpisodeFault("episode faulted at step " + std::to_string(result.steps) + ": " +
                       result.fault);
  }
  return kExitOk;
}

int RunGuarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error kind=" << ErrorKind(e) << " message=" << QuoteMessage(e.what()) << '\n';
    err.flush();
    return dynamic_cast<const ConfigError*>(&e) ? kExitConfig : kExitRuntime;
  }
}

void ConfigureLogging(std::string_view level) {
  auto logger = spdlog::stderr_color_mt("policyforge");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(std::string(level)));
}

}  // namespace policyforge::cli
