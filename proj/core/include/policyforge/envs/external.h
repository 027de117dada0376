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

#ifndef POLICYFORGE_ENVS_EXTERNAL_H_
#define POLICYFORGE_ENVS_EXTERNAL_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "policyforge/envs/environment.h"

namespace policyforge::envs {

// Where to find an external simulator. Exactly one of `command` (spawned
// with /bin/sh, spoken to over stdin/stdout) or `host`:`port` (TCP) is used.
struct ExternalConfig {
  std::string command;
  std::string host;
  int port = 0;
  int timeout_ms = 10000;
  int horizon = 0;  // 0 takes the horizon reported by the server
};

// Proxies reset/step over newline-delimited JSON:
//   {"cmd":"spec"}              -> {"obs_dim":n,"act_dim":m,"horizon":T}
//   {"cmd":"reset","seed":s}    -> {"obs":[...]}
//   {"cmd":"step","action":[...]} -> {"obs":[...],"reward":r,"done":b}
// Throws ProtocolError naming the bad field, TimeoutError, or IoError when
// the peer goes away.
class ExternalEnv : public Environment {
 public:
  // Connects and queries the spec.
  explicit ExternalEnv(const ExternalConfig& config);
  ~ExternalEnv() override;
  ExternalEnv(const ExternalEnv&) = delete;
  ExternalEnv& operator=(const ExternalEnv&) = delete;

  const EnvSpec& spec() const override { return spec_; }
  void Reset(std::uint64_t seed, std::vector<double>& obs) override;
  StepResult Step(std::span<const double> action,
                  std::vector<double>& obs) override;

 private:
  class Channel;
  std::unique_ptr<Channel> channel_;
  EnvSpec spec_;
};

}  // namespace policyforge::envs

#endif  // POLICYFORGE_ENVS_EXTERNAL_H_
