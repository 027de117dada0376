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

#ifndef POLICYFORGE_GENERATION_GENERATOR_H_
#define POLICYFORGE_GENERATION_GENERATOR_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "policyforge/common/errors.h"
#include "policyforge/generation/extract.h"
#include "policyforge/generation/prompt.h"

namespace policyforge::generation {

// The generator could not be reached (startup probe or exhausted retries).
class GeneratorUnavailable : public Error {
 public:
  using Error::Error;
};

struct GeneratorConfig {
  std::string kind = "mock";  // mock | http
  // HTTP: base URL of a chat/completions API, e.g. http://localhost:8000/v1.
  std::string endpoint;
  std::string model;
  double temperature = 0.8;
  int max_tokens = 1024;
  int batch_size = 4;
  double request_timeout_s = 120.0;
  std::string api_key_env = "POLICYFORGE_API_KEY";
  int max_attempts = 3;
  double backoff_s = 0.5;
  // Mock: artificial latency per batch, for pipeline experiments.
  double mock_latency_s = 0.0;
};

// Produces raw text samples for a prompt. Implementations may block on I/O.
class Generator {
 public:
  virtual ~Generator() = default;

  // Up to `n` raw outputs. Must not throw for transient failures; an
  // unreachable service yields an empty vector.
  virtual std::vector<std::string> Sample(const Prompt& prompt, int n,
                                          std::uint64_t seed) = 0;

  // Checks reachability before a run. Throws GeneratorUnavailable.
  virtual void Probe() {}
};

struct Candidate {
  std::string raw;
  Extraction extraction;
};

struct CandidateBatch {
  std::vector<Candidate> candidates;  // every raw output, in order
  double latency_s = 0.0;

  // Sources of the candidates that parsed.
  std::vector<std::string> sources() const;
};

// Samples and extracts one batch.
CandidateBatch GenerateBatch(Generator& generator, const Prompt& prompt, int n,
                             std::uint64_t seed);

struct EnvShape {
  std::size_t obs_dim = 1;
  std::size_t act_dim = 1;
};

// Builds the generator named by `config.kind`. Throws ConfigError.
std::unique_ptr<Generator> MakeGenerator(const GeneratorConfig& config,
                                         const EnvShape& shape);

}  // namespace policyforge::generation

#endif  // POLICYFORGE_GENERATION_GENERATOR_H_
