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

#include "policyforge/generation/generator.h"

#include <chrono>

#include "policyforge/generation/http_generator.h"
#include "policyforge/generation/mock_generator.h"

namespace policyforge::generation {

std::vector<std::string> CandidateBatch::sources() const {
  std::vector<std::string> out;
  for (const Candidate& c : candidates) {
    if (c.extraction.ok()) out.push_back(c.extraction.source);
  }
  return out;
}

CandidateBatch GenerateBatch(Generator& generator, const Prompt& prompt, int n,
                             std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> raw = generator.Sample(prompt, n, seed);
  if (raw.size() > static_cast<std::size_t>(n)) raw.resize(static_cast<std::size_t>(n));
  CandidateBatch batch;
  batch.candidates.reserve(raw.size());
  for (std::string& text : raw) {
    Candidate c;
    c.extraction = ExtractFunction(text);
    c.raw = std::move(text);
    batch.candidates.push_back(std::move(c));
  }
  batch.latency_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return batch;
}

std::unique_ptr<Generator> MakeGenerator(const GeneratorConfig& config,
                                         const EnvShape& shape) {
  if (config.batch_size < 1) throw ConfigError("generator batch_size must be at least 1");
  if (config.kind == "mock") {
    MockOptions options;
    options.obs_dim = shape.obs_dim;
    options.act_dim = shape.act_dim;
    options.latency_s = config.mock_latency_s;
    return std::make_unique<MockGenerator>(options);
  }
  if (config.kind == "http") return std::make_unique<HttpGenerator>(config);
  throw ConfigError("unknown generator kind '" + config.kind + "' (expected mock or http)");
}

}  // namespace policyforge::generation
