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

#ifndef POLICYFORGE_GENERATION_HTTP_GENERATOR_H_
#define POLICYFORGE_GENERATION_HTTP_GENERATOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "policyforge/generation/generator.h"

namespace policyforge::generation {

// Client for an OpenAI-compatible chat/completions endpoint. Asks for `n`
// choices in one request and tops up with single-sample requests when the
// server returns fewer. Each request is retried with exponential backoff;
// after the last attempt the batch comes back short (possibly empty).
class HttpGenerator : public Generator {
 public:
  explicit HttpGenerator(GeneratorConfig config);

  std::vector<std::string> Sample(const Prompt& prompt, int n,
                                  std::uint64_t seed) override;

  // GETs <endpoint>/models. Any HTTP response counts as reachable.
  void Probe() override;

  // Events from the last Sample call (retries, failures), for logging.
  const std::vector<std::string>& events() const { return events_; }

 private:
  struct Url {
    std::string origin;  // scheme://host[:port]
    std::string path;    // base path without a trailing slash
  };
  static Url ParseUrl(const std::string& url);

  // One chat/completions call with retries. Empty on failure.
  std::vector<std::string> Request(const std::string& prompt, int n, std::uint64_t seed);

  GeneratorConfig config_;
  Url url_;
  std::string api_key_;
  std::vector<std::string> events_;
};

}  // namespace policyforge::generation

#endif  // POLICYFORGE_GENERATION_HTTP_GENERATOR_H_
