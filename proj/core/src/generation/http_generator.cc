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

#include "policyforge/generation/http_generator.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

namespace policyforge::generation {
namespace {

using nlohmann::json;

constexpr std::string_view kSystemPrompt =
    "You write Python control policies. Reply with one complete definition of "
    "policy_v2 in a fenced code block. Use only arithmetic, comparisons, "
    "if/elif/else, numpy-style math functions and indexing; no loops.";

std::unique_ptr<httplib::Client> MakeClient(const std::string& origin, double timeout_s) {
  auto client = std::make_unique<httplib::Client>(origin);
  const auto seconds = static_cast<time_t>(timeout_s);
  const auto micros = static_cast<time_t>((timeout_s - static_cast<double>(seconds)) * 1e6);
  client->set_connection_timeout(std::min<time_t>(seconds, 10), micros);
  client->set_read_timeout(seconds, micros);
  client->set_write_timeout(seconds, micros);
  return client;
}

}  // namespace

HttpGenerator::Url HttpGenerator::ParseUrl(const std::string& url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw ConfigError("generator endpoint '" + url + "' needs an http:// or https:// scheme");
  }
  const std::string scheme_name = url.substr(0, scheme);
  if (scheme_name != "http" && scheme_name != "https") {
    throw ConfigError("generator endpoint scheme must be http or https");
  }
  const std::size_t path = url.find('/', scheme + 3);
  Url out;
  out.origin = url.substr(0, path);
  out.path = path == std::string::npos ? "" : url.substr(path);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

HttpGenerator::HttpGenerator(GeneratorConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw ConfigError("http generator needs an endpoint");
  url_ = ParseUrl(config_.endpoint);
  if (!config_.api_key_env.empty()) {
    if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
  }
}

void HttpGenerator::Probe() {
  auto client = MakeClient(url_.origin, std::min(config_.request_timeout_s, 10.0));
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  const httplib::Result res = client->Get(url_.path + "/models", headers);
  if (!res) {
    throw GeneratorUnavailable("generator endpoint " + config_.endpoint +
                               " unreachable: " + httplib::to_string(res.error()));
  }
}

std::vector<std::string> HttpGenerator::Request(const std::string& prompt, int n,
                                                std::uint64_t seed) {
  json body = {{"model", config_.model},
               {"messages",
                json::array({{{"role", "system"}, {"content", kSystemPrompt}},
                             {{"role", "user"}, {"content", prompt}}})},
               {"temperature", config_.temperature},
               {"max_tokens", config_.max_tokens},
               {"n", n},
               {"seed", seed & 0x7fffffffULL}};
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  auto client = MakeClient(url_.origin, config_.request_timeout_s);
  double backoff = config_.backoff_s;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    const httplib::Result res = client->Post(url_.path + "/chat/completions", headers,
                                             body.dump(), "application/json");
    std::string problem;
    if (!res) {
      problem = httplib::to_string(res.error());
    } else if (res->status != 200) {
      problem = "HTTP " + std::to_string(res->status);
    } else {
      const json reply = json::parse(res->body, nullptr, false);
      if (reply.is_discarded() || !reply.contains("choices") ||
          !reply["choices"].is_array()) {
        problem = "malformed response body";
      } else {
        std::vector<std::string> out;
        for (const json& choice : reply["choices"]) {
          if (choice.contains("message") && choice["message"].contains("content") &&
              choice["message"]["content"].is_string()) {
            out.push_back(choice["message"]["content"].get<std::string>());
          } else if (choice.contains("text") && choice["text"].is_string()) {
            out.push_back(choice["text"].get<std::string>());
          }
        }
        return out;
      }
    }
    events_.push_back("attempt " + std::to_string(attempt) + " failed: " + problem);
    spdlog::warn("generator request attempt {}/{} failed: {}", attempt,
                 config_.max_attempts, problem);
    if (attempt < config_.max_attempts) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff *= 2.0;
    }
  }
  events_.push_back("generator unavailable after " + std::to_string(config_.max_attempts) +
                    " attempts");
  return {};
}

std::vector<std::string> HttpGenerator::Sample(const Prompt& prompt, int n,
                                               std::uint64_t seed) {
  events_.clear();
  std::vector<std::string> out = Request(prompt.text, n, seed);
  // Servers without n-sampling return a single choice; top up one at a time.
  bool failed = out.empty();
  for (std::uint64_t k = 1; !failed && static_cast<int>(out.size()) < n; ++k) {
    std::vector<std::string> more = Request(prompt.text, 1, seed + k);
    if (more.empty()) {
      failed = true;
      break;
    }
    out.push_back(std::move(more.front()));
  }
  if (static_cast<int>(out.size()) > n) out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace policyforge::generation
