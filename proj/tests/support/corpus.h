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

#ifndef POLICYFORGE_TESTS_SUPPORT_CORPUS_H_
#define POLICYFORGE_TESTS_SUPPORT_CORPUS_H_

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace policyforge::testing {

struct CorpusProgram {
  std::string name;
  std::size_t obs_dim;
};

// Policy snippets from published LLM-generated controllers, with the
// observation size each indexes into.
inline const std::vector<CorpusProgram>& Corpus() {
  static const std::vector<CorpusProgram> kCorpus = {
      {"pendulum_swingup", 3}, {"cheetah", 17},     {"quadruped", 78},
      {"ball_in_cup", 8},      {"unitree_a1", 27},
  };
  return kCorpus;
}

inline std::string ReadCorpus(const std::string& name) {
  std::ifstream in(std::string(POLICYFORGE_CORPUS_DIR) + "/" + name + ".py");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace policyforge::testing

#endif  // POLICYFORGE_TESTS_SUPPORT_CORPUS_H_
