// Copyright 2026 The IDOL Authors
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

#ifndef IDOL_TOOLS_CORPUS_GEN_H_
#define IDOL_TOOLS_CORPUS_GEN_H_

#include <cstddef>
#include <cstdint>
#include <string>

namespace idol::tools {

struct CorpusPlan {
  size_t files = 0;
  size_t unsupported = 0;     // files using an import
  size_t compile_failed = 0;  // files with a type error
};

// One synthetic contract. Deterministic in (seed, index).
std::string GenerateContract(uint64_t seed, size_t index);

// Writes count files unit_NNNN.sol under dir. Every 50th file imports a
// sibling (unsupported) and every 97th holds a type error.
CorpusPlan WriteCorpus(const std::string& dir, uint64_t seed, size_t count);

}  // namespace idol::tools

#endif  // IDOL_TOOLS_CORPUS_GEN_H_
