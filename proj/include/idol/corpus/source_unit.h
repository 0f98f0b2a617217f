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

#ifndef IDOL_CORPUS_SOURCE_UNIT_H_
#define IDOL_CORPUS_SOURCE_UNIT_H_

#include <cstdint>
#include <string>

namespace idol::corpus {

struct SourceUnit {
  std::string id;  // sha256 hex of source
  std::string path;
  std::string source;
  std::string pragma_range;  // empty when the file declares none
  uint64_t byte_len = 0;
};

SourceUnit MakeSourceUnit(std::string path, std::string source);

// Text of the first "pragma solidity ...;" directive, without the keyword.
std::string ExtractPragmaRange(const std::string& source);

}  // namespace idol::corpus

#endif  // IDOL_CORPUS_SOURCE_UNIT_H_
