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

#include "idol/corpus/source_unit.h"

#include <regex>

#include "idol/common/hash.h"

namespace idol::corpus {

std::string ExtractPragmaRange(const std::string& source) {
  static const std::regex kPragma(R"(pragma\s+solidity\s+([^;]*);)");
  std::smatch match;
  if (!std::regex_search(source, match, kPragma)) return "";
  std::string range = match[1].str();
  while (!range.empty() && std::isspace(static_cast<unsigned char>(range.back()))) {
    range.pop_back();
  }
  return range;
}

SourceUnit MakeSourceUnit(std::string path, std::string source) {
  SourceUnit unit;
  unit.id = Sha256Hex(source);
  unit.path = std::move(path);
  unit.pragma_range = ExtractPragmaRange(source);
  unit.byte_len = source.size();
  unit.source = std::move(source);
  return unit;
}

}  // namespace idol::corpus
