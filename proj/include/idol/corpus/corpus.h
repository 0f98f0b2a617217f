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

#ifndef IDOL_CORPUS_CORPUS_H_
#define IDOL_CORPUS_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "idol/compile/compile.h"
#include "idol/corpus/source_unit.h"

namespace idol::corpus {

enum class EntryStatus : uint8_t { kValid, kUnsupported, kCompileFailed };
std::string_view EntryStatusName(EntryStatus status);

struct IndexEntry {
  std::string path;  // relative to the corpus root, '/' separated
  std::string id;    // empty when the file could not be read
  EntryStatus status = EntryStatus::kValid;
  std::string reason;
};

struct CorpusIndex {
  std::string root;
  std::string solc_version;
  std::vector<IndexEntry> entries;  // lexicographic by path

  size_t Count(EntryStatus status) const;
  nlohmann::json ToJson() const;
  static CorpusIndex FromJson(const nlohmann::json& json);
};

// Indexes every .sol file under root. A file is unsupported when it is
// unreadable, falls outside the parser subset, or its deployed contract
// needs constructor arguments; compile-failed when validator rejects it.
// Throws ConfigError when root is missing.
CorpusIndex Ingest(const std::string& root, const compile::CompileConfig& validator,
                   compile::Compiler& compiler);

// Deterministic draw of n valid units. Draws without replacement while
// n fits, then wraps around the same permutation.
std::vector<SourceUnit> Sample(const CorpusIndex& index, uint64_t seed, size_t n);

// Loads one indexed file and checks it still hashes to the recorded id.
SourceUnit LoadUnit(const CorpusIndex& index, const IndexEntry& entry);

}  // namespace idol::corpus

#endif  // IDOL_CORPUS_CORPUS_H_
