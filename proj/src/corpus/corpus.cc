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

#include "idol/corpus/corpus.h"

#include <algorithm>
#include <filesystem>

#include "idol/common/error.h"
#include "idol/common/fs.h"
#include "idol/common/prng.h"
#include "idol/syntax/parser.h"

namespace idol::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view EntryStatusName(EntryStatus status) {
  switch (status) {
    case EntryStatus::kValid: return "valid";
    case EntryStatus::kUnsupported: return "unsupported";
    case EntryStatus::kCompileFailed: return "compile-failed";
  }
  return "unknown";
}

namespace {

EntryStatus StatusFromName(const std::string& name) {
  if (name == "valid") return EntryStatus::kValid;
  if (name == "unsupported") return EntryStatus::kUnsupported;
  if (name == "compile-failed") return EntryStatus::kCompileFailed;
  throw HarnessError("unknown corpus entry status: " + name);
}

bool NeedsConstructorArguments(const json& abi) {
  for (const json& entry : abi) {
    if (entry.value("type", "") == "constructor" &&
        !entry.value("inputs", json::array()).empty()) {
      return true;
    }
  }
  return false;
}

}  // namespace

size_t CorpusIndex::Count(EntryStatus status) const {
  return static_cast<size_t>(std::count_if(entries.begin(), entries.end(),
                                           [&](const IndexEntry& e) { return e.status == status; }));
}

json CorpusIndex::ToJson() const {
  json list = json::array();
  for (const IndexEntry& entry : entries) {
    list.push_back({{"path", entry.path},
                    {"id", entry.id},
                    {"status", EntryStatusName(entry.status)},
                    {"reason", entry.reason}});
  }
  return json{{"root", root}, {"solc_version", solc_version}, {"entries", list}};
}

CorpusIndex CorpusIndex::FromJson(const json& j) {
  CorpusIndex index;
  index.root = j.at("root").get<std::string>();
  index.solc_version = j.at("solc_version").get<std::string>();
  for (const json& e : j.at("entries")) {
    IndexEntry entry;
    entry.path = e.at("path").get<std::string>();
    entry.id = e.at("id").get<std::string>();
    entry.status = StatusFromName(e.at("status").get<std::string>());
    entry.reason = e.value("reason", "");
    index.entries.push_back(std::move(entry));
  }
  return index;
}

CorpusIndex Ingest(const std::string& root, const compile::CompileConfig& validator,
                   compile::Compiler& compiler) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw ConfigError("corpus root is not a directory: " + root);
  CorpusIndex index;
  index.root = root;
  index.solc_version = compiler.Version(validator.solc_path);

  std::vector<std::string> paths;
  for (auto it = fs::recursive_directory_iterator(root, ec);
       !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (it->path().extension() == ".sol" && !it->is_directory()) {
      paths.push_back(fs::relative(it->path(), root).generic_string());
    }
  }
  if (ec) throw ConfigError("cannot enumerate corpus root " + root + ": " + ec.message());
  std::sort(paths.begin(), paths.end());

  for (const std::string& path : paths) {
    IndexEntry entry;
    entry.path = path;
    std::optional<std::string> source = ReadFile(fs::path(root) / path);
    if (!source) {
      entry.status = EntryStatus::kUnsupported;
      entry.reason = "unreadable file";
      index.entries.push_back(std::move(entry));
      continue;
    }
    SourceUnit unit = MakeSourceUnit(path, *source);
    entry.id = unit.id;
    syntax::ParseResult parsed = syntax::Parse(unit.source);
    if (const auto* failure = std::get_if<syntax::ParseFailure>(&parsed)) {
      entry.status = EntryStatus::kUnsupported;
      entry.reason = failure->Describe();
      index.entries.push_back(std::move(entry));
      continue;
    }
    compile::CompileOutcome outcome = compiler.Compile(unit.source, validator);
    if (outcome.status != compile::CompileStatus::kOk) {
      entry.status = EntryStatus::kCompileFailed;
      entry.reason = outcome.message;
    } else if (NeedsConstructorArguments(outcome.artifact->abi)) {
      entry.status = EntryStatus::kUnsupported;
      entry.reason = "constructor requires arguments";
    }
    index.entries.push_back(std::move(entry));
  }
  return index;
}

std::vector<SourceUnit> Sample(const CorpusIndex& index, uint64_t seed, size_t n) {
  std::vector<const IndexEntry*> valid;
  for (const IndexEntry& entry : index.entries) {
    if (entry.status == EntryStatus::kValid) valid.push_back(&entry);
  }
  std::vector<SourceUnit> units;
  if (valid.empty() || n == 0) return units;
  Prng prng(DeriveSeed(seed, "sample"));
  for (size_t i = valid.size(); i > 1; --i) {
    std::swap(valid[i - 1], valid[prng.Uniform(i)]);
  }
  for (size_t i = 0; i < n; ++i) units.push_back(LoadUnit(index, *valid[i % valid.size()]));
  return units;
}

SourceUnit LoadUnit(const CorpusIndex& index, const IndexEntry& entry) {
  std::optional<std::string> source = ReadFile(fs::path(index.root) / entry.path);
  if (!source) throw HarnessError("corpus file vanished: " + entry.path);
  SourceUnit unit = MakeSourceUnit(entry.path, *source);
  if (unit.id != entry.id) throw HarnessError("corpus file changed since ingest: " + entry.path);
  return unit;
}

}  // namespace idol::corpus
