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

#ifndef IDOL_COMPILE_COMPILE_H_
#define IDOL_COMPILE_COMPILE_H_

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idol/common/bytes.h"
#include "idol/common/prng.h"

namespace idol::compile {

enum class Pipeline : uint8_t { kLegacy, kViaIr };

struct CompileConfig {
  bool optimize = false;
  int runs = 200;  // meaningful only when optimize is set
  Pipeline pipeline = Pipeline::kLegacy;
  std::string solc_path;
  std::string evm_version;  // empty selects the compiler default

  // Short stable name, e.g. "O0", "opt-runs1", "opt-runs200+ir".
  std::string Label() const;
  // Covers every field; distinct configs never share a fingerprint.
  std::string Fingerprint() const;
  nlohmann::json ToJson() const;
  static CompileConfig FromJson(const nlohmann::json& json);
  friend bool operator==(const CompileConfig&, const CompileConfig&) = default;
};

enum class ViaIrMode : uint8_t { kOff, kOnly, kBoth };

struct MatrixOptions {
  std::string solc_path;
  std::string evm_version;
  ViaIrMode via_ir = ViaIrMode::kOff;
  std::vector<int> runs_list{1, 200};
  bool include_unoptimized = true;
};

// Unoptimized first, then each runs value in order; legacy before via-IR.
std::vector<CompileConfig> ConfigMatrix(const MatrixOptions& options);

struct CompiledArtifact {
  CompileConfig config;
  std::string contract_name;
  Bytes deploy_bytecode;
  Bytes runtime_bytecode;
  nlohmann::json abi = nlohmann::json::array();
  std::string solc_version;
  std::string diagnostics;

  nlohmann::json ToJson() const;
  static CompiledArtifact FromJson(const nlohmann::json& json);
};

enum class CompileStatus : uint8_t { kOk, kFailure, kTimeout };
std::string_view CompileStatusName(CompileStatus status);

struct CompileOutcome {
  CompileStatus status = CompileStatus::kFailure;
  std::optional<CompiledArtifact> artifact;
  std::string message;  // first solc error, or the timeout notice
  bool cache_hit = false;
};

// Builds the standard-json request. Metadata hashes are suppressed so the
// bytecode depends only on source and settings.
nlohmann::json StandardJsonInput(const std::string& source, const CompileConfig& config);

// Picks the deployable contract: the last one in source order that produced
// bytecode. Returns a failure outcome when the output carries errors.
CompileOutcome ParseStandardJsonOutput(const std::string& source,
                                       const nlohmann::json& output,
                                       const CompileConfig& config,
                                       const std::string& solc_version);

// One compiler process. A solc-js install (a directory holding soljson.js or
// node_modules/solc) runs as a persistent node server; anything else is
// treated as a native binary driven by --standard-json per request.
class SolcDriver {
 public:
  explicit SolcDriver(std::string solc_path,
                      std::chrono::milliseconds timeout = std::chrono::seconds(60));
  ~SolcDriver();
  SolcDriver(const SolcDriver&) = delete;
  SolcDriver& operator=(const SolcDriver&) = delete;

  const std::string& version() const { return version_; }
  const std::string& path() const { return path_; }

  // Returns the raw standard-json output, or std::nullopt on timeout.
  std::optional<nlohmann::json> Run(const nlohmann::json& input);

 private:
  void StartServer();

  std::string path_;
  std::string module_dir_;  // set for solc-js
  std::chrono::milliseconds timeout_;
  std::string version_;
  class Server;
  std::unique_ptr<Server> server_;
};

struct CacheStats {
  uint64_t hits = 0;
  uint64_t misses = 0;
  uint64_t audits = 0;
};

// Compiles through an on-disk cache keyed by (source hash, config
// fingerprint, solc version). Cache files are written atomically, so
// concurrent writers of the same key are benign.
class Compiler {
 public:
  // An empty cache_dir disables caching. audit_seed drives the choice of
  // which hits are re-verified against a fresh invocation.
  Compiler(std::filesystem::path cache_dir, uint64_t audit_seed,
           std::chrono::milliseconds timeout = std::chrono::seconds(60),
           double audit_rate = 0.01);
  ~Compiler();

  CompileOutcome Compile(const std::string& source, const CompileConfig& config);

  // Exact version reported by the compiler at config.solc_path.
  std::string Version(const std::string& solc_path);

  CacheStats stats() const;

 private:
  SolcDriver& Driver(const std::string& solc_path);
  CompileOutcome Fresh(const std::string& source, const CompileConfig& config);

  std::filesystem::path cache_dir_;
  std::chrono::milliseconds timeout_;
  double audit_rate_;
  mutable std::mutex mutex_;
  Prng audit_prng_;
  std::vector<std::unique_ptr<SolcDriver>> drivers_;
  CacheStats stats_;
};

nlohmann::json OutcomeToJson(const CompileOutcome& outcome);
CompileOutcome OutcomeFromJson(const nlohmann::json& json);

}  // namespace idol::compile

#endif  // IDOL_COMPILE_COMPILE_H_
