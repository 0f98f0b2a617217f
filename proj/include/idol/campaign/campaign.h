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

#ifndef IDOL_CAMPAIGN_CAMPAIGN_H_
#define IDOL_CAMPAIGN_CAMPAIGN_H_

#include <cstdint>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idol/compile/compile.h"
#include "idol/corpus/source_unit.h"
#include "idol/mutate/transform.h"
#include "idol/oracle/oracle.h"

namespace idol::campaign {

struct CampaignConfig {
  std::string corpus_root;
  std::vector<std::string> solc_paths;
  uint64_t seed = 0;
  size_t units = 0;  // 0 draws every valid unit once
  int budget = 3;
  std::vector<mutate::TransformKind> kinds{std::begin(mutate::kAllKinds), std::end(mutate::kAllKinds)};
  compile::ViaIrMode via_ir = compile::ViaIrMode::kOff;
  std::vector<int> runs_list{1, 200};
  std::string evm_version;
  int jobs = 1;
  std::string out_dir;
  int rounds = 2;
  bool reduce = false;
  bool dol_baseline = false;
  int compile_timeout_s = 60;

  nlohmann::json ToJson() const;
  static CampaignConfig FromJson(const nlohmann::json& json);
  // Throws ConfigError on unusable values.
  void Validate() const;
};

// Execution controls that never affect results and are not echoed.
struct RunControl {
  // Stops after this many freshly processed units, leaving resumable state.
  std::optional<size_t> stop_after_units;
  double cache_audit_rate = 0.01;
};

struct ReductionInfo {
  std::string status = "not-run";  // not-run | reduced | unchanged | aborted
  std::string message;
  size_t original_bytes = 0;
  size_t minimized_bytes = 0;
  int predicate_runs = 0;
};

struct BugReport {
  oracle::Classification classification = oracle::Classification::kBehavioral;
  oracle::BugSignature signature;
  corpus::SourceUnit parent;
  std::string mutant_source;
  nlohmann::json provenance;
  std::vector<compile::CompileConfig> configs;
  nlohmann::json compile_results;  // label -> {status, message, bytecode_sha256}
  nlohmann::json traces;           // label -> canonical trace
  nlohmann::json verdict;
  std::string detail;
  uint64_t plan_seed = 0;
  int rounds = 0;
  int occurrences = 1;
  std::optional<std::string> minimized_source;
  ReductionInfo reduction;

  nlohmann::json ToJson() const;
  static BugReport FromJson(const nlohmann::json& json);
};

struct CampaignReport {
  nlohmann::json json;  // the document written to campaign.json
  std::vector<BugReport> findings;  // deduplicated, canonical order
  int exit_code = 0;
  bool interrupted = false;
};

// Exit codes.
inline constexpr int kExitClean = 0;
inline constexpr int kExitBehavioral = 10;
inline constexpr int kExitCompileDivergence = 11;
inline constexpr int kExitNonEquivalence = 20;

// sample -> mutate -> compile matrix -> execute -> compare. Writes
// campaign.json and findings/ under out_dir, plus per-unit state that lets
// an interrupted run resume without recomputation.
CampaignReport RunCampaign(const CampaignConfig& config, const RunControl& control = {});

// The same pipeline with mutation disabled.
CampaignReport RunDolBaseline(const CampaignConfig& config, const RunControl& control = {});

// Removes the run-dependent "timing" object for determinism comparisons.
nlohmann::json StripTiming(nlohmann::json report);

// Re-evaluates a report's mutant source under its configs and plan seed.
// Returns the fresh verdict.
oracle::Verdict ReplayReport(const BugReport& report, compile::Compiler& compiler);

// Delta debugging over contract members and statements. Keeps removals that
// preserve the divergent field and config pair, ends 1-minimal, and returns
// the report with minimized_source and reduction filled in.
BugReport Reduce(const BugReport& report, compile::Compiler& compiler);

struct EquivalenceCheck {
  bool equivalent = false;
  std::string detail;
  nlohmann::json parent_trace;
  nlohmann::json mutant_trace;
};

// Compiles both sources at the unoptimized config and compares their traces
// under the parent's call plan.
EquivalenceCheck CheckEquivalence(const std::string& parent_source,
                                  const std::string& mutant_source,
                                  const std::string& solc_path, uint64_t seed, int rounds,
                                  compile::Compiler& compiler);

}  // namespace idol::campaign

#endif  // IDOL_CAMPAIGN_CAMPAIGN_H_
