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

#ifndef IDOL_ORACLE_ORACLE_H_
#define IDOL_ORACLE_ORACLE_H_

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idol/compile/compile.h"
#include "idol/execute/execute.h"

namespace idol::oracle {

enum class VerdictKind : uint8_t { kAgree, kDivergence, kInconclusive };
std::string_view VerdictKindName(VerdictKind kind);

// Field names in comparison order; deploy_outcome precedes every call.
inline constexpr const char* kFieldDeploy = "deploy_outcome";
inline constexpr const char* kFieldStatus = "status";
inline constexpr const char* kFieldReturnData = "return_data";
inline constexpr const char* kFieldLogs = "logs";
inline constexpr const char* kFieldStorage = "storage_digest";

struct Divergence {
  int call_index = -1;        // -1 for deployment
  std::string selector;       // "deploy" for deployment
  std::string baseline_config;
  std::string other_config;
  std::string field;
  std::string baseline_value;
  std::string other_value;

  nlohmann::json ToJson() const;
  static Divergence FromJson(const nlohmann::json& json);
};

struct Verdict {
  VerdictKind kind = VerdictKind::kAgree;
  std::optional<Divergence> divergence;
  std::vector<int> poisoned_calls;  // call indices skipped for out-of-gas

  nlohmann::json ToJson() const;
};

struct LabeledTrace {
  compile::CompileConfig config;
  const execute::ExecutionTrace* trace = nullptr;
};

// The first entry is the baseline. Reports the earliest differing position;
// ties between configs resolve by label, so the result does not depend on
// the order of the non-baseline entries. Throws HarnessError when plan
// hashes differ.
Verdict Compare(const std::vector<LabeledTrace>& traces);

struct Equivalence {
  bool equivalent = true;
  std::string detail;  // first differing position when not equivalent
};

// Byte-wise comparison of the canonical trace forms.
Equivalence CheckMutantEquivalence(const execute::ExecutionTrace& parent,
                                   const execute::ExecutionTrace& mutant);

struct BugSignature {
  std::string solc_version;
  std::string config_pair;  // "O0|opt-runs1"
  std::string field;
  std::string selector;
  std::string diff_hash;

  // Short stable identifier, also the findings file stem.
  std::string Id() const;
  nlohmann::json ToJson() const;
  static BugSignature FromJson(const nlohmann::json& json);
  friend bool operator==(const BugSignature&, const BugSignature&) = default;
};

// Throws HarnessError unless the verdict is a divergence.
BugSignature Signature(const Verdict& verdict, const std::string& solc_version);

// Signature for a unit that compiles under some configs but not others.
BugSignature CompileDivergenceSignature(
    const std::string& solc_version,
    const std::vector<std::pair<std::string, compile::CompileStatus>>& statuses);

enum class Classification : uint8_t { kBehavioral, kCompileDivergence, kMutantNonEquivalence };
std::string_view ClassificationName(Classification classification);
Classification ClassificationFromName(std::string_view name);

}  // namespace idol::oracle

#endif  // IDOL_ORACLE_ORACLE_H_
