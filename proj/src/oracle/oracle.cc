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

#include "idol/oracle/oracle.h"

#include <algorithm>

#include "idol/common/error.h"
#include "idol/common/hash.h"

namespace idol::oracle {

using execute::CallRecord;
using execute::ExecutionTrace;
using nlohmann::json;

std::string_view VerdictKindName(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kAgree: return "agree";
    case VerdictKind::kDivergence: return "divergence";
    case VerdictKind::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

json Divergence::ToJson() const {
  return json{{"call_index", call_index},           {"selector", selector},
              {"baseline_config", baseline_config}, {"other_config", other_config},
              {"field", field},                     {"baseline_value", baseline_value},
              {"other_value", other_value}};
}

Divergence Divergence::FromJson(const json& j) {
  Divergence d;
  d.call_index = j.at("call_index").get<int>();
  d.selector = j.at("selector").get<std::string>();
  d.baseline_config = j.at("baseline_config").get<std::string>();
  d.other_config = j.at("other_config").get<std::string>();
  d.field = j.at("field").get<std::string>();
  d.baseline_value = j.at("baseline_value").get<std::string>();
  d.other_value = j.at("other_value").get<std::string>();
  return d;
}

json Verdict::ToJson() const {
  json j{{"kind", VerdictKindName(kind)}, {"poisoned_calls", poisoned_calls}};
  j["divergence"] = divergence ? divergence->ToJson() : json(nullptr);
  return j;
}

namespace {

struct FieldValue {
  const char* field;
  std::string value;
};

std::vector<FieldValue> CallFields(const CallRecord& call) {
  return {{kFieldStatus, execute::StatusText(call.status, call.failure)},
          {kFieldReturnData, ToHexPrefixed(call.return_data)},
          {kFieldLogs, execute::LogsJson(call.logs).dump()},
          {kFieldStorage, ToHexPrefixed(call.storage_digest)}};
}

// First difference between two traces, assuming both deployments were
// compared already. Out-of-gas positions are skipped and collected.
std::optional<Divergence> FirstCallDifference(const ExecutionTrace& base,
                                              const ExecutionTrace& other,
                                              std::vector<int>& poisoned) {
  size_t count = std::min(base.calls.size(), other.calls.size());
  for (size_t i = 0; i < count; ++i) {
    const CallRecord& a = base.calls[i];
    const CallRecord& b = other.calls[i];
    if (a.OutOfGas() || b.OutOfGas()) {
      poisoned.push_back(static_cast<int>(i));
      continue;
    }
    std::vector<FieldValue> fa = CallFields(a);
    std::vector<FieldValue> fb = CallFields(b);
    for (size_t f = 0; f < fa.size(); ++f) {
      if (fa[f].value != fb[f].value) {
        Divergence d;
        d.call_index = static_cast<int>(i);
        d.selector = a.selector;
        d.field = fa[f].field;
        d.baseline_value = fa[f].value;
        d.other_value = fb[f].value;
        return d;
      }
    }
  }
  if (base.calls.size() != other.calls.size()) {
    throw HarnessError("traces of one plan differ in call count");
  }
  return std::nullopt;
}

std::optional<Divergence> FirstDifference(const ExecutionTrace& base, const ExecutionTrace& other,
                                          std::vector<int>& poisoned) {
  std::string a = execute::DeployOutcomeText(base);
  std::string b = execute::DeployOutcomeText(other);
  if (a != b) {
    bool oog = base.deploy_failure == evm::Failure::kOutOfGas ||
               other.deploy_failure == evm::Failure::kOutOfGas;
    if (oog) {
      poisoned.push_back(-1);
      return std::nullopt;
    }
    Divergence d;
    d.selector = "deploy";
    d.field = kFieldDeploy;
    d.baseline_value = a;
    d.other_value = b;
    return d;
  }
  if (!base.deployed()) return std::nullopt;
  return FirstCallDifference(base, other, poisoned);
}

// Position rank: deployment first, then calls by index, then field order.
std::pair<int, int> Rank(const Divergence& d) {
  static const std::vector<std::string> kOrder = {kFieldDeploy, kFieldStatus, kFieldReturnData,
                                                  kFieldLogs, kFieldStorage};
  int field = static_cast<int>(std::find(kOrder.begin(), kOrder.end(), d.field) - kOrder.begin());
  return {d.call_index, field};
}

}  // namespace

Verdict Compare(const std::vector<LabeledTrace>& traces) {
  Verdict verdict;
  if (traces.empty()) return verdict;
  const LabeledTrace& base = traces[0];
  for (const LabeledTrace& entry : traces) {
    if (entry.trace->plan_hash != base.trace->plan_hash) {
      throw HarnessError("compared traces were produced by different plans");
    }
  }
  std::vector<int> poisoned;
  for (size_t i = 1; i < traces.size(); ++i) {
    std::optional<Divergence> found = FirstDifference(*base.trace, *traces[i].trace, poisoned);
    if (!found) continue;
    found->baseline_config = base.config.Label();
    found->other_config = traces[i].config.Label();
    if (!verdict.divergence || Rank(*found) < Rank(*verdict.divergence) ||
        (Rank(*found) == Rank(*verdict.divergence) &&
         found->other_config < verdict.divergence->other_config)) {
      verdict.divergence = std::move(found);
    }
  }
  std::sort(poisoned.begin(), poisoned.end());
  poisoned.erase(std::unique(poisoned.begin(), poisoned.end()), poisoned.end());
  verdict.poisoned_calls = poisoned;
  if (verdict.divergence) {
    verdict.kind = VerdictKind::kDivergence;
  } else if (!poisoned.empty()) {
    verdict.kind = VerdictKind::kInconclusive;
  }
  return verdict;
}

Equivalence CheckMutantEquivalence(const ExecutionTrace& parent, const ExecutionTrace& mutant) {
  Equivalence result;
  if (parent.ToJson().dump() == mutant.ToJson().dump()) return result;
  result.equivalent = false;
  if (parent.plan_hash != mutant.plan_hash) {
    result.detail = "plan hash differs";
    return result;
  }
  std::string a = execute::DeployOutcomeText(parent);
  std::string b = execute::DeployOutcomeText(mutant);
  if (a != b) {
    result.detail = "deploy_outcome: " + a + " vs " + b;
    return result;
  }
  for (size_t i = 0; i < std::min(parent.calls.size(), mutant.calls.size()); ++i) {
    std::vector<FieldValue> fa = CallFields(parent.calls[i]);
    std::vector<FieldValue> fb = CallFields(mutant.calls[i]);
    for (size_t f = 0; f < fa.size(); ++f) {
      if (fa[f].value != fb[f].value) {
        result.detail = "call " + std::to_string(i) + " (" + parent.calls[i].signature + ") " +
                        fa[f].field + ": " + fa[f].value + " vs " + fb[f].value;
        return result;
      }
    }
  }
  result.detail = "traces differ outside compared fields";
  return result;
}

std::string BugSignature::Id() const { return Sha256Hex(ToJson().dump()).substr(0, 16); }

json BugSignature::ToJson() const {
  return json{{"solc_version", solc_version}, {"config_pair", config_pair}, {"field", field},
              {"selector", selector},         {"diff_hash", diff_hash}};
}

BugSignature BugSignature::FromJson(const json& j) {
  BugSignature s;
  s.solc_version = j.at("solc_version").get<std::string>();
  s.config_pair = j.at("config_pair").get<std::string>();
  s.field = j.at("field").get<std::string>();
  s.selector = j.at("selector").get<std::string>();
  s.diff_hash = j.at("diff_hash").get<std::string>();
  return s;
}

BugSignature Signature(const Verdict& verdict, const std::string& solc_version) {
  if (verdict.kind != VerdictKind::kDivergence || !verdict.divergence) {
    throw HarnessError("signature requested for a verdict without divergence");
  }
  const Divergence& d = *verdict.divergence;
  BugSignature s;
  s.solc_version = solc_version;
  s.config_pair = d.baseline_config + "|" + d.other_config;
  s.field = d.field;
  s.selector = d.selector;
  s.diff_hash = Sha256Hex(d.baseline_value + "\n" + d.other_value).substr(0, 16);
  return s;
}

BugSignature CompileDivergenceSignature(
    const std::string& solc_version,
    const std::vector<std::pair<std::string, compile::CompileStatus>>& statuses) {
  BugSignature s;
  s.solc_version = solc_version;
  std::string ok, failed;
  for (const auto& [label, status] : statuses) {
    std::string& side = status == compile::CompileStatus::kOk ? ok : failed;
    if (!side.empty()) side += ",";
    side += label;
  }
  s.config_pair = ok + "|" + failed;
  s.field = "compile";
  s.selector = "compile";
  std::string pattern;
  for (const auto& [label, status] : statuses) {
    pattern += label + "=" + std::string(compile::CompileStatusName(status)) + ";";
  }
  s.diff_hash = Sha256Hex(pattern).substr(0, 16);
  return s;
}

std::string_view ClassificationName(Classification classification) {
  switch (classification) {
    case Classification::kBehavioral: return "behavioral";
    case Classification::kCompileDivergence: return "compile-divergence";
    case Classification::kMutantNonEquivalence: return "mutant-nonequivalence";
  }
  return "unknown";
}

Classification ClassificationFromName(std::string_view name) {
  if (name == "behavioral") return Classification::kBehavioral;
  if (name == "compile-divergence") return Classification::kCompileDivergence;
  if (name == "mutant-nonequivalence") return Classification::kMutantNonEquivalence;
  throw HarnessError("unknown classification: " + std::string(name));
}

}  // namespace idol::oracle
