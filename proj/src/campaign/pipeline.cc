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

#include "pipeline.h"

#include "idol/common/hash.h"

namespace idol::campaign::internal {

using compile::CompileStatus;
using nlohmann::json;

bool Evaluation::AllCompiled() const {
  for (const auto& outcome : outcomes) {
    if (outcome.status != CompileStatus::kOk) return false;
  }
  return true;
}

bool Evaluation::CompileAsymmetry() const {
  bool ok = false, failed = false;
  for (const auto& outcome : outcomes) {
    ok |= outcome.status == CompileStatus::kOk;
    failed |= outcome.status == CompileStatus::kFailure;
  }
  return ok && failed;
}

compile::CompileConfig GateConfig(const std::string& solc_path, const std::string& evm_version) {
  compile::CompileConfig config;
  config.solc_path = solc_path;
  config.evm_version = evm_version;
  return config;
}

Evaluation EvaluateMatrix(const std::string& source,
                          const std::vector<compile::CompileConfig>& configs,
                          const execute::CallPlan* plan, uint64_t plan_seed, int rounds,
                          compile::Compiler& compiler,
                          const std::vector<std::optional<compile::CompileOutcome>>* known) {
  Evaluation evaluation;
  for (size_t i = 0; i < configs.size(); ++i) {
    if (known != nullptr && i < known->size() && (*known)[i]) {
      evaluation.outcomes.push_back(*(*known)[i]);
    } else {
      evaluation.outcomes.push_back(compiler.Compile(source, configs[i]));
    }
  }
  if (plan != nullptr) {
    evaluation.plan = *plan;
  } else {
    for (const auto& outcome : evaluation.outcomes) {
      if (outcome.status == CompileStatus::kOk) {
        execute::PlanOptions options;
        options.rounds = rounds;
        evaluation.plan = execute::PlanCalls(outcome.artifact->abi, plan_seed, options);
        break;
      }
    }
  }
  std::vector<oracle::LabeledTrace> labeled;
  evaluation.traces.resize(configs.size());
  for (size_t i = 0; i < configs.size(); ++i) {
    if (evaluation.outcomes[i].status != CompileStatus::kOk || !evaluation.plan) continue;
    evaluation.traces[i] = execute::Run(*evaluation.outcomes[i].artifact, *evaluation.plan);
    ++evaluation.executions;
  }
  if (configs.empty() || !evaluation.traces[0]) {
    evaluation.verdict.kind = oracle::VerdictKind::kInconclusive;
    return evaluation;
  }
  for (size_t i = 0; i < configs.size(); ++i) {
    if (evaluation.traces[i]) labeled.push_back({configs[i], &*evaluation.traces[i]});
  }
  evaluation.verdict = oracle::Compare(labeled);
  if (evaluation.verdict.kind == oracle::VerdictKind::kAgree && !evaluation.AllCompiled()) {
    evaluation.verdict.kind = oracle::VerdictKind::kInconclusive;
  }
  return evaluation;
}

json CompileResultsJson(const std::vector<compile::CompileConfig>& configs,
                        const std::vector<compile::CompileOutcome>& outcomes) {
  json out = json::object();
  for (size_t i = 0; i < configs.size() && i < outcomes.size(); ++i) {
    json entry{{"status", compile::CompileStatusName(outcomes[i].status)},
               {"message", outcomes[i].message},
               {"fingerprint", configs[i].Fingerprint()}};
    if (outcomes[i].artifact) {
      entry["bytecode_sha256"] = ToHex(Sha256(outcomes[i].artifact->deploy_bytecode));
      entry["solc_version"] = outcomes[i].artifact->solc_version;
    }
    out[configs[i].Label()] = entry;
  }
  return out;
}

json TracesJson(const std::vector<compile::CompileConfig>& configs,
                const std::vector<std::optional<execute::ExecutionTrace>>& traces) {
  json out = json::object();
  for (size_t i = 0; i < configs.size() && i < traces.size(); ++i) {
    if (traces[i]) out[configs[i].Label()] = traces[i]->ToJson();
  }
  return out;
}

}  // namespace idol::campaign::internal
