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

#ifndef IDOL_CAMPAIGN_PIPELINE_H_
#define IDOL_CAMPAIGN_PIPELINE_H_

#include <optional>
#include <string>
#include <vector>

#include "idol/compile/compile.h"
#include "idol/execute/execute.h"
#include "idol/oracle/oracle.h"

namespace idol::campaign::internal {

// One source compiled across a config list and executed under one plan.
struct Evaluation {
  std::vector<compile::CompileOutcome> outcomes;  // parallel to the configs
  std::vector<std::optional<execute::ExecutionTrace>> traces;
  std::optional<execute::CallPlan> plan;
  oracle::Verdict verdict;
  int executions = 0;

  bool AllCompiled() const;
  // True when some configs compiled and others failed outright.
  bool CompileAsymmetry() const;
};

// The unoptimized legacy config used for the equivalence gate.
compile::CompileConfig GateConfig(const std::string& solc_path, const std::string& evm_version);

// When plan is null, the plan is built from the first compiled artifact's ABI
// with plan_seed and rounds. The verdict uses configs[0] as the baseline and
// is inconclusive when the baseline did not compile.
Evaluation EvaluateMatrix(const std::string& source,
                          const std::vector<compile::CompileConfig>& configs,
                          const execute::CallPlan* plan, uint64_t plan_seed, int rounds,
                          compile::Compiler& compiler,
                          const std::vector<std::optional<compile::CompileOutcome>>* known = nullptr);

nlohmann::json CompileResultsJson(const std::vector<compile::CompileConfig>& configs,
                                  const std::vector<compile::CompileOutcome>& outcomes);
nlohmann::json TracesJson(const std::vector<compile::CompileConfig>& configs,
                          const std::vector<std::optional<execute::ExecutionTrace>>& traces);

}  // namespace idol::campaign::internal

#endif  // IDOL_CAMPAIGN_PIPELINE_H_
