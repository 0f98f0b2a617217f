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

#ifndef IDOL_EXECUTE_EXECUTE_H_
#define IDOL_EXECUTE_EXECUTE_H_

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "idol/common/bytes.h"
#include "idol/compile/compile.h"
#include "idol/evm/evm.h"

namespace idol::execute {

struct PlanOptions {
  int rounds = 2;
  // Lengths drawn for bytes, strings and dynamic arrays.
  std::vector<size_t> dynamic_lengths{0, 1, 31, 32, 33};
};

struct PlannedCall {
  std::string signature;
  std::array<uint8_t, 4> selector{};
  Bytes calldata;  // selector followed by encoded arguments
  evm::Address sender{};
  int round = 0;
};

// Everything needed to replay the same interaction with any artifact that
// shares the ABI. Never depends on bytecode.
struct CallPlan {
  uint64_t seed = 0;
  int rounds = 0;
  evm::Environment env;
  evm::Address deployer{};
  std::vector<evm::Address> senders;
  evm::u256 initial_balance = 0;
  int64_t gas_limit = 0;
  std::vector<PlannedCall> calls;
  std::vector<std::string> skipped;  // functions with unsupported parameter types

  nlohmann::json ToJson() const;
  // sha256 over the canonical JSON form.
  std::string Hash() const;
};

// The fixed four-address sender pool; the first entry deploys.
const std::vector<evm::Address>& SenderPool();

CallPlan PlanCalls(const nlohmann::json& abi, uint64_t seed, const PlanOptions& options = {});

struct CallRecord {
  std::string selector;  // lowercase hex
  std::string signature;
  evm::Status status = evm::Status::kSuccess;
  evm::Failure failure = evm::Failure::kNone;
  Bytes return_data;
  std::vector<evm::Log> logs;
  Hash32 storage_digest{};

  bool OutOfGas() const { return failure == evm::Failure::kOutOfGas; }
};

struct ExecutionTrace {
  std::string plan_hash;
  std::vector<std::string> skipped;
  evm::Status deploy_status = evm::Status::kSuccess;
  evm::Failure deploy_failure = evm::Failure::kNone;
  Bytes deploy_data;  // revert data on a reverted deployment
  std::vector<CallRecord> calls;

  bool deployed() const { return deploy_status == evm::Status::kSuccess; }
  // Canonical form: sorted keys, lowercase hex. Gas never appears.
  nlohmann::json ToJson() const;
};

// "success", "revert", or "failure:<kind>".
std::string StatusText(evm::Status status, evm::Failure failure);
nlohmann::json LogsJson(const std::vector<evm::Log>& logs);
std::string DeployOutcomeText(const ExecutionTrace& trace);

ExecutionTrace Run(const compile::CompiledArtifact& artifact, const CallPlan& plan);

}  // namespace idol::execute

#endif  // IDOL_EXECUTE_EXECUTE_H_
