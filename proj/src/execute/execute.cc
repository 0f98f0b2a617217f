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

#include "idol/execute/execute.h"

#include "idol/common/error.h"
#include "idol/common/hash.h"
#include "idol/common/prng.h"
#include "idol/execute/abi.h"

namespace idol::execute {

using evm::u256;
using nlohmann::json;
using Kind = AbiType::Kind;

namespace {

u256 Mask(int bits) { return bits >= 256 ? ~u256(0) : (u256(1) << bits) - 1; }

u256 RandomWord(Prng& prng) {
  u256 word = 0;
  for (int i = 0; i < 4; ++i) word = (word << 64) | prng.Next();
  return word;
}

// Sign-extends a bits-wide two's complement value to 256 bits.
u256 SignExtend(const u256& value, int bits) {
  u256 masked = value & Mask(bits);
  if (bits < 256 && boost::multiprecision::bit_test(masked, bits - 1)) {
    masked |= ~Mask(bits);
  }
  return masked;
}

class ArgumentDrawer {
 public:
  ArgumentDrawer(Prng& prng, const PlanOptions& options, int round)
      : prng_(prng), options_(options), round_(round) {}

  // top_index >= 0 marks a top-level parameter; top-level booleans alternate
  // by round so both values appear across any two rounds.
  AbiValue Draw(const AbiType& type, int top_index = -1) {
    AbiValue value;
    switch (type.kind) {
      case Kind::kUint: {
        const u256 max = Mask(type.size);
        switch (prng_.Uniform(6)) {
          case 0: value.word = 0; break;
          case 1: value.word = 1; break;
          case 2: value.word = 2; break;
          case 3: value.word = max; break;
          case 4: value.word = max - 1; break;
          default: value.word = RandomWord(prng_) & max; break;
        }
        break;
      }
      case Kind::kInt: {
        const u256 max = Mask(type.size - 1);
        switch (prng_.Uniform(8)) {
          case 0: value.word = 0; break;
          case 1: value.word = 1; break;
          case 2: value.word = 2; break;
          case 3: value.word = max; break;
          case 4: value.word = max - 1; break;
          case 5: value.word = ~max; break;
          case 6: value.word = ~u256(0); break;
          default: value.word = SignExtend(RandomWord(prng_), type.size); break;
        }
        break;
      }
      case Kind::kBool:
        value.word = top_index >= 0 ? (round_ + top_index) % 2 : (prng_.Coin() ? 1 : 0);
        break;
      case Kind::kAddress:
        value.word = evm::FromAddress(SenderPool()[prng_.Uniform(SenderPool().size())]);
        break;
      case Kind::kFixedBytes: {
        value.bytes.resize(type.size);
        uint64_t style = prng_.Uniform(3);
        for (uint8_t& byte : value.bytes) {
          byte = style == 0 ? 0 : style == 1 ? 0xff : static_cast<uint8_t>(prng_.Next());
        }
        break;
      }
      case Kind::kBytes:
      case Kind::kString: {
        value.bytes.resize(DrawLength());
        for (uint8_t& byte : value.bytes) {
          byte = type.kind == Kind::kString ? static_cast<uint8_t>('a' + prng_.Uniform(26))
                                            : static_cast<uint8_t>(prng_.Next());
        }
        break;
      }
      case Kind::kArray:
      case Kind::kFixedArray: {
        size_t count = type.kind == Kind::kArray ? DrawLength() : type.length;
        for (size_t i = 0; i < count; ++i) value.items.push_back(Draw(type.elements[0]));
        break;
      }
      case Kind::kTuple:
        for (const AbiType& element : type.elements) value.items.push_back(Draw(element));
        break;
    }
    return value;
  }

 private:
  size_t DrawLength() {
    return options_.dynamic_lengths[prng_.Uniform(options_.dynamic_lengths.size())];
  }

  Prng& prng_;
  const PlanOptions& options_;
  int round_;
};

std::string AddressHex(const evm::Address& address) {
  return ToHexPrefixed(ByteView(address.data(), address.size()));
}

std::string WordHex(const u256& word) {
  Hash32 bytes = evm::ToHash(word);
  return ToHexPrefixed(bytes);
}

}  // namespace

const std::vector<evm::Address>& SenderPool() {
  static const std::vector<evm::Address> kPool = {
      evm::AddressFromHex("0x1000000000000000000000000000000000000001"),
      evm::AddressFromHex("0x1000000000000000000000000000000000000002"),
      evm::AddressFromHex("0x1000000000000000000000000000000000000003"),
      evm::AddressFromHex("0x1000000000000000000000000000000000000004"),
  };
  return kPool;
}

CallPlan PlanCalls(const json& abi, uint64_t seed, const PlanOptions& options) {
  if (!abi.is_array()) throw HarnessError("abi must be a JSON array");
  if (options.dynamic_lengths.empty()) throw ConfigError("dynamic length pool is empty");
  CallPlan plan;
  plan.seed = seed;
  plan.rounds = options.rounds;
  plan.senders = SenderPool();
  plan.deployer = plan.senders[0];
  plan.initial_balance = u256(1000000) * u256(1000000000000000000ull);
  plan.gas_limit = static_cast<int64_t>(plan.env.gas_limit);

  struct Function {
    std::string signature;
    std::vector<AbiType> inputs;
  };
  std::vector<Function> functions;
  for (const json& entry : abi) {
    if (entry.value("type", "") != "function") continue;
    Function function;
    bool supported = true;
    for (const json& input : entry.value("inputs", json::array())) {
      std::optional<AbiType> type = ParseAbiType(input);
      if (!type) {
        supported = false;
        break;
      }
      function.inputs.push_back(*type);
    }
    std::string name = entry.value("name", "");
    if (!supported) {
      plan.skipped.push_back(name);
      continue;
    }
    function.signature = FunctionSignature(name, function.inputs);
    functions.push_back(std::move(function));
  }

  Prng prng(DeriveSeed(seed, "plan"));
  for (int round = 0; round < options.rounds; ++round) {
    ArgumentDrawer drawer(prng, options, round);
    for (const Function& function : functions) {
      PlannedCall call;
      call.signature = function.signature;
      call.selector = Selector(function.signature);
      call.round = round;
      call.sender = plan.senders[prng.Uniform(plan.senders.size())];
      std::vector<AbiValue> values;
      for (size_t i = 0; i < function.inputs.size(); ++i) {
        values.push_back(drawer.Draw(function.inputs[i], static_cast<int>(i)));
      }
      call.calldata.assign(call.selector.begin(), call.selector.end());
      Bytes encoded = EncodeArguments(function.inputs, values);
      call.calldata.insert(call.calldata.end(), encoded.begin(), encoded.end());
      plan.calls.push_back(std::move(call));
    }
  }
  return plan;
}

json CallPlan::ToJson() const {
  json senders_json = json::array();
  for (const evm::Address& sender : senders) senders_json.push_back(AddressHex(sender));
  json calls_json = json::array();
  for (const PlannedCall& call : calls) {
    calls_json.push_back({{"signature", call.signature},
                          {"selector", ToHex(call.selector)},
                          {"calldata", ToHexPrefixed(call.calldata)},
                          {"sender", AddressHex(call.sender)},
                          {"round", call.round}});
  }
  return json{{"seed", seed},
              {"rounds", rounds},
              {"env",
               {{"block_number", env.block_number},
                {"timestamp", env.timestamp},
                {"chain_id", env.chain_id},
                {"gas_limit", env.gas_limit},
                {"coinbase", AddressHex(env.coinbase)},
                {"base_fee", WordHex(env.base_fee)},
                {"prev_randao", WordHex(env.prev_randao)}}},
              {"deployer", AddressHex(deployer)},
              {"senders", senders_json},
              {"initial_balance", WordHex(initial_balance)},
              {"gas_limit", gas_limit},
              {"calls", calls_json},
              {"skipped", skipped}};
}

std::string CallPlan::Hash() const { return Sha256Hex(ToJson().dump()); }

std::string StatusText(evm::Status status, evm::Failure failure) {
  switch (status) {
    case evm::Status::kSuccess: return "success";
    case evm::Status::kRevert: return "revert";
    case evm::Status::kFailure: return "failure:" + std::string(evm::FailureName(failure));
  }
  return "unknown";
}

json LogsJson(const std::vector<evm::Log>& logs) {
  json out = json::array();
  for (const evm::Log& log : logs) {
    json topics = json::array();
    for (const Hash32& topic : log.topics) topics.push_back(ToHexPrefixed(topic));
    out.push_back({{"address", AddressHex(log.address)},
                   {"topics", topics},
                   {"data", ToHexPrefixed(log.data)}});
  }
  return out;
}

std::string DeployOutcomeText(const ExecutionTrace& trace) {
  std::string text = StatusText(trace.deploy_status, trace.deploy_failure);
  if (trace.deploy_status == evm::Status::kRevert) text += ":" + ToHexPrefixed(trace.deploy_data);
  return text;
}

json ExecutionTrace::ToJson() const {
  json calls_json = json::array();
  for (size_t i = 0; i < calls.size(); ++i) {
    const CallRecord& call = calls[i];
    calls_json.push_back({{"index", i},
                          {"selector", call.selector},
                          {"signature", call.signature},
                          {"status", StatusText(call.status, call.failure)},
                          {"return_data", ToHexPrefixed(call.return_data)},
                          {"logs", LogsJson(call.logs)},
                          {"storage_digest", ToHexPrefixed(call.storage_digest)}});
  }
  return json{{"plan_hash", plan_hash},
              {"skipped", skipped},
              {"deploy",
               {{"status", StatusText(deploy_status, deploy_failure)},
                {"data", ToHexPrefixed(deploy_data)}}},
              {"calls", calls_json}};
}

ExecutionTrace Run(const compile::CompiledArtifact& artifact, const CallPlan& plan) {
  ExecutionTrace trace;
  trace.plan_hash = plan.Hash();
  trace.skipped = plan.skipped;
  evm::Evm machine(plan.env);
  for (const evm::Address& sender : plan.senders) machine.SetBalance(sender, plan.initial_balance);
  evm::TxResult deployed = machine.Deploy(plan.deployer, artifact.deploy_bytecode, plan.gas_limit);
  trace.deploy_status = deployed.status;
  trace.deploy_failure = deployed.failure;
  if (deployed.status != evm::Status::kSuccess) {
    trace.deploy_data = std::move(deployed.output);
    return trace;
  }
  if (!deployed.created) throw HarnessError("deployment succeeded without an address");
  const evm::Address contract = *deployed.created;
  for (const PlannedCall& call : plan.calls) {
    evm::TxResult result = machine.Call(call.sender, contract, call.calldata, plan.gas_limit);
    CallRecord record;
    record.selector = ToHex(call.selector);
    record.signature = call.signature;
    record.status = result.status;
    record.failure = result.failure;
    record.return_data = std::move(result.output);
    record.logs = std::move(result.logs);
    record.storage_digest = machine.StorageDigest();
    trace.calls.push_back(std::move(record));
  }
  return trace;
}

}  // namespace idol::execute
