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

#include <set>

#include <gtest/gtest.h>

#include "idol/common/fs.h"
#include "idol/compile/compile.h"
#include "idol/execute/abi.h"
#include "support.h"

namespace idol::execute {
namespace {

using nlohmann::json;

json Function(const std::string& name, json inputs, const std::string& mutability = "nonpayable") {
  return {{"type", "function"}, {"name", name}, {"inputs", inputs},
          {"outputs", json::array()}, {"stateMutability", mutability}};
}

json Param(const std::string& type) { return {{"name", ""}, {"type", type}}; }

evm::u256 ArgumentWord(const PlannedCall& call, size_t index) {
  evm::u256 word = 0;
  for (size_t i = 0; i < 32; ++i) word = (word << 8) | call.calldata[4 + 32 * index + i];
  return word;
}

TEST(Abi, SelectorOfKnownSignature) {
  EXPECT_EQ(FunctionSignature("transfer", {*ParseAbiType(Param("address")),
                                           *ParseAbiType(Param("uint256"))}),
            "transfer(address,uint256)");
  std::array<uint8_t, 4> expected{0xa9, 0x05, 0x9c, 0xbb};
  EXPECT_EQ(Selector("transfer(address,uint256)"), expected);
}

TEST(Abi, DynamicEncodingUsesOffsets) {
  AbiType bytes_type = *ParseAbiType(Param("bytes"));
  AbiType uint_type = *ParseAbiType(Param("uint256"));
  AbiValue payload;
  payload.bytes = {0xab, 0xcd};
  AbiValue seven;
  seven.word = 7;
  Bytes encoded = EncodeArguments({bytes_type, uint_type}, {payload, seven});
  ASSERT_EQ(encoded.size(), 4u * 32);
  EXPECT_EQ(encoded[31], 0x40);  // offset of the bytes tail
  EXPECT_EQ(encoded[63], 7);
  EXPECT_EQ(encoded[95], 2);     // length
  EXPECT_EQ(encoded[96], 0xab);
  EXPECT_EQ(encoded[97], 0xcd);
}

TEST(Abi, TupleAndArrayCanonicalNames) {
  json tuple = {{"name", "p"},
                {"type", "tuple[2]"},
                {"components", {Param("bool"), Param("bytes")}}};
  std::optional<AbiType> type = ParseAbiType(tuple);
  ASSERT_TRUE(type.has_value());
  EXPECT_EQ(type->Canonical(), "(bool,bytes)[2]");
  EXPECT_TRUE(type->IsDynamic());
  EXPECT_FALSE(ParseAbiType(Param("function")).has_value());
}

TEST(PlanCalls, RoundsFollowAbiOrder) {
  json abi = json::array({Function("b", json::array({Param("uint256")})),
                          Function("a", json::array()),
                          {{"type", "event"}, {"name", "E"}, {"inputs", json::array()}}});
  PlanOptions options;
  options.rounds = 3;
  CallPlan plan = PlanCalls(abi, 5, options);
  ASSERT_EQ(plan.calls.size(), 6u);
  for (size_t i = 0; i < plan.calls.size(); ++i) {
    EXPECT_EQ(plan.calls[i].signature, i % 2 == 0 ? "b(uint256)" : "a()");
    EXPECT_EQ(plan.calls[i].round, static_cast<int>(i / 2));
  }
  EXPECT_EQ(plan.deployer, SenderPool()[0]);
}

TEST(PlanCalls, DeterministicPerSeed) {
  json abi = json::array({Function("f", json::array({Param("uint256"), Param("bytes")}))});
  EXPECT_EQ(PlanCalls(abi, 11).Hash(), PlanCalls(abi, 11).Hash());
  EXPECT_EQ(PlanCalls(abi, 11).ToJson(), PlanCalls(abi, 11).ToJson());
  EXPECT_NE(PlanCalls(abi, 11).Hash(), PlanCalls(abi, 12).Hash());
}

TEST(PlanCalls, Uint8PoolRespectsWidthAndHitsBoundaries) {
  json abi = json::array({Function("f", json::array({Param("uint8")}))});
  std::set<uint64_t> seen;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    for (const PlannedCall& call : PlanCalls(abi, seed).calls) {
      evm::u256 word = ArgumentWord(call, 0);
      ASSERT_LE(word, 255);
      seen.insert(static_cast<uint64_t>(word));
    }
  }
  EXPECT_TRUE(seen.count(0));
  EXPECT_TRUE(seen.count(1));
  EXPECT_TRUE(seen.count(255));
  EXPECT_TRUE(seen.count(254));
}

TEST(PlanCalls, SignedValuesAreSignExtended) {
  json abi = json::array({Function("f", json::array({Param("int8")}))});
  bool saw_negative = false;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    for (const PlannedCall& call : PlanCalls(abi, seed).calls) {
      evm::u256 word = ArgumentWord(call, 0);
      const bool negative = word > 127;
      if (negative) {
        saw_negative = true;
        EXPECT_GE(word, (~evm::u256(0)) - 127);  // within int8 range
      }
    }
  }
  EXPECT_TRUE(saw_negative);
}

TEST(PlanCalls, BoolAlternatesByRoundAndPosition) {
  json abi = json::array({Function("f", json::array({Param("bool"), Param("bool")}))});
  CallPlan plan = PlanCalls(abi, 3);
  ASSERT_EQ(plan.calls.size(), 2u);
  EXPECT_EQ(ArgumentWord(plan.calls[0], 0), 0);
  EXPECT_EQ(ArgumentWord(plan.calls[0], 1), 1);
  EXPECT_EQ(ArgumentWord(plan.calls[1], 0), 1);
  EXPECT_EQ(ArgumentWord(plan.calls[1], 1), 0);
}

TEST(PlanCalls, UnsupportedParameterSkipsFunction) {
  json abi = json::array({Function("cb", json::array({Param("function")})),
                          Function("ok", json::array())});
  CallPlan plan = PlanCalls(abi, 1);
  ASSERT_EQ(plan.skipped.size(), 1u);
  for (const PlannedCall& call : plan.calls) EXPECT_EQ(call.signature, "ok()");
}

TEST(PlanCalls, EmptyAbiHasNoCalls) {
  CallPlan plan = PlanCalls(json::array(), 1);
  EXPECT_TRUE(plan.calls.empty());
}

class ExecuteWithSolc : public ::testing::Test {
 protected:
  compile::CompiledArtifact Build(const std::string& source, bool optimize = false) {
    compile::CompileConfig config;
    config.solc_path = solc_;
    config.optimize = optimize;
    compile::CompileOutcome outcome = compiler_.Compile(source, config);
    EXPECT_EQ(outcome.status, compile::CompileStatus::kOk) << outcome.message;
    return *outcome.artifact;
  }
  void SetUp() override {
    solc_ = testing::SolcPath("0.8.28");
    if (solc_.empty()) GTEST_SKIP() << "solc 0.8.28 not installed";
  }
  std::string solc_;
  compile::Compiler compiler_{"", 1};
};

TEST_F(ExecuteWithSolc, FiveReturnsFive) {
  compile::CompiledArtifact artifact = Build(
      "pragma solidity >=0.8.0; contract C { function five() public pure returns (uint256) "
      "{ return 5; } }");
  CallPlan plan = PlanCalls(artifact.abi, 1);
  ExecutionTrace trace = execute::Run(artifact, plan);
  ASSERT_TRUE(trace.deployed());
  ASSERT_EQ(trace.calls.size(), 2u);
  Bytes expected(32, 0);
  expected[31] = 5;
  EXPECT_EQ(trace.calls[0].status, evm::Status::kSuccess);
  EXPECT_EQ(trace.calls[0].return_data, expected);
  EXPECT_EQ(trace.calls[0].signature, "five()");
}

TEST_F(ExecuteWithSolc, RevertsAndEventsAreObserved) {
  compile::CompiledArtifact artifact = Build(R"(pragma solidity >=0.8.0;
contract C {
    uint256 total;
    event Added(address indexed who, uint256 value);
    function add(uint256 v) public { require(v != 0, "zero"); total += v; emit Added(msg.sender, v); }
})");
  CallPlan plan = PlanCalls(artifact.abi, 4);
  ExecutionTrace trace = execute::Run(artifact, plan);
  bool saw_revert = false, saw_log = false;
  for (size_t i = 0; i < trace.calls.size(); ++i) {
    const CallRecord& record = trace.calls[i];
    if (record.status == evm::Status::kRevert) {
      saw_revert = true;
      EXPECT_TRUE(record.logs.empty());
    }
    if (!record.logs.empty()) {
      saw_log = true;
      ASSERT_EQ(record.logs[0].topics.size(), 2u);
      EXPECT_EQ(Bytes(record.logs[0].topics[1].end() - 20, record.logs[0].topics[1].end()),
                Bytes(plan.calls[i].sender.begin(), plan.calls[i].sender.end()));
    }
  }
  // Across seeds some call passes zero and some passes nonzero.
  if (!saw_revert || !saw_log) {
    for (uint64_t seed = 5; seed < 40 && !(saw_revert && saw_log); ++seed) {
      ExecutionTrace more = execute::Run(artifact, PlanCalls(artifact.abi, seed));
      for (const CallRecord& record : more.calls) {
        saw_revert |= record.status == evm::Status::kRevert;
        saw_log |= !record.logs.empty();
      }
    }
  }
  EXPECT_TRUE(saw_revert);
  EXPECT_TRUE(saw_log);
}

TEST_F(ExecuteWithSolc, TraceIsDeterministicAndGasFree) {
  compile::CompiledArtifact artifact = Build(
      "pragma solidity >=0.8.0; contract C { mapping(uint256 => uint256) m; "
      "function set(uint256 k, uint256 v) public { m[k] = v; } }");
  CallPlan plan = PlanCalls(artifact.abi, 9);
  json a = execute::Run(artifact, plan).ToJson();
  json b = execute::Run(artifact, plan).ToJson();
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a.dump().find("gas"), std::string::npos);
  EXPECT_EQ(a["plan_hash"], plan.Hash());
}

TEST_F(ExecuteWithSolc, LoopInversionGoldenAgreesOnStorage) {
  std::string before = *ReadFile(std::string(IDOL_FIXTURE_DIR) + "/golden/inversion.sol");
  std::string after = *ReadFile(std::string(IDOL_FIXTURE_DIR) + "/golden/inversion.expected.sol");
  compile::CompiledArtifact parent = Build(before);
  compile::CompiledArtifact mutant = Build(after);
  CallPlan plan = PlanCalls(parent.abi, 2);
  ExecutionTrace a = execute::Run(parent, plan);
  ExecutionTrace b = execute::Run(mutant, plan);
  ASSERT_EQ(a.calls.size(), b.calls.size());
  for (size_t i = 0; i < a.calls.size(); ++i) {
    EXPECT_EQ(a.calls[i].status, b.calls[i].status) << i;
    EXPECT_EQ(a.calls[i].return_data, b.calls[i].return_data) << i;
    EXPECT_EQ(a.calls[i].storage_digest, b.calls[i].storage_digest) << i;
  }
  // The optimized build agrees as well.
  ExecutionTrace c = execute::Run(Build(before, true), plan);
  EXPECT_EQ(a.ToJson(), c.ToJson());
}

TEST_F(ExecuteWithSolc, RevertingConstructorIsRecorded) {
  compile::CompiledArtifact artifact =
      Build("pragma solidity >=0.8.0; contract C { constructor() { revert(\"no\"); } "
            "function f() public {} }");
  ExecutionTrace trace = execute::Run(artifact, PlanCalls(artifact.abi, 1));
  EXPECT_FALSE(trace.deployed());
  EXPECT_EQ(DeployOutcomeText(trace).rfind("revert", 0), 0u);
  EXPECT_TRUE(trace.calls.empty());
}

}  // namespace
}  // namespace idol::execute
