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

#include <gtest/gtest.h>

#include "idol/common/error.h"

namespace idol::oracle {
namespace {

using execute::CallRecord;
using execute::ExecutionTrace;

compile::CompileConfig Config(bool optimize, int runs = 200) {
  compile::CompileConfig config;
  config.solc_path = "solc";
  config.optimize = optimize;
  config.runs = runs;
  return config;
}

ExecutionTrace Trace(int calls) {
  ExecutionTrace trace;
  trace.plan_hash = "plan";
  for (int i = 0; i < calls; ++i) {
    CallRecord record;
    record.selector = "0000000" + std::to_string(i);
    record.signature = "f" + std::to_string(i) + "()";
    record.return_data = Bytes(32, static_cast<uint8_t>(i));
    trace.calls.push_back(record);
  }
  return trace;
}

const compile::CompileConfig kO0 = Config(false);
const compile::CompileConfig kRuns1 = Config(true, 1);
const compile::CompileConfig kRuns200 = Config(true, 200);

TEST(Compare, IdenticalTracesAgree) {
  ExecutionTrace a = Trace(3), b = Trace(3), c = Trace(3);
  Verdict verdict = Compare({{kO0, &a}, {kRuns1, &b}, {kRuns200, &c}});
  EXPECT_EQ(verdict.kind, VerdictKind::kAgree);
  EXPECT_FALSE(verdict.divergence.has_value());
}

TEST(Compare, EarliestCallWins) {
  ExecutionTrace a = Trace(3), b = Trace(3), c = Trace(3);
  b.calls[2].return_data[0] = 9;
  c.calls[1].storage_digest[0] = 1;
  Verdict verdict = Compare({{kO0, &a}, {kRuns1, &b}, {kRuns200, &c}});
  ASSERT_EQ(verdict.kind, VerdictKind::kDivergence);
  EXPECT_EQ(verdict.divergence->call_index, 1);
  EXPECT_EQ(verdict.divergence->field, kFieldStorage);
  EXPECT_EQ(verdict.divergence->other_config, "opt-runs200");
}

TEST(Compare, FieldOrderWithinCall) {
  ExecutionTrace a = Trace(1), b = Trace(1);
  b.calls[0].return_data[0] = 7;
  b.calls[0].logs.push_back({});
  b.calls[0].status = evm::Status::kRevert;
  Verdict verdict = Compare({{kO0, &a}, {kRuns1, &b}});
  ASSERT_EQ(verdict.kind, VerdictKind::kDivergence);
  EXPECT_EQ(verdict.divergence->field, kFieldStatus);
  EXPECT_EQ(verdict.divergence->baseline_value, "success");
  EXPECT_EQ(verdict.divergence->other_value, "revert");
}

TEST(Compare, DeploymentPrecedesCalls) {
  ExecutionTrace a = Trace(2), b = Trace(2);
  b.deploy_status = evm::Status::kRevert;
  b.calls.clear();
  Verdict verdict = Compare({{kO0, &a}, {kRuns1, &b}});
  ASSERT_EQ(verdict.kind, VerdictKind::kDivergence);
  EXPECT_EQ(verdict.divergence->field, kFieldDeploy);
  EXPECT_EQ(verdict.divergence->call_index, -1);
  EXPECT_EQ(verdict.divergence->selector, "deploy");
}

TEST(Compare, ResultIndependentOfNonBaselineOrder) {
  ExecutionTrace a = Trace(2), b = Trace(2), c = Trace(2);
  b.calls[0].return_data[5] = 1;
  c.calls[0].return_data[6] = 2;
  Verdict forward = Compare({{kO0, &a}, {kRuns1, &b}, {kRuns200, &c}});
  Verdict backward = Compare({{kO0, &a}, {kRuns200, &c}, {kRuns1, &b}});
  EXPECT_EQ(forward.ToJson(), backward.ToJson());
  EXPECT_EQ(forward.divergence->other_config, "opt-runs1");
}

TEST(Compare, DivergenceIsSymmetricInFieldAndPosition) {
  ExecutionTrace a = Trace(2), b = Trace(2);
  b.calls[1].return_data[0] = 42;
  Verdict ab = Compare({{kO0, &a}, {kRuns1, &b}});
  Verdict ba = Compare({{kRuns1, &b}, {kO0, &a}});
  ASSERT_EQ(ab.kind, VerdictKind::kDivergence);
  ASSERT_EQ(ba.kind, VerdictKind::kDivergence);
  EXPECT_EQ(ab.divergence->field, ba.divergence->field);
  EXPECT_EQ(ab.divergence->call_index, ba.divergence->call_index);
  EXPECT_EQ(ab.divergence->baseline_value, ba.divergence->other_value);
}

TEST(Compare, OutOfGasIsPoisonedNotDivergent) {
  ExecutionTrace a = Trace(2), b = Trace(2);
  b.calls[0].status = evm::Status::kFailure;
  b.calls[0].failure = evm::Failure::kOutOfGas;
  b.calls[0].return_data.clear();
  Verdict verdict = Compare({{kO0, &a}, {kRuns1, &b}});
  EXPECT_EQ(verdict.kind, VerdictKind::kInconclusive);
  EXPECT_EQ(verdict.poisoned_calls, std::vector<int>{0});
}

TEST(Compare, DivergenceAfterPoisonedCallStillReported) {
  ExecutionTrace a = Trace(2), b = Trace(2);
  b.calls[0].status = evm::Status::kFailure;
  b.calls[0].failure = evm::Failure::kOutOfGas;
  b.calls[1].return_data[3] = 3;
  Verdict verdict = Compare({{kO0, &a}, {kRuns1, &b}});
  ASSERT_EQ(verdict.kind, VerdictKind::kDivergence);
  EXPECT_EQ(verdict.divergence->call_index, 1);
}

TEST(Compare, MismatchedPlansAreHarnessErrors) {
  ExecutionTrace a = Trace(1), b = Trace(1);
  b.plan_hash = "other";
  EXPECT_THROW(Compare({{kO0, &a}, {kRuns1, &b}}), HarnessError);
}

TEST(Equivalence, ByteExactComparison) {
  ExecutionTrace a = Trace(2), b = Trace(2);
  EXPECT_TRUE(CheckMutantEquivalence(a, b).equivalent);
  b.calls[1].logs.push_back({});
  Equivalence result = CheckMutantEquivalence(a, b);
  EXPECT_FALSE(result.equivalent);
  EXPECT_NE(result.detail.find("logs"), std::string::npos) << result.detail;
}

TEST(Signature, StableAcrossEqualDivergences) {
  ExecutionTrace a = Trace(2), b = Trace(2);
  b.calls[1].return_data[0] = 42;
  Verdict verdict = Compare({{kO0, &a}, {kRuns1, &b}});
  BugSignature first = Signature(verdict, "0.8.2");
  BugSignature second = Signature(Compare({{kO0, &a}, {kRuns1, &b}}), "0.8.2");
  EXPECT_EQ(first, second);
  EXPECT_EQ(first.Id(), second.Id());
  EXPECT_EQ(first.config_pair, "O0|opt-runs1");
  EXPECT_EQ(first.field, kFieldReturnData);
  EXPECT_EQ(first.diff_hash.size(), 16u);
  EXPECT_EQ(BugSignature::FromJson(first.ToJson()), first);
  EXPECT_NE(Signature(verdict, "0.8.3").Id(), first.Id());
}

TEST(Signature, RequiresDivergence) {
  Verdict agree;
  EXPECT_THROW(Signature(agree, "v"), HarnessError);
}

TEST(Signature, CompileDivergenceUsesCompileField) {
  BugSignature signature = CompileDivergenceSignature(
      "v", {{"O0", compile::CompileStatus::kOk}, {"opt-runs1", compile::CompileStatus::kFailure}});
  EXPECT_EQ(signature.field, "compile");
}

TEST(Classification, NamesRoundTrip) {
  for (Classification c : {Classification::kBehavioral, Classification::kCompileDivergence,
                           Classification::kMutantNonEquivalence}) {
    EXPECT_EQ(ClassificationFromName(ClassificationName(c)), c);
  }
}

}  // namespace
}  // namespace idol::oracle
