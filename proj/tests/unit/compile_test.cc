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

#include "idol/compile/compile.h"

#include <set>

#include <gtest/gtest.h>

#include "idol/common/error.h"
#include "support.h"

namespace idol::compile {
namespace {

constexpr const char* kAdder = R"(// SPDX-License-Identifier: GPL-3.0
pragma solidity >=0.8.0;
contract Helper { function one() public pure returns (uint256) { return 1; } }
contract Adder {
    function add(uint256 a, uint256 b) public pure returns (uint256) { return a + b; }
}
)";

TEST(ConfigMatrix, DefaultIsThreeLegacyConfigs) {
  MatrixOptions options;
  options.solc_path = "solc";
  std::vector<CompileConfig> matrix = ConfigMatrix(options);
  ASSERT_EQ(matrix.size(), 3u);
  EXPECT_EQ(matrix[0].Label(), "O0");
  EXPECT_EQ(matrix[1].Label(), "opt-runs1");
  EXPECT_EQ(matrix[2].Label(), "opt-runs200");
  EXPECT_FALSE(matrix[0].optimize);
  EXPECT_EQ(matrix[1].runs, 1);
}

TEST(ConfigMatrix, ViaIrBothPutsLegacyFirst) {
  MatrixOptions options;
  options.solc_path = "solc";
  options.via_ir = ViaIrMode::kBoth;
  std::vector<CompileConfig> matrix = ConfigMatrix(options);
  ASSERT_EQ(matrix.size(), 6u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(matrix[i].pipeline, Pipeline::kLegacy);
  for (int i = 3; i < 6; ++i) EXPECT_EQ(matrix[i].pipeline, Pipeline::kViaIr);
  EXPECT_EQ(matrix[5].Label(), "opt-runs200+ir");
}

TEST(ConfigMatrix, SingleRunsValueOptimizedOnly) {
  MatrixOptions options;
  options.solc_path = "solc";
  options.runs_list = {1};
  options.include_unoptimized = false;
  std::vector<CompileConfig> matrix = ConfigMatrix(options);
  ASSERT_EQ(matrix.size(), 1u);
  EXPECT_EQ(matrix[0].Label(), "opt-runs1");
}

TEST(CompileConfig, FingerprintSeparatesEveryField) {
  CompileConfig base;
  base.solc_path = "solc";
  CompileConfig runs = base;
  runs.runs = 1;
  CompileConfig ir = base;
  ir.pipeline = Pipeline::kViaIr;
  CompileConfig evm = base;
  evm.evm_version = "paris";
  CompileConfig other_solc = base;
  other_solc.solc_path = "solc-0.8.3";
  std::set<std::string> prints{base.Fingerprint(), runs.Fingerprint(), ir.Fingerprint(),
                               evm.Fingerprint(), other_solc.Fingerprint()};
  EXPECT_EQ(prints.size(), 5u);
  EXPECT_EQ(CompileConfig::FromJson(ir.ToJson()), ir);
}

TEST(StandardJson, InputPinsMetadataAndOptimizer) {
  CompileConfig config;
  config.optimize = true;
  config.runs = 1;
  config.pipeline = Pipeline::kViaIr;
  nlohmann::json input = StandardJsonInput(kAdder, config);
  EXPECT_EQ(input["language"], "Solidity");
  EXPECT_EQ(input["sources"]["unit.sol"]["content"], kAdder);
  EXPECT_EQ(input["settings"]["optimizer"]["enabled"], true);
  EXPECT_EQ(input["settings"]["optimizer"]["runs"], 1);
  EXPECT_EQ(input["settings"]["viaIR"], true);
  EXPECT_EQ(input["settings"]["metadata"]["bytecodeHash"], "none");
  EXPECT_FALSE(input["settings"].contains("evmVersion"));
}

TEST(StandardJson, ErrorOutputBecomesFailure) {
  nlohmann::json output = {
      {"errors",
       {{{"severity", "error"}, {"formattedMessage", "TypeError: nope"}, {"message", "nope"}}}}};
  CompileOutcome outcome = ParseStandardJsonOutput(kAdder, output, CompileConfig{}, "v");
  EXPECT_EQ(outcome.status, CompileStatus::kFailure);
  EXPECT_NE(outcome.message.find("nope"), std::string::npos);
}

TEST(Compiler, DeterministicAndCached) {
  IDOL_REQUIRE_SOLC(solc, "0.8.28");
  auto cache = testing::ScratchDir("cache");
  CompileConfig config;
  config.solc_path = solc;
  Compiler first(cache, 1);
  CompileOutcome a = first.Compile(kAdder, config);
  ASSERT_EQ(a.status, CompileStatus::kOk) << a.message;
  EXPECT_FALSE(a.cache_hit);
  EXPECT_EQ(a.artifact->contract_name, "Adder");
  EXPECT_NE(a.artifact->solc_version.find("0.8.28"), std::string::npos);
  ASSERT_EQ(a.artifact->abi.size(), 1u);

  CompileOutcome hit = first.Compile(kAdder, config);
  EXPECT_TRUE(hit.cache_hit);
  EXPECT_EQ(hit.artifact->runtime_bytecode, a.artifact->runtime_bytecode);

  Compiler uncached("", 1);
  CompileOutcome fresh = uncached.Compile(kAdder, config);
  EXPECT_FALSE(fresh.cache_hit);
  EXPECT_EQ(fresh.artifact->deploy_bytecode, a.artifact->deploy_bytecode);
  EXPECT_EQ(fresh.artifact->runtime_bytecode, a.artifact->runtime_bytecode);
}

TEST(Compiler, AuditedHitsMatchFreshCompiles) {
  IDOL_REQUIRE_SOLC(solc, "0.8.28");
  auto cache = testing::ScratchDir("cache");
  CompileConfig config;
  config.solc_path = solc;
  config.optimize = true;
  Compiler compiler(cache, 9, std::chrono::seconds(60), 1.0);
  ASSERT_EQ(compiler.Compile(kAdder, config).status, CompileStatus::kOk);
  EXPECT_TRUE(compiler.Compile(kAdder, config).cache_hit);
  EXPECT_EQ(compiler.stats().audits, 1u);
}

TEST(Compiler, OptimizerChangesBytecode) {
  IDOL_REQUIRE_SOLC(solc, "0.8.28");
  Compiler compiler("", 1);
  MatrixOptions options;
  options.solc_path = solc;
  std::vector<CompileConfig> matrix = ConfigMatrix(options);
  CompileOutcome o0 = compiler.Compile(kAdder, matrix[0]);
  CompileOutcome o1 = compiler.Compile(kAdder, matrix[1]);
  ASSERT_EQ(o0.status, CompileStatus::kOk);
  ASSERT_EQ(o1.status, CompileStatus::kOk);
  EXPECT_NE(o0.artifact->runtime_bytecode, o1.artifact->runtime_bytecode);
}

TEST(Compiler, TypeErrorIsFailureWithMessage) {
  IDOL_REQUIRE_SOLC(solc, "0.8.28");
  Compiler compiler("", 1);
  CompileConfig config;
  config.solc_path = solc;
  CompileOutcome outcome = compiler.Compile(
      "pragma solidity >=0.8.0; contract C { uint256 x = \"s\"; }", config);
  EXPECT_EQ(outcome.status, CompileStatus::kFailure);
  EXPECT_FALSE(outcome.artifact.has_value());
  EXPECT_NE(outcome.message.find("TypeError"), std::string::npos) << outcome.message;
}

TEST(Compiler, OutcomeJsonRoundTrip) {
  IDOL_REQUIRE_SOLC(solc, "0.8.28");
  Compiler compiler("", 1);
  CompileConfig config;
  config.solc_path = solc;
  CompileOutcome outcome = compiler.Compile(kAdder, config);
  CompileOutcome back = OutcomeFromJson(OutcomeToJson(outcome));
  EXPECT_EQ(back.status, outcome.status);
  EXPECT_EQ(back.artifact->runtime_bytecode, outcome.artifact->runtime_bytecode);
  EXPECT_EQ(back.artifact->abi, outcome.artifact->abi);
}

TEST(Compiler, MissingCompilerIsConfigError) {
  Compiler compiler("", 1);
  EXPECT_THROW(compiler.Version("/nonexistent/solc"), ConfigError);
}

}  // namespace
}  // namespace idol::compile
