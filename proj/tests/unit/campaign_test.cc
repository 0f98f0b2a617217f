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

#include "idol/campaign/campaign.h"

#include <set>

#include <gtest/gtest.h>

#include "corpus_gen.h"
#include "idol/common/error.h"
#include "idol/common/fs.h"
#include "support.h"

namespace idol::campaign {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Fixture(const std::string& name) {
  return *ReadFile(std::string(IDOL_FIXTURE_DIR) + "/" + name);
}

fs::path CorpusOf(const fs::path& dir, const std::vector<std::string>& fixtures) {
  fs::create_directories(dir);
  for (const std::string& name : fixtures) {
    WriteFileAtomic(dir / fs::path(name).filename(), Fixture(name));
  }
  return dir;
}

std::set<std::string> SignatureIds(const CampaignReport& report) {
  std::set<std::string> ids;
  for (const BugReport& bug : report.findings) ids.insert(bug.signature.Id());
  return ids;
}

json WithoutRunSettings(json report) {
  report = StripTiming(report);
  report["config"].erase("out_dir");
  report["config"].erase("jobs");
  return report;
}

TEST(CampaignConfig, JsonRoundTripAndValidation) {
  CampaignConfig config;
  config.corpus_root = "c";
  config.solc_paths = {"s"};
  config.out_dir = "o";
  config.seed = 99;
  config.kinds = {mutate::TransformKind::kReverseLicm};
  config.via_ir = compile::ViaIrMode::kBoth;
  EXPECT_EQ(CampaignConfig::FromJson(config.ToJson()).ToJson(), config.ToJson());
  EXPECT_NO_THROW(config.Validate());
  CampaignConfig bad = config;
  bad.solc_paths.clear();
  EXPECT_THROW(bad.Validate(), ConfigError);
  bad = config;
  bad.rounds = 0;
  EXPECT_THROW(bad.Validate(), ConfigError);
}

class CampaignTest : public ::testing::Test {
 protected:
  void SetUp() override {
    current_ = testing::SolcPath("0.8.28");
    buggy_ = testing::SolcPath("0.8.2");
    fixed_ = testing::SolcPath("0.8.3");
    if (current_.empty() || buggy_.empty() || fixed_.empty()) {
      GTEST_SKIP() << "pinned solc releases not installed";
    }
  }
  CampaignConfig Config(const fs::path& corpus, const std::string& solc, const fs::path& out) {
    CampaignConfig config;
    config.corpus_root = corpus.string();
    config.solc_paths = {solc};
    config.out_dir = out.string();
    config.seed = 17;
    config.budget = 2;
    return config;
  }
  std::string current_, buggy_, fixed_;
};

TEST_F(CampaignTest, HealthyCampaignAccountsForEveryUnit) {
  fs::path dir = testing::ScratchDir("run");
  tools::WriteCorpus((dir / "corpus").string(), 3, 5);
  CampaignConfig config = Config(dir / "corpus", current_, dir / "out");
  RunControl control;
  control.cache_audit_rate = 1.0;
  CampaignReport report = RunCampaign(config, control);
  EXPECT_EQ(report.exit_code, kExitClean);
  EXPECT_TRUE(report.findings.empty());
  const json& counts = report.json["counts"];
  EXPECT_EQ(counts["units_sampled"], 5);
  EXPECT_EQ(counts["units_ok"].get<int>() + counts["units_parent_compile_failed"].get<int>() +
                counts["units_error"].get<int>(),
            5);
  const int items = counts["work_items"].get<int>();
  EXPECT_EQ(items, 5 + counts["mutants_generated"].get<int>());
  EXPECT_EQ(counts["compiles_ok"].get<int>() + counts["compile_failures"].get<int>() +
                counts["compile_timeouts"].get<int>(),
            3 * items);
  EXPECT_EQ(counts["equivalence"]["failed"], 0);
  EXPECT_EQ(counts["verdicts"]["divergence"], 0);
  EXPECT_EQ(report.json["matrix"].size(), 3u);
  EXPECT_TRUE(fs::exists(dir / "out" / "campaign.json"));
  EXPECT_TRUE(fs::exists(dir / "out" / "corpus.index.json"));
  EXPECT_GT(report.json["timing"]["cache_audits"].get<int>(), 0);
}

TEST_F(CampaignTest, ReportsAreDeterministic) {
  fs::path dir = testing::ScratchDir("det");
  tools::WriteCorpus((dir / "corpus").string(), 4, 4);
  CampaignConfig config = Config(dir / "corpus", current_, dir / "out");
  json first = StripTiming(RunCampaign(config).json);
  fs::remove_all(dir / "out");
  json second = StripTiming(RunCampaign(config).json);
  EXPECT_EQ(first.dump(), second.dump());

  CampaignConfig parallel = Config(dir / "corpus", current_, dir / "parallel");
  parallel.jobs = 3;
  EXPECT_EQ(WithoutRunSettings(RunCampaign(parallel).json).dump(),
            WithoutRunSettings(second).dump());
}

TEST_F(CampaignTest, ResumeMatchesUninterruptedRun) {
  fs::path dir = testing::ScratchDir("resume");
  tools::WriteCorpus((dir / "corpus").string(), 5, 4);
  CampaignConfig config = Config(dir / "corpus", current_, dir / "out");
  RunControl stop;
  stop.stop_after_units = 2;
  CampaignReport partial = RunCampaign(config, stop);
  EXPECT_TRUE(partial.interrupted);
  EXPECT_FALSE(fs::exists(dir / "out" / "campaign.json"));
  CampaignReport resumed = RunCampaign(config);
  EXPECT_FALSE(resumed.interrupted);

  CampaignConfig fresh = Config(dir / "corpus", current_, dir / "fresh");
  CampaignReport uninterrupted = RunCampaign(fresh);
  EXPECT_EQ(WithoutRunSettings(resumed.json).dump(),
            WithoutRunSettings(uninterrupted.json).dump());
}

TEST_F(CampaignTest, KeccakWitnessSeparatesBuggyAndFixedReleases) {
  fs::path dir = testing::ScratchDir("keccak");
  fs::path corpus = CorpusOf(dir / "corpus", {"regression/keccak_witness.sol"});
  CampaignReport buggy = RunCampaign(Config(corpus, buggy_, dir / "buggy"));
  ASSERT_EQ(buggy.findings.size(), 1u);
  EXPECT_EQ(buggy.exit_code, kExitBehavioral);
  EXPECT_EQ(buggy.findings[0].classification, oracle::Classification::kBehavioral);
  EXPECT_EQ(buggy.findings[0].signature.config_pair, "O0|opt-runs1");
  EXPECT_TRUE(fs::exists(dir / "buggy" / "findings" / (buggy.findings[0].signature.Id() + ".json")));

  CampaignReport fixed = RunCampaign(Config(corpus, fixed_, dir / "fixed"));
  EXPECT_TRUE(fixed.findings.empty());
  EXPECT_EQ(fixed.exit_code, kExitClean);
}

TEST_F(CampaignTest, MutationExposesWhatBaselineMisses) {
  fs::path dir = testing::ScratchDir("separation");
  fs::path corpus = CorpusOf(dir / "corpus", {"separation/cached_slot_loop.sol"});
  CampaignReport dol = RunDolBaseline(Config(corpus, buggy_, dir / "dol"));
  CampaignReport idol = RunCampaign(Config(corpus, buggy_, dir / "idol"));
  EXPECT_TRUE(dol.findings.empty());
  EXPECT_GE(idol.findings.size(), 1u);
  EXPECT_EQ(dol.json["mode"], "dol");
  EXPECT_EQ(dol.json["counts"]["mutants_generated"], 0);
  std::set<std::string> dol_ids = SignatureIds(dol), idol_ids = SignatureIds(idol);
  for (const std::string& id : dol_ids) EXPECT_TRUE(idol_ids.count(id)) << id;
}

TEST_F(CampaignTest, ReductionKeepsFieldAndConfigPair) {
  fs::path dir = testing::ScratchDir("reduce");
  fs::path corpus = CorpusOf(dir / "corpus", {"separation/cached_slot_loop.sol"});
  CampaignConfig config = Config(corpus, buggy_, dir / "out");
  config.reduce = true;
  CampaignReport report = RunCampaign(config);
  ASSERT_FALSE(report.findings.empty());
  compile::Compiler compiler(dir / "cache", 1);
  for (const BugReport& bug : report.findings) {
    ASSERT_EQ(bug.classification, oracle::Classification::kBehavioral);
    ASSERT_TRUE(bug.minimized_source.has_value());
    EXPECT_LE(bug.minimized_source->size(), bug.mutant_source.size());
    EXPECT_NE(bug.reduction.status, "aborted");
    BugReport minimized = bug;
    minimized.mutant_source = *bug.minimized_source;
    oracle::Verdict verdict = ReplayReport(minimized, compiler);
    ASSERT_EQ(verdict.kind, oracle::VerdictKind::kDivergence);
    EXPECT_EQ(verdict.divergence->field, bug.signature.field);
    EXPECT_EQ(verdict.divergence->baseline_config + "|" + verdict.divergence->other_config,
              bug.signature.config_pair);
    EXPECT_TRUE(fs::exists(dir / "out" / "findings" / (bug.signature.Id() + ".min.sol")));
  }
}

TEST_F(CampaignTest, ReplayReproducesStoredFinding) {
  fs::path dir = testing::ScratchDir("replay");
  fs::path corpus = CorpusOf(dir / "corpus", {"regression/keccak_witness.sol"});
  CampaignReport report = RunCampaign(Config(corpus, buggy_, dir / "out"));
  ASSERT_EQ(report.findings.size(), 1u);
  const std::string id = report.findings[0].signature.Id();
  BugReport loaded = BugReport::FromJson(
      json::parse(*ReadFile(dir / "out" / "findings" / (id + ".json"))));
  EXPECT_EQ(loaded.ToJson(), report.findings[0].ToJson());
  compile::Compiler compiler("", 1);
  oracle::Verdict verdict = ReplayReport(loaded, compiler);
  ASSERT_EQ(verdict.kind, oracle::VerdictKind::kDivergence);
  EXPECT_EQ(oracle::Signature(verdict, loaded.signature.solc_version), loaded.signature);
}

TEST_F(CampaignTest, EquivalenceCheckFlagsChangedBehavior) {
  const std::string parent =
      "pragma solidity >=0.8.0; contract C { function f(uint256 a) public pure returns (uint256) "
      "{ return a % 7; } }";
  const std::string same =
      "pragma solidity >=0.8.0; contract C { function f(uint256 a) public pure returns (uint256) "
      "{ uint256 m = 7; return a % m; } }";
  const std::string different =
      "pragma solidity >=0.8.0; contract C { function f(uint256 a) public pure returns (uint256) "
      "{ return a % 7 + 1; } }";
  compile::Compiler compiler("", 1);
  EXPECT_TRUE(CheckEquivalence(parent, same, current_, 3, 2, compiler).equivalent);
  EquivalenceCheck check = CheckEquivalence(parent, different, current_, 3, 2, compiler);
  EXPECT_FALSE(check.equivalent);
  EXPECT_FALSE(check.detail.empty());
}

}  // namespace
}  // namespace idol::campaign
