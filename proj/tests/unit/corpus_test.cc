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

#include "idol/corpus/corpus.h"

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "idol/common/error.h"
#include "idol/common/fs.h"
#include "idol/common/hash.h"
#include "support.h"

namespace idol::corpus {
namespace {

namespace fs = std::filesystem;

constexpr const char* kPragma = "// SPDX-License-Identifier: GPL-3.0\npragma solidity >=0.8.0;\n";

void Put(const fs::path& dir, const std::string& name, const std::string& body) {
  fs::create_directories((dir / name).parent_path());
  WriteFileAtomic(dir / name, body);
}

class CorpusWithSolc : public ::testing::Test {
 protected:
  void SetUp() override {
    solc_ = testing::SolcPath("0.8.28");
    if (solc_.empty()) GTEST_SKIP() << "solc 0.8.28 not installed";
    validator_.solc_path = solc_;
    root_ = testing::ScratchDir("corpus");
  }
  std::string solc_;
  compile::CompileConfig validator_;
  compile::Compiler compiler_{"", 1};
  fs::path root_;
};

TEST(SourceUnit, IdIsContentHash) {
  SourceUnit unit = MakeSourceUnit("a.sol", std::string(kPragma) + "contract A {}\n");
  EXPECT_EQ(unit.id, Sha256Hex(unit.source));
  EXPECT_EQ(unit.pragma_range, ">=0.8.0");
  EXPECT_EQ(unit.byte_len, unit.source.size());
}

TEST_F(CorpusWithSolc, ClassifiesEveryFile) {
  Put(root_, "b/valid2.sol", std::string(kPragma) + "contract B { function f() public {} }\n");
  Put(root_, "a.sol", std::string(kPragma) + "contract A { uint256 x; }\n");
  Put(root_, "c.sol", std::string(kPragma) + "contract C { function g() public pure returns (uint8) { return 1; } }\n");
  Put(root_, "imports.sol", std::string(kPragma) + "import \"./a.sol\";\ncontract D {}\n");
  Put(root_, "ctor.sol", std::string(kPragma) + "contract E { constructor(uint256 v) {} }\n");
  Put(root_, "broken.sol", std::string(kPragma) + "contract F { uint256 x = \"s\"; }\n");
  Put(root_, "notes.txt", "ignored");
  CorpusIndex index = Ingest(root_.string(), validator_, compiler_);
  ASSERT_EQ(index.entries.size(), 6u);
  EXPECT_EQ(index.Count(EntryStatus::kValid), 3u);
  EXPECT_EQ(index.Count(EntryStatus::kUnsupported), 2u);
  EXPECT_EQ(index.Count(EntryStatus::kCompileFailed), 1u);
  std::vector<std::string> paths;
  for (const IndexEntry& entry : index.entries) paths.push_back(entry.path);
  EXPECT_TRUE(std::is_sorted(paths.begin(), paths.end()));
  EXPECT_EQ(paths.back(), "imports.sol");
  for (const IndexEntry& entry : index.entries) {
    if (entry.status != EntryStatus::kValid) {
      EXPECT_FALSE(entry.reason.empty()) << entry.path;
    }
  }
  CorpusIndex back = CorpusIndex::FromJson(index.ToJson());
  EXPECT_EQ(back.ToJson(), index.ToJson());
}

TEST_F(CorpusWithSolc, EmptyDirectoryYieldsEmptyIndex) {
  CorpusIndex index = Ingest(root_.string(), validator_, compiler_);
  EXPECT_TRUE(index.entries.empty());
  EXPECT_TRUE(Sample(index, 1, 5).empty());
}

TEST_F(CorpusWithSolc, MissingRootIsConfigError) {
  EXPECT_THROW(Ingest((root_ / "absent").string(), validator_, compiler_), ConfigError);
}

TEST_F(CorpusWithSolc, SampleIsDeterministicAndWraps) {
  for (int i = 0; i < 4; ++i) {
    Put(root_, "u" + std::to_string(i) + ".sol",
        std::string(kPragma) + "contract U" + std::to_string(i) + " {}\n");
  }
  CorpusIndex index = Ingest(root_.string(), validator_, compiler_);
  ASSERT_EQ(index.Count(EntryStatus::kValid), 4u);
  std::vector<SourceUnit> a = Sample(index, 7, 3);
  std::vector<SourceUnit> b = Sample(index, 7, 3);
  ASSERT_EQ(a.size(), 3u);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].id, b[i].id);
  std::set<std::string> distinct;
  for (const SourceUnit& unit : a) distinct.insert(unit.id);
  EXPECT_EQ(distinct.size(), 3u);

  std::vector<SourceUnit> wrapped = Sample(index, 7, 6);
  ASSERT_EQ(wrapped.size(), 6u);
  EXPECT_EQ(wrapped[4].id, wrapped[0].id);
  EXPECT_EQ(wrapped[5].id, wrapped[1].id);

  bool differs = false;
  for (uint64_t seed = 8; seed < 20 && !differs; ++seed) {
    differs = Sample(index, seed, 4)[0].id != a[0].id;
  }
  EXPECT_TRUE(differs);
}

TEST_F(CorpusWithSolc, LoadUnitDetectsChangedFile) {
  Put(root_, "a.sol", std::string(kPragma) + "contract A {}\n");
  CorpusIndex index = Ingest(root_.string(), validator_, compiler_);
  ASSERT_EQ(index.entries.size(), 1u);
  EXPECT_EQ(LoadUnit(index, index.entries[0]).path, "a.sol");
  Put(root_, "a.sol", std::string(kPragma) + "contract A { uint256 y; }\n");
  EXPECT_THROW(LoadUnit(index, index.entries[0]), HarnessError);
}

}  // namespace
}  // namespace idol::corpus
