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

#include <gtest/gtest.h>

#include "idol/common/fs.h"
#include "idol/common/hash.h"
#include "idol/corpus/source_unit.h"
#include "idol/mutate/analysis.h"
#include "idol/mutate/transform.h"
#include "idol/syntax/parser.h"

namespace idol::mutate {
namespace {

std::string Fixture(const std::string& name) {
  auto text = ReadFile(std::string(IDOL_FIXTURE_DIR) + "/" + name);
  EXPECT_TRUE(text.has_value()) << name;
  return text.value_or("");
}

syntax::Ast ParseOrDie(const std::string& source) {
  syntax::ParseResult result = syntax::Parse(source);
  if (auto* failure = std::get_if<syntax::ParseFailure>(&result)) {
    ADD_FAILURE() << failure->Describe();
    return std::get<syntax::Ast>(syntax::Parse("contract Empty {}"));
  }
  return std::get<syntax::Ast>(std::move(result));
}

std::vector<Site> Sites(const std::string& source, TransformKind kind) {
  return DiscoverSites(ParseOrDie(source), kind);
}

std::string ApplyFirst(const std::string& source, TransformKind kind, uint64_t seed = 0) {
  std::vector<Site> sites = Sites(source, kind);
  if (sites.empty()) {
    ADD_FAILURE() << "no " << KindName(kind) << " site";
    return source;
  }
  return syntax::ApplyEdits(source, Apply(source, sites[0], seed).edits);
}

std::string Wrap(const std::string& body, const std::string& members = "") {
  return "contract C {\n" + members + "  function f(uint256 a, uint256 b, uint8 c) public returns (uint256 r) {\n" +
         body + "\n  }\n}\n";
}

TEST(GoldenTest, LoopInvariantCodeMotionReversed) {
  std::string source = Fixture("golden/licm.sol");
  std::vector<Site> sites = Sites(source, TransformKind::kReverseLicm);
  ASSERT_EQ(sites.size(), 1u);
  EXPECT_EQ(sites[0].GetAll("assignment").size(), 2u);
  EXPECT_EQ(ApplyFirst(source, TransformKind::kReverseLicm),
            Fixture("golden/licm.expected.sol"));
}

TEST(GoldenTest, LoopInversionReversed) {
  std::string source = Fixture("golden/inversion.sol");
  ASSERT_EQ(Sites(source, TransformKind::kReverseLoopInversion).size(), 1u);
  EXPECT_EQ(ApplyFirst(source, TransformKind::kReverseLoopInversion),
            Fixture("golden/inversion.expected.sol"));
}

TEST(DiscoverTest, NoLoopsNoLoopSites) {
  std::string source = Wrap("    r = a + b;\n    return r * 2;");
  EXPECT_TRUE(Sites(source, TransformKind::kReverseLicm).empty());
  EXPECT_TRUE(Sites(source, TransformKind::kReverseLoopInversion).empty());
}

TEST(DiscoverTest, LicmRejectsOperandWrittenInLoop) {
  std::string source =
      Wrap("    uint256 x = a + b;\n    while (r < 3) { a = a + 1; r += x; }");
  EXPECT_TRUE(Sites(source, TransformKind::kReverseLicm).empty());
}

TEST(DiscoverTest, LicmRejectsStateReadAcrossCall) {
  std::string source = Wrap("    uint256 x = s + b;\n    while (r < 3) { g(); r += x; }",
                            "  uint256 s;\n  function g() internal { s++; }\n");
  EXPECT_TRUE(Sites(source, TransformKind::kReverseLicm).empty());
}

TEST(DiscoverTest, LicmRejectsSelfReferencingAssignment) {
  std::string source = Wrap("    r = r + a;\n    for (uint256 i = 0; i < c; i++) { b += i; }");
  EXPECT_TRUE(Sites(source, TransformKind::kReverseLicm).empty());
}

TEST(DiscoverTest, LicmAllowsAssemblyThatOnlyReadsOperands) {
  std::string source = Wrap(
      "    uint256 x;\n    x = m[a];\n    for (uint256 i = 0; i < c; i++) {\n"
      "      bytes32 h;\n      assembly { mstore(0, a) h := keccak256(0, 32) }\n"
      "      r = uint256(h) + x;\n    }",
      "  mapping(uint256 => uint256) m;\n");
  std::vector<Site> sites = Sites(source, TransformKind::kReverseLicm);
  ASSERT_EQ(sites.size(), 1u);
  std::string mutant = ApplyFirst(source, TransformKind::kReverseLicm);
  EXPECT_NE(mutant.find("i++) {\n      x = m[a];\n      bytes32 h;"), std::string::npos)
      << mutant;
}

TEST(DiscoverTest, LicmRejectsAssemblyAssigningOperand) {
  std::string source = Wrap(
      "    uint256 x = a;\n    while (r < 3) { assembly { a := add(a, 1) } r += x; }");
  EXPECT_TRUE(Sites(source, TransformKind::kReverseLicm).empty());
}

TEST(DiscoverTest, InversionNeedsIdenticalConditions) {
  std::string source =
      Wrap("    if (a < 10) { do { a++; } while (a <= 10); }");
  EXPECT_TRUE(Sites(source, TransformKind::kReverseLoopInversion).empty());
  std::string spaced = Wrap("    if (a<10) { do { a++; } while ( a < 10 ); }");
  EXPECT_EQ(Sites(spaced, TransformKind::kReverseLoopInversion).size(), 1u);
}

TEST(ApplyTest, LiteralIdentityBySeedParity) {
  std::string source = Wrap("    uint256 x;\n    x = 5;\n    r = x;");
  EXPECT_NE(ApplyFirst(source, TransformKind::kLiteralObfuscation, 4).find("x = (5 + 0);"),
            std::string::npos);
  EXPECT_NE(ApplyFirst(source, TransformKind::kLiteralObfuscation, 3).find("x = (5 * 1);"),
            std::string::npos);
}

TEST(ApplyTest, LiteralSkipsArrayLengthsAndAddressConversions) {
  std::string source =
      Wrap("    uint256[2] memory xs;\n    address z = address(0);\n    r = xs[0];");
  std::vector<Site> sites = Sites(source, TransformKind::kLiteralObfuscation);
  ASSERT_EQ(sites.size(), 1u);
  EXPECT_EQ(source.substr(sites[0].anchor.begin - 3, 4), "xs[0");
}

TEST(ApplyTest, CseCopiesKeepDeclaredType) {
  std::string source = Wrap("    uint8 t = c + 1;\n    r = t + 250;\n    uint16 w = t;\n    r += w;");
  std::string mutant = ApplyFirst(source, TransformKind::kReverseCse);
  EXPECT_NE(mutant.find("r = (c + 1) + 250;"), std::string::npos) << mutant;
  EXPECT_NE(mutant.find("uint16 w = (c + 1);"), std::string::npos) << mutant;
  EXPECT_NE(mutant.find("uint8 t = c + 1;"), std::string::npos);

  std::string literal = Wrap("    uint8 t = 5;\n    r = t + 250;");
  EXPECT_NE(ApplyFirst(literal, TransformKind::kReverseCse).find("r = uint8(5) + 250;"),
            std::string::npos);
}

TEST(ApplyTest, CseStopsAtReassignmentOfOperand) {
  std::string source = Wrap("    uint256 t = a + b;\n    r = t;\n    a = 1;\n    r += t;");
  std::vector<Site> sites = Sites(source, TransformKind::kReverseCse);
  ASSERT_FALSE(sites.empty());
  EXPECT_EQ(sites[0].GetAll("use").size(), 1u);
}

TEST(ApplyTest, KeccakHoistedBeforeStatement) {
  std::string source = Wrap("    bytes32 h = keccak256(abi.encode(a, b));\n    r = uint256(h);");
  std::string mutant = ApplyFirst(source, TransformKind::kKeccakDuplication);
  EXPECT_NE(mutant.find("    bytes32 __idol_kh1_0 = keccak256(abi.encode(a, b));\n"
                        "    bytes32 __idol_kh2_0 = keccak256(abi.encode(a, b));\n"
                        "    bytes32 h = (__idol_kh1_0 == __idol_kh2_0 ? __idol_kh1_0 : "
                        "__idol_kh2_0);"),
            std::string::npos)
      << mutant;
  // A second application picks fresh names.
  std::string twice = ApplyFirst(mutant, TransformKind::kKeccakDuplication);
  EXPECT_NE(twice.find("__idol_kh1_1"), std::string::npos);
}

TEST(ApplyTest, KeccakNotHoistedOutOfShortCircuit) {
  std::string source =
      Wrap("    bool ok = a > 0 && keccak256(abi.encode(a)) == bytes32(0);\n    r = ok ? 1 : 0;");
  EXPECT_TRUE(Sites(source, TransformKind::kKeccakDuplication).empty());
}

TEST(ApplyTest, KeccakNotHoistedPastRevertingOperand) {
  std::string source = Wrap("    r = (a - b) + uint256(keccak256(abi.encode(a + b)));");
  EXPECT_TRUE(Sites(source, TransformKind::kKeccakDuplication).empty());
}

TEST(ApplyTest, OutliningAddsPrivateFunction) {
  std::string source = Wrap("    require(a + b > 3, \"small\");\n    r = a;");
  std::vector<Site> sites = Sites(source, TransformKind::kFunctionOutlining);
  ASSERT_EQ(sites.size(), 1u);
  std::string mutant = ApplyFirst(source, TransformKind::kFunctionOutlining);
  EXPECT_NE(mutant.find("require(__idol_outlined_0(a, b), \"small\");"), std::string::npos)
      << mutant;
  EXPECT_NE(mutant.find("  function __idol_outlined_0(uint256 a, uint256 b) private pure "
                        "returns (bool) {\n      return a + b > 3;\n  }"),
            std::string::npos)
      << mutant;
}

TEST(ApplyTest, OutliningRejectedInUncheckedAndForState) {
  EXPECT_TRUE(Sites(Wrap("    unchecked { r = uint256(keccak256(abi.encode(a + b))); }"),
                    TransformKind::kFunctionOutlining)
                  .empty());
  EXPECT_TRUE(Sites(Wrap("    r = uint256(keccak256(abi.encode(s + b)));", "  uint256 s;\n"),
                    TransformKind::kFunctionOutlining)
                  .empty());
}

TEST(ApplyTest, StaleSiteRefused) {
  std::string source = Wrap("    r = 5;");
  std::vector<Site> sites = Sites(source, TransformKind::kLiteralObfuscation);
  ASSERT_EQ(sites.size(), 1u);
  EXPECT_THROW(Apply(source + " ", sites[0], 0), StaleSiteError);
}

constexpr char kRich[] = R"(pragma solidity >=0.8.0;
contract Rich {
    mapping(uint256 => uint256) m;
    uint256 total;
    event Seen(bytes32 h, uint256 v);
    function step(uint256 a, uint8 n) public returns (uint256 r) {
        uint256 x = a % 1000;
        uint256 y;
        y = x * 3 + 1;
        for (uint256 i = 0; i < n; i++) {
            r += y + i;
            m[i] = r;
        }
        bytes32 h = keccak256(abi.encodePacked(x, y));
        emit Seen(h, r + x);
        if (r < 50) {
            do {
                r += 7;
            } while (r < 50);
        }
        total += uint256(h) % 97;
        return r + total;
    }
})";

TEST(MutateUnitTest, DeterministicAndReplayable) {
  corpus::SourceUnit unit = corpus::MakeSourceUnit("rich.sol", kRich);
  std::vector<TransformKind> kinds(std::begin(kAllKinds), std::end(kAllKinds));
  std::vector<MutantUnit> first = MutateUnit(unit, 11, 6, kinds);
  std::vector<MutantUnit> second = MutateUnit(unit, 11, 6, kinds);
  ASSERT_EQ(first.size(), 6u);
  ASSERT_EQ(first.size(), second.size());
  for (size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].unit.id, second[i].unit.id);
    EXPECT_NE(first[i].unit.id, unit.id);
    EXPECT_GE(first[i].applications.size(), 1u);
    EXPECT_LE(first[i].applications.size(), 3u);
    EXPECT_EQ(Replay(unit.source, first[i]), first[i].unit.source);
    // Chained applications were discovered on the intermediate text.
    std::string parent = unit.id;
    for (const TransformApplication& application : first[i].applications) {
      EXPECT_EQ(application.parent_id, parent);
      EXPECT_EQ(application.site.source_id, parent);
      parent = application.mutant_id;
    }
    EXPECT_EQ(parent, first[i].unit.id);
    MutantUnit restored = MutantFromJson(ProvenanceJson(first[i]), unit);
    EXPECT_EQ(restored.unit.source, first[i].unit.source);
  }
}

TEST(MutateUnitTest, ForcedChoice) {
  corpus::SourceUnit unit = corpus::MakeSourceUnit("inv.sol", Fixture("golden/inversion.sol"));
  std::vector<MutantUnit> mutants =
      MutateUnit(unit, 5, 1, {TransformKind::kReverseLoopInversion});
  ASSERT_EQ(mutants.size(), 1u);
  EXPECT_EQ(mutants[0].unit.source, Fixture("golden/inversion.expected.sol"));
}

TEST(MutateUnitTest, NoSitesNoMutants) {
  corpus::SourceUnit unit = corpus::MakeSourceUnit("e.sol", "contract E { uint256 s; }\n");
  EXPECT_TRUE(MutateUnit(unit, 1, 3, {std::begin(kAllKinds), std::end(kAllKinds)}).empty());
}

TEST(MutateUnitTest, EveryKindFindsSitesInRichContract) {
  syntax::Ast ast = ParseOrDie(kRich);
  for (TransformKind kind : kAllKinds) {
    EXPECT_FALSE(DiscoverSites(ast, kind).empty()) << KindName(kind);
  }
}

TEST(KindTest, NamesRoundTrip) {
  for (TransformKind kind : kAllKinds) EXPECT_EQ(KindFromName(KindName(kind)), kind);
  EXPECT_EQ(ParseKindList("all").size(), 6u);
  EXPECT_EQ(ParseKindList("ReverseCSE, ReverseLICM").front(), TransformKind::kReverseLicm);
}

}  // namespace
}  // namespace idol::mutate
