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

#include <algorithm>
#include <functional>

#include <gtest/gtest.h>

#include "idol/common/error.h"
#include "idol/syntax/ast.h"
#include "idol/syntax/edit.h"
#include "idol/syntax/parser.h"

namespace idol::syntax {
namespace {

const Ast& Unwrap(const ParseResult& result) {
  if (const auto* failure = std::get_if<ParseFailure>(&result)) {
    ADD_FAILURE() << failure->Describe();
    static const Ast kEmpty(std::make_shared<const std::string>(""), {}, {}, kNoNode);
    return kEmpty;
  }
  return std::get<Ast>(result);
}

NodeId FindFirst(const Ast& ast, NodeKind kind) {
  for (NodeId id = 0; id < static_cast<NodeId>(ast.size()); ++id) {
    if (ast.node(id).kind == kind) return id;
  }
  return kNoNode;
}

constexpr char kDoWhile[] = R"(pragma solidity ^0.8.0;
contract C {
  function f() public pure returns (uint256 x) {
    do { x++; } while (x < 3);
  }
}
)";

TEST(ParserTest, DoWhileConditionSpan) {
  ParseResult result = Parse(kDoWhile);
  const Ast& ast = Unwrap(result);
  NodeId loop = FindFirst(ast, NodeKind::kDoWhile);
  ASSERT_NE(loop, kNoNode);
  EXPECT_EQ(ast.Text(ast.node(loop).slot(1)), "x < 3");
  EXPECT_EQ(ast.Text(ast.node(loop).slot(0)), "{ x++; }");
}

TEST(ParserTest, ContractShape) {
  ParseResult result = Parse(R"(
// SPDX-License-Identifier: MIT
pragma solidity >=0.8.0;
interface I { function g() external; }
abstract contract Base { function h() internal virtual returns (uint); }
contract C is Base {
  struct S { uint a; bytes32 b; }
  enum E { A, B }
  event Ev(uint indexed a, address b);
  error Bad(uint code);
  mapping(address => mapping(uint => S)) internal table;
  uint[3][] public grid;
  uint constant K = 1e18;
  modifier only(uint v) { require(v > 0, "zero"); _; }
  function h() internal pure override returns (uint) { return 1; }
  function f(uint a, bytes calldata d) external only(a) returns (uint r, bool) {
    (uint p, , bool q) = (1, 2, true);
    S memory s = S({a: 1, b: keccak256(abi.encodePacked(a))});
    uint[] memory xs = new uint[](a % 4);
    unchecked { r = a ** 2 ** 1; }
    if (q) emit Ev(p, msg.sender); else revert Bad(1);
    for (uint i = 0; i < xs.length; ++i) { xs[i] = i; continue; }
    assembly { let z := add(1, 2) }
    try I(address(this)).g() { } catch Error(string memory) { } catch { }
    return (d.length > 0 ? uint8(d[0]) : s.a, type(uint8).max == 255);
  }
}
)");
  const Ast& ast = Unwrap(result);
  EXPECT_NE(FindFirst(ast, NodeKind::kInlineAssembly), kNoNode);
  EXPECT_NE(FindFirst(ast, NodeKind::kTry), kNoNode);
  EXPECT_NE(FindFirst(ast, NodeKind::kUncheckedBlock), kNoNode);
  EXPECT_NE(FindFirst(ast, NodeKind::kPlaceholder), kNoNode);
  EXPECT_EQ(ast.Reprint(), ast.source());
}

TEST(ParserTest, PowerIsRightAssociativeAndBindsLooserThanUnary) {
  ParseResult result = ParseExpression("-a ** b ** c");
  const Ast& ast = Unwrap(result);
  const Node& top = ast.node(ast.root());
  ASSERT_EQ(top.kind, NodeKind::kBinaryOp);
  EXPECT_EQ(ast.Text(top.slot(0)), "-a");
  EXPECT_EQ(ast.Text(top.slot(1)), "b ** c");
}

TEST(ParserTest, PrecedenceOfComparisonsAndLogic) {
  ParseResult result = ParseExpression("a + b * c < d && e || f");
  const Ast& ast = Unwrap(result);
  const Node& top = ast.node(ast.root());
  EXPECT_EQ(ast.Op(ast.root()), "||");
  EXPECT_EQ(ast.Text(top.slot(0)), "a + b * c < d && e");
}

TEST(ParserTest, IndexAssignmentIsNotADeclaration) {
  ParseResult result = ParseStatement("a[i] = b.c[1];");
  const Ast& ast = Unwrap(result);
  EXPECT_EQ(ast.node(ast.root()).kind, NodeKind::kExpressionStatement);
  ParseResult decl = ParseStatement("uint[2] memory a = [uint(1), 2];");
  EXPECT_EQ(Unwrap(decl).node(Unwrap(decl).root()).kind,
            NodeKind::kVariableDeclarationStatement);
}

TEST(ParserTest, ImportIsUnsupported) {
  ParseResult result = Parse("import \"./A.sol\";\ncontract C {}\n");
  const auto* failure = std::get_if<ParseFailure>(&result);
  ASSERT_NE(failure, nullptr);
  EXPECT_EQ(failure->kind, ParseFailure::Kind::kUnsupported);
  EXPECT_EQ(failure->line, 1);
}

TEST(ParserTest, SyntaxErrorCarriesLineAndColumn) {
  ParseResult result = Parse("contract C {\n  function f( public {}\n}\n");
  const auto* failure = std::get_if<ParseFailure>(&result);
  ASSERT_NE(failure, nullptr);
  EXPECT_EQ(failure->kind, ParseFailure::Kind::kSyntax);
  EXPECT_EQ(failure->line, 2);
  EXPECT_GT(failure->column, 1);
}

TEST(ParserTest, UnterminatedStringIsSyntaxError) {
  ParseResult result = Parse("contract C { string s = \"abc; }");
  ASSERT_TRUE(std::holds_alternative<ParseFailure>(result));
}

TEST(ParserTest, SpansNestAndSiblingsAreOrdered) {
  ParseResult result = Parse(kDoWhile);
  const Ast& ast = Unwrap(result);
  for (NodeId id = 0; id < static_cast<NodeId>(ast.size()); ++id) {
    const Node& node = ast.node(id);
    uint32_t last_end = node.span.begin;
    for (NodeId child : node.children) {
      EXPECT_TRUE(node.span.Contains(ast.node(child).span));
      EXPECT_GE(ast.node(child).span.begin, last_end);
      last_end = ast.node(child).span.end;
      EXPECT_EQ(ast.parent(child), id);
    }
  }
}

// Every closed statement or expression subtree reparses to the same shape.
TEST(ParserTest, SubtreeSpansReparse) {
  ParseResult result = Parse(R"(contract C {
  mapping(uint => uint) m;
  function f(uint n) public returns (uint s) {
    uint i = 0;
    while (i < n) { s += m[i] * 2; i++; }
    if (s > 10) { s = s - 1; } else s = (s + 1) % 7;
    do { s--; } while (s > 100);
  }
})");
  const Ast& ast = Unwrap(result);
  std::function<std::vector<NodeKind>(const Ast&, NodeId)> shape =
      [&](const Ast& tree, NodeId id) {
        std::vector<NodeKind> kinds{tree.node(id).kind};
        for (NodeId child : tree.node(id).children) {
          auto sub = shape(tree, child);
          kinds.insert(kinds.end(), sub.begin(), sub.end());
        }
        return kinds;
      };
  int checked = 0;
  for (NodeId id = 0; id < static_cast<NodeId>(ast.size()); ++id) {
    NodeKind kind = ast.node(id).kind;
    if (!IsStatement(kind) && !IsExpression(kind)) continue;
    if (kind == NodeKind::kNamedArgument) continue;
    std::string text(ast.Text(id));
    ParseResult again =
        IsStatement(kind) ? ParseStatement(text) : ParseExpression(text);
    const Ast& sub = Unwrap(again);
    ASSERT_NE(sub.root(), kNoNode) << text;
    EXPECT_EQ(shape(sub, sub.root()), shape(ast, id)) << text;
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(EditTest, ReplacesOnlyInsideSpan) {
  std::string source = "a /* keep */ while (x) { y; } // tail";
  size_t begin = source.find("while");
  size_t end = source.find('}') + 1;
  std::string out = ApplyEdits(
      source, {Edit{Span{static_cast<uint32_t>(begin), static_cast<uint32_t>(end)},
                    "if (x) { do { y; } while (x); }"}});
  EXPECT_EQ(out.substr(0, begin), source.substr(0, begin));
  EXPECT_EQ(out.substr(out.size() - (source.size() - end)), source.substr(end));
}

TEST(EditTest, OrderIndependent) {
  std::string source = "0123456789";
  EditSet edits = {{Span{1, 2}, "A"}, {Span{4, 6}, ""}, {Span{8, 8}, "ZZ"}};
  std::string expected = ApplyEdits(source, edits);
  EXPECT_EQ(expected, "0A2367ZZ89");
  std::sort(edits.begin(), edits.end(),
            [](const Edit& a, const Edit& b) { return a.span.begin > b.span.begin; });
  EXPECT_EQ(ApplyEdits(source, edits), expected);
}

TEST(EditTest, RejectsOverlapBeforeApplying) {
  EXPECT_THROW(ApplyEdits("0123456789", {{Span{1, 5}, "x"}, {Span{4, 6}, "y"}}),
               EditConflict);
  EXPECT_THROW(ApplyEdits("0123", {{Span{2, 9}, "x"}}), EditConflict);
}

TEST(AstTest, TokenEqualIgnoresWhitespaceAndComments) {
  std::string text = "f(a+b, c) == f( a + b /* x */, c)";
  ParseResult result = ParseExpression(text);
  const Ast& ast = Unwrap(result);
  const Node& eq = ast.node(ast.root());
  EXPECT_TRUE(ast.TokenEqual(ast.node(eq.slot(0)).span, ast.node(eq.slot(1)).span));
  EXPECT_FALSE(ast.TokenEqual(ast.node(eq.slot(0)).span, Span{0, 1}));
}

TEST(AstTest, DumpJsonHasKinds) {
  ParseResult result = ParseStatement("x = 1;");
  std::string json = DumpAstJson(Unwrap(result));
  EXPECT_NE(json.find("ExpressionStatement"), std::string::npos);
  EXPECT_NE(json.find("NumberLiteral"), std::string::npos);
}

}  // namespace
}  // namespace idol::syntax
