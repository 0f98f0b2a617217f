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

#ifndef IDOL_SYNTAX_AST_H_
#define IDOL_SYNTAX_AST_H_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace idol::syntax {

// Half-open byte range [begin, end) into a source buffer.
struct Span {
  uint32_t begin = 0;
  uint32_t end = 0;

  uint32_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool Contains(Span other) const {
    return begin <= other.begin && other.end <= end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class TokenKind : uint8_t { kIdentifier, kNumber, kString, kPunct };

struct Token {
  TokenKind kind;
  Span span;
};

using NodeId = int32_t;
inline constexpr NodeId kNoNode = -1;

enum class NodeKind : uint8_t {
  kSourceUnit,
  kPragma,
  kContract,
  kInheritance,  // opaque "is A, B(1)" list
  kStateVariable,
  kStruct,
  kEnum,
  kEvent,
  kError,
  kUsingFor,          // opaque
  kUserDefinedValueType,  // opaque
  kFunction,          // also constructor, fallback, receive, modifier
  kParameterList,
  kVariableDeclaration,
  kModifierInvocation,
  kTypeName,
  // Statements.
  kBlock,
  kUncheckedBlock,
  kVariableDeclarationStatement,
  kExpressionStatement,
  kIf,
  kWhile,
  kDoWhile,
  kFor,
  kBreak,
  kContinue,
  kReturn,
  kEmit,
  kRevert,
  kPlaceholder,  // "_;" in modifier bodies
  kInlineAssembly,  // opaque
  kTry,             // opaque
  // Expressions.
  kAssignment,
  kConditional,
  kBinaryOp,
  kUnaryOp,
  kFunctionCall,
  kNamedArgument,
  kCallOptions,
  kMemberAccess,
  kIndexAccess,
  kIndexRange,
  kNumberLiteral,
  kStringLiteral,
  kBoolLiteral,
  kIdentifier,
  kElementaryTypeExpression,
  kTuple,
  kInlineArray,
  kNew,
};

std::string_view NodeKindName(NodeKind kind);
bool IsStatement(NodeKind kind);
bool IsExpression(NodeKind kind);
// Regions kept as unanalyzed spans. Mutation never looks inside them.
bool IsOpaque(NodeKind kind);

enum class ContractKind : uint8_t { kContract, kInterface, kLibrary };
enum class FunctionKind : uint8_t {
  kFunction,
  kConstructor,
  kFallback,
  kReceive,
  kModifier
};
enum class Mutability : uint8_t { kNonPayable, kPure, kView, kPayable };
enum class Visibility : uint8_t { kDefault, kPublic, kExternal, kInternal, kPrivate };
enum class DataLocation : uint8_t { kNone, kMemory, kStorage, kCalldata };
enum class TypeNameKind : uint8_t {
  kElementary,
  kUserDefined,
  kMapping,
  kArray,
  kFunction
};

// Node layout per kind. Slots name the role-bearing children; absent optional
// children are kNoNode. "children" always lists every present child in source
// order.
//
//   kContract             name; slot0 inheritance
//   kFunction             name (empty for constructor/fallback/receive);
//                         slot0 params, slot1 returns, slot2 body
//   kVariableDeclaration  name (may be empty); slot0 type
//   kStateVariable        name; slot0 type, slot1 initializer
//   kTypeName             mapping: slot0 key, slot1 value;
//                         array: slot0 base, slot1 length
//   kVariableDeclarationStatement
//                         slot0 initializer; declarations in children
//   kExpressionStatement  slot0 expression
//   kIf                   slot0 condition, slot1 then, slot2 else
//   kWhile                slot0 condition, slot1 body
//   kDoWhile              slot0 body, slot1 condition
//   kFor                  slot0 init, slot1 condition, slot2 update, slot3 body
//   kReturn, kEmit, kRevert
//                         slot0 expression
//   kUncheckedBlock       slot0 block
//   kAssignment, kBinaryOp
//                         op; slot0 left, slot1 right
//   kUnaryOp              op; slot0 operand
//   kConditional          slot0 condition, slot1 true, slot2 false
//   kFunctionCall         slot0 callee; arguments are children[1..]
//   kNamedArgument        name; slot0 value
//   kCallOptions          slot0 callee; options are children[1..]
//   kMemberAccess         name (the member); slot0 base
//   kIndexAccess          slot0 base, slot1 index
//   kIndexRange           slot0 base, slot1 start, slot2 end
//   kNew                  slot0 type
//   kModifierInvocation   name; arguments in children
struct Node {
  NodeKind kind;
  Span span;
  Span name;
  Span op;
  // Kind-specific enum payloads.
  uint8_t subkind = 0;     // ContractKind, FunctionKind, TypeNameKind
  uint8_t mutability = 0;  // Mutability
  uint8_t visibility = 0;  // Visibility
  uint8_t location = 0;    // DataLocation
  bool flag = false;       // abstract / prefix / constant / tuple / has units
  std::array<NodeId, 4> slots{kNoNode, kNoNode, kNoNode, kNoNode};
  std::vector<NodeId> children;

  NodeId slot(int i) const { return slots[i]; }
};

// A parsed source file. Nodes live in an arena indexed by NodeId and hold
// only spans into the shared source buffer.
class Ast {
 public:
  Ast(std::shared_ptr<const std::string> source, std::vector<Token> tokens,
      std::vector<Node> nodes, NodeId root);

  const std::string& source() const { return *source_; }
  std::shared_ptr<const std::string> shared_source() const { return source_; }
  NodeId root() const { return root_; }
  size_t size() const { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_[id]; }
  NodeId parent(NodeId id) const { return parents_[id]; }
  const std::vector<Token>& tokens() const { return tokens_; }

  std::string_view Text(Span span) const {
    return std::string_view(*source_).substr(span.begin, span.size());
  }
  std::string_view Text(NodeId id) const { return Text(nodes_[id].span); }
  std::string_view Name(NodeId id) const { return Text(nodes_[id].name); }
  std::string_view Op(NodeId id) const { return Text(nodes_[id].op); }

  // Tokens lying entirely inside span.
  std::vector<Token> TokensIn(Span span) const;

  // True when both spans hold the same token sequence, ignoring whitespace
  // and comments between tokens.
  bool TokenEqual(Span a, Span b) const;

  // Reconstructs the source purely from node spans and inter-node gaps.
  // Throws HarnessError when spans do not nest strictly.
  std::string Reprint() const;

  // 1-based line and column of a byte offset.
  std::pair<int, int> LineColumn(uint32_t offset) const;

 private:
  std::shared_ptr<const std::string> source_;
  std::vector<Token> tokens_;
  std::vector<Node> nodes_;
  std::vector<NodeId> parents_;
  NodeId root_;
};

// Debug dump: nested JSON objects with kind, span, name and children.
std::string DumpAstJson(const Ast& ast);

}  // namespace idol::syntax

#endif  // IDOL_SYNTAX_AST_H_
