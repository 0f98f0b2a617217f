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

#include "idol/syntax/ast.h"

#include <algorithm>

#include "idol/common/error.h"
#include "json.hpp"

namespace idol::syntax {

std::string_view NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kSourceUnit: return "SourceUnit";
    case NodeKind::kPragma: return "Pragma";
    case NodeKind::kContract: return "Contract";
    case NodeKind::kInheritance: return "Inheritance";
    case NodeKind::kStateVariable: return "StateVariable";
    case NodeKind::kStruct: return "Struct";
    case NodeKind::kEnum: return "Enum";
    case NodeKind::kEvent: return "Event";
    case NodeKind::kError: return "Error";
    case NodeKind::kUsingFor: return "UsingFor";
    case NodeKind::kUserDefinedValueType: return "UserDefinedValueType";
    case NodeKind::kFunction: return "Function";
    case NodeKind::kParameterList: return "ParameterList";
    case NodeKind::kVariableDeclaration: return "VariableDeclaration";
    case NodeKind::kModifierInvocation: return "ModifierInvocation";
    case NodeKind::kTypeName: return "TypeName";
    case NodeKind::kBlock: return "Block";
    case NodeKind::kUncheckedBlock: return "UncheckedBlock";
    case NodeKind::kVariableDeclarationStatement:
      return "VariableDeclarationStatement";
    case NodeKind::kExpressionStatement: return "ExpressionStatement";
    case NodeKind::kIf: return "If";
    case NodeKind::kWhile: return "While";
    case NodeKind::kDoWhile: return "DoWhile";
    case NodeKind::kFor: return "For";
    case NodeKind::kBreak: return "Break";
    case NodeKind::kContinue: return "Continue";
    case NodeKind::kReturn: return "Return";
    case NodeKind::kEmit: return "Emit";
    case NodeKind::kRevert: return "Revert";
    case NodeKind::kPlaceholder: return "Placeholder";
    case NodeKind::kInlineAssembly: return "InlineAssembly";
    case NodeKind::kTry: return "Try";
    case NodeKind::kAssignment: return "Assignment";
    case NodeKind::kConditional: return "Conditional";
    case NodeKind::kBinaryOp: return "BinaryOp";
    case NodeKind::kUnaryOp: return "UnaryOp";
    case NodeKind::kFunctionCall: return "FunctionCall";
    case NodeKind::kNamedArgument: return "NamedArgument";
    case NodeKind::kCallOptions: return "CallOptions";
    case NodeKind::kMemberAccess: return "MemberAccess";
    case NodeKind::kIndexAccess: return "IndexAccess";
    case NodeKind::kIndexRange: return "IndexRange";
    case NodeKind::kNumberLiteral: return "NumberLiteral";
    case NodeKind::kStringLiteral: return "StringLiteral";
    case NodeKind::kBoolLiteral: return "BoolLiteral";
    case NodeKind::kIdentifier: return "Identifier";
    case NodeKind::kElementaryTypeExpression: return "ElementaryTypeExpression";
    case NodeKind::kTuple: return "Tuple";
    case NodeKind::kInlineArray: return "InlineArray";
    case NodeKind::kNew: return "New";
  }
  return "Unknown";
}

bool IsStatement(NodeKind kind) {
  return kind >= NodeKind::kBlock && kind <= NodeKind::kTry;
}

bool IsExpression(NodeKind kind) { return kind >= NodeKind::kAssignment; }

bool IsOpaque(NodeKind kind) {
  return kind == NodeKind::kInlineAssembly || kind == NodeKind::kTry ||
         kind == NodeKind::kUsingFor || kind == NodeKind::kInheritance ||
         kind == NodeKind::kUserDefinedValueType;
}

Ast::Ast(std::shared_ptr<const std::string> source, std::vector<Token> tokens,
         std::vector<Node> nodes, NodeId root)
    : source_(std::move(source)),
      tokens_(std::move(tokens)),
      nodes_(std::move(nodes)),
      parents_(nodes_.size(), kNoNode),
      root_(root) {
  for (size_t id = 0; id < nodes_.size(); ++id) {
    for (NodeId child : nodes_[id].children) {
      parents_[child] = static_cast<NodeId>(id);
    }
  }
}

std::vector<Token> Ast::TokensIn(Span span) const {
  auto first = std::lower_bound(
      tokens_.begin(), tokens_.end(), span.begin,
      [](const Token& token, uint32_t offset) { return token.span.begin < offset; });
  std::vector<Token> out;
  for (auto it = first; it != tokens_.end() && it->span.end <= span.end; ++it) {
    out.push_back(*it);
  }
  return out;
}

bool Ast::TokenEqual(Span a, Span b) const {
  std::vector<Token> left = TokensIn(a);
  std::vector<Token> right = TokensIn(b);
  if (left.size() != right.size()) return false;
  for (size_t i = 0; i < left.size(); ++i) {
    if (Text(left[i].span) != Text(right[i].span)) return false;
  }
  return true;
}

namespace {

void ReprintNode(const Ast& ast, NodeId id, std::string& out) {
  const Node& node = ast.node(id);
  uint32_t cursor = node.span.begin;
  for (NodeId child_id : node.children) {
    const Span child = ast.node(child_id).span;
    if (child.begin < cursor || child.end > node.span.end) {
      throw HarnessError("AST span of " +
                         std::string(NodeKindName(ast.node(child_id).kind)) +
                         " does not nest inside its parent " +
                         std::string(NodeKindName(node.kind)));
    }
    out.append(ast.Text(Span{cursor, child.begin}));
    ReprintNode(ast, child_id, out);
    cursor = child.end;
  }
  out.append(ast.Text(Span{cursor, node.span.end}));
}

nlohmann::ordered_json DumpNode(const Ast& ast, NodeId id) {
  const Node& node = ast.node(id);
  nlohmann::ordered_json out;
  out["kind"] = NodeKindName(node.kind);
  out["span"] = {node.span.begin, node.span.end};
  if (!node.name.empty()) out["name"] = ast.Text(node.name);
  if (!node.op.empty()) out["op"] = ast.Text(node.op);
  if (!node.children.empty()) {
    nlohmann::ordered_json children = nlohmann::ordered_json::array();
    for (NodeId child : node.children) children.push_back(DumpNode(ast, child));
    out["children"] = std::move(children);
  }
  return out;
}

}  // namespace

std::string Ast::Reprint() const {
  std::string out;
  out.reserve(source_->size());
  const Span root_span = nodes_[root_].span;
  out.append(Text(Span{0, root_span.begin}));
  ReprintNode(*this, root_, out);
  out.append(Text(Span{root_span.end, static_cast<uint32_t>(source_->size())}));
  return out;
}

std::pair<int, int> Ast::LineColumn(uint32_t offset) const {
  int line = 1;
  int column = 1;
  for (uint32_t i = 0; i < offset && i < source_->size(); ++i) {
    if ((*source_)[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

std::string DumpAstJson(const Ast& ast) {
  return DumpNode(ast, ast.root()).dump(2);
}

}  // namespace idol::syntax
