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

#include "idol/mutate/analysis.h"

#include <algorithm>
#include <regex>
#include <unordered_set>

namespace idol::mutate {

using syntax::Ast;
using syntax::kNoNode;
using syntax::Node;
using syntax::NodeId;
using syntax::NodeKind;

namespace {

const std::unordered_set<std::string_view>& BuiltinNames() {
  static const std::unordered_set<std::string_view> kNames = {
      "msg",     "block",  "tx",        "this",      "abi",     "type",
      "super",   "now",    "keccak256", "sha256",    "ripemd160",
      "ecrecover", "addmod", "mulmod",  "require",   "assert",  "revert",
      "gasleft", "blockhash", "selfdestruct", "string", "bytes"};
  return kNames;
}

bool IsBuiltinName(std::string_view name) { return BuiltinNames().count(name) > 0; }

bool IsArithmetic(std::string_view op) {
  return op == "+" || op == "-" || op == "*" || op == "/" || op == "%" ||
         op == "&" || op == "|" || op == "^";
}

bool IsComparisonOrLogic(std::string_view op) {
  return op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" ||
         op == ">=" || op == "&&" || op == "||";
}

constexpr std::string_view kLiteralType = "#literal";

}  // namespace

std::string NormalizeTypeName(std::string_view text) {
  std::string collapsed;
  bool space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !collapsed.empty();
      continue;
    }
    if (space) collapsed.push_back(' ');
    space = false;
    collapsed.push_back(c);
  }
  static const std::regex kUint(R"(\buint\b)");
  static const std::regex kInt(R"(\bint\b)");
  static const std::regex kByte(R"(\bbyte\b)");
  collapsed = std::regex_replace(collapsed, kUint, "uint256");
  collapsed = std::regex_replace(collapsed, kInt, "int256");
  collapsed = std::regex_replace(collapsed, kByte, "bytes1");
  return collapsed;
}

bool IsValueType(std::string_view normalized) {
  static const std::regex kValue(
      "bool|address|bytes([1-9]|[12][0-9]|3[0-2])|"
      "u?int(8|16|24|32|40|48|56|64|72|80|88|96|104|112|120|128|136|144|152|"
      "160|168|176|184|192|200|208|216|224|232|240|248|256)");
  return std::regex_match(normalized.begin(), normalized.end(), kValue);
}

std::optional<std::string> FunctionInfo::ValueTypeOf(std::string_view name) const {
  auto it = locals.find(std::string(name));
  if (it == locals.end() || !IsValueType(it->second)) return std::nullopt;
  return it->second;
}

Analysis::Analysis(const Ast& ast) : ast_(ast), function_of_(ast.size(), -1) {
  if (ast.root() == kNoNode || ast.node(ast.root()).kind != NodeKind::kSourceUnit) {
    return;
  }
  for (NodeId top : ast.node(ast.root()).children) {
    const Node& contract = ast.node(top);
    if (contract.kind != NodeKind::kContract) continue;
    if (contract.subkind == static_cast<uint8_t>(syntax::ContractKind::kInterface)) {
      continue;
    }
    ContractInfo info;
    info.node = top;
    for (NodeId member : contract.children) {
      const Node& node = ast.node(member);
      if (node.kind != NodeKind::kStateVariable) continue;
      bool is_constant = false;
      for (const syntax::Token& token :
           ast.TokensIn({ast.node(node.slot(0)).span.end, node.name.begin})) {
        if (ast.Text(token.span) == "constant") is_constant = true;
      }
      if (is_constant) {
        info.constants[std::string(ast.Name(member))] =
            NormalizeTypeName(ast.Text(node.slot(0)));
      }
    }
    contracts_.push_back(std::move(info));
    for (NodeId member : contract.children) {
      const Node& node = ast.node(member);
      if (node.kind != NodeKind::kFunction || node.slot(2) == kNoNode) continue;
      if (node.subkind == static_cast<uint8_t>(syntax::FunctionKind::kModifier)) {
        continue;
      }
      FunctionInfo fn;
      fn.node = member;
      fn.body = node.slot(2);
      fn.contract = contracts_.size() - 1;
      CollectLocals(member, fn);
      const int index = static_cast<int>(functions_.size());
      std::vector<NodeId> stack{fn.body};
      while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        function_of_[id] = index;
        for (NodeId child : ast.node(id).children) stack.push_back(child);
      }
      functions_.push_back(std::move(fn));
    }
  }
}

void Analysis::CollectLocals(NodeId id, FunctionInfo& fn) const {
  const Node& node = ast_.node(id);
  if (node.kind == NodeKind::kVariableDeclaration && !node.name.empty()) {
    std::string name(ast_.Name(id));
    std::string type = NormalizeTypeName(ast_.Text(node.slot(0)));
    auto [it, inserted] = fn.locals.emplace(name, type);
    if (!inserted && it->second != type) it->second.clear();
  }
  if (node.kind == NodeKind::kTypeName) return;
  for (NodeId child : node.children) CollectLocals(child, fn);
}

const FunctionInfo* Analysis::EnclosingFunction(NodeId id) const {
  if (id < 0 || static_cast<size_t>(id) >= function_of_.size()) return nullptr;
  int index = function_of_[id];
  return index < 0 ? nullptr : &functions_[index];
}

bool Analysis::InUnchecked(NodeId id) const {
  for (NodeId cur = id; cur != kNoNode; cur = ast_.parent(cur)) {
    NodeKind kind = ast_.node(cur).kind;
    if (kind == NodeKind::kUncheckedBlock) return true;
    if (kind == NodeKind::kFunction) return false;
  }
  return false;
}

bool Analysis::InsideOpaque(NodeId id) const {
  for (NodeId cur = ast_.parent(id); cur != kNoNode; cur = ast_.parent(cur)) {
    if (syntax::IsOpaque(ast_.node(cur).kind)) return true;
  }
  return false;
}

bool Analysis::IsPureCallee(NodeId callee) const {
  const Node& node = ast_.node(callee);
  if (node.kind == NodeKind::kElementaryTypeExpression) return true;
  if (node.kind == NodeKind::kIdentifier) {
    std::string_view name = ast_.Name(callee);
    return name == "keccak256" || name == "addmod" || name == "mulmod" ||
           name == "type";
  }
  if (node.kind == NodeKind::kMemberAccess) {
    const Node& base = ast_.node(node.slot(0));
    std::string_view member = ast_.Name(callee);
    return base.kind == NodeKind::kIdentifier && ast_.Name(node.slot(0)) == "abi" &&
           (member == "encode" || member == "encodePacked");
  }
  return false;
}

bool Analysis::IsEffectFreeCallee(NodeId callee) const {
  if (IsPureCallee(callee)) return true;
  const Node& node = ast_.node(callee);
  if (node.kind == NodeKind::kIdentifier) {
    static const std::unordered_set<std::string_view> kNames = {
        "require", "assert", "revert", "sha256", "ripemd160",
        "ecrecover", "gasleft", "blockhash"};
    return kNames.count(ast_.Name(callee)) > 0;
  }
  if (node.kind == NodeKind::kMemberAccess) {
    const Node& base = ast_.node(node.slot(0));
    if (base.kind != NodeKind::kIdentifier && base.kind != NodeKind::kElementaryTypeExpression) {
      return false;
    }
    std::string_view owner = ast_.Text(node.slot(0));
    std::string_view member = ast_.Name(callee);
    if (owner == "abi") return true;
    if (owner == "string" || owner == "bytes") return member == "concat";
  }
  return false;
}

bool Analysis::IsPure(NodeId expr) const {
  const Node& node = ast_.node(expr);
  switch (node.kind) {
    case NodeKind::kIdentifier:
    case NodeKind::kNumberLiteral:
    case NodeKind::kStringLiteral:
    case NodeKind::kBoolLiteral:
    case NodeKind::kElementaryTypeExpression:
      return true;
    case NodeKind::kTuple:
      if (node.children.empty()) return false;
      [[fallthrough]];
    case NodeKind::kBinaryOp:
    case NodeKind::kConditional:
      for (NodeId child : node.children) {
        if (!IsPure(child)) return false;
      }
      return true;
    case NodeKind::kUnaryOp: {
      std::string_view op = ast_.Op(expr);
      return node.flag && (op == "!" || op == "~" || op == "-") &&
             IsPure(node.slot(0));
    }
    case NodeKind::kIndexAccess:
      return node.slot(1) != kNoNode && IsPure(node.slot(0)) && IsPure(node.slot(1));
    case NodeKind::kMemberAccess: {
      std::string_view member = ast_.Name(expr);
      if (member == "balance" || member == "code" || member == "codehash" ||
          member == "gas") {
        return false;
      }
      return IsPure(node.slot(0));
    }
    case NodeKind::kFunctionCall:
      if (node.flag || !IsPureCallee(node.slot(0))) return false;
      for (size_t i = 1; i < node.children.size(); ++i) {
        if (!IsPure(node.children[i])) return false;
      }
      return true;
    default:
      return false;
  }
}

std::string Analysis::RootName(NodeId expr) const {
  NodeId cur = expr;
  for (;;) {
    const Node& node = ast_.node(cur);
    switch (node.kind) {
      case NodeKind::kIdentifier:
        return std::string(ast_.Name(cur));
      case NodeKind::kMemberAccess:
      case NodeKind::kIndexAccess:
      case NodeKind::kIndexRange:
        cur = node.slot(0);
        break;
      case NodeKind::kTuple:
        if (node.children.size() != 1) return "";
        cur = node.children[0];
        break;
      default:
        return "";
    }
  }
}

Effects Analysis::CollectEffects(NodeId root, const FunctionInfo& fn, NodeId skip) const {
  Effects effects;
  Visit(root, fn, skip, effects);
  return effects;
}

void Analysis::VisitTarget(NodeId id, const FunctionInfo& fn, NodeId skip,
                           Effects& effects) const {
  if (id == skip) return;
  const Node& node = ast_.node(id);
  effects.side_effects = true;
  switch (node.kind) {
    case NodeKind::kIdentifier:
      effects.writes.insert(std::string(ast_.Name(id)));
      return;
    case NodeKind::kTuple:
      for (NodeId child : node.children) VisitTarget(child, fn, skip, effects);
      return;
    case NodeKind::kMemberAccess:
    case NodeKind::kIndexAccess:
    case NodeKind::kIndexRange: {
      std::string root = RootName(id);
      if (!root.empty()) effects.writes.insert(root);
      if (root.empty() || fn.IsLocal(root)) effects.writes_indirect = true;
      Visit(id, fn, skip, effects);
      return;
    }
    default:
      effects.writes_indirect = true;
      Visit(id, fn, skip, effects);
  }
}

void Analysis::VisitAssembly(NodeId id, const FunctionInfo& fn, Effects& effects) const {
  static const std::unordered_set<std::string_view> kStateWriters = {
      "sstore", "tstore", "call", "callcode", "delegatecall",
      "create", "create2", "selfdestruct"};
  static const std::unordered_set<std::string_view> kMemoryWriters = {
      "mstore", "mstore8", "mcopy", "calldatacopy", "codecopy",
      "returndatacopy", "extcodecopy"};
  effects.side_effects = true;
  std::vector<syntax::Token> tokens = ast_.TokensIn(ast_.node(id).span);
  auto text = [&](size_t i) -> std::string_view {
    return i < tokens.size() ? ast_.Text(tokens[i].span) : std::string_view{};
  };
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind != syntax::TokenKind::kIdentifier) continue;
    std::string_view word = text(i);
    if (kStateWriters.count(word)) effects.calls = true;
    if (kMemoryWriters.count(word)) effects.writes_memory = true;
    if (!fn.IsLocal(word)) continue;
    effects.reads.insert(std::string(word));
    size_t j = i + 1;
    bool member = false;
    if (text(j) == ".") {
      member = true;
      j += 2;
    }
    // Multi-assignment "a, b := f()".
    while (text(j) == ",") {
      j += 2;
      if (text(j) == ".") j += 2;
    }
    if (text(j) == ":=") {
      effects.writes.insert(std::string(word));
      if (member) effects.writes_indirect = true;
    }
  }
}

void Analysis::Visit(NodeId id, const FunctionInfo& fn, NodeId skip,
                     Effects& effects) const {
  if (id == kNoNode || id == skip) return;
  const Node& node = ast_.node(id);
  switch (node.kind) {
    case NodeKind::kIdentifier: {
      std::string_view name = ast_.Name(id);
      if (!IsBuiltinName(name)) effects.reads.insert(std::string(name));
      return;
    }
    case NodeKind::kTypeName:
      return;
    case NodeKind::kVariableDeclaration:
      if (!node.name.empty()) effects.writes.insert(std::string(ast_.Name(id)));
      return;
    case NodeKind::kAssignment:
      VisitTarget(node.slot(0), fn, skip, effects);
      if (ast_.Op(id) != "=") Visit(node.slot(0), fn, skip, effects);
      Visit(node.slot(1), fn, skip, effects);
      return;
    case NodeKind::kUnaryOp: {
      std::string_view op = ast_.Op(id);
      if (op == "++" || op == "--" || op == "delete") {
        VisitTarget(node.slot(0), fn, skip, effects);
        Visit(node.slot(0), fn, skip, effects);
        return;
      }
      break;
    }
    case NodeKind::kFunctionCall: {
      NodeId callee = node.slot(0);
      const Node& callee_node = ast_.node(callee);
      if (callee_node.kind == NodeKind::kMemberAccess &&
          (ast_.Name(callee) == "push" || ast_.Name(callee) == "pop")) {
        VisitTarget(callee_node.slot(0), fn, skip, effects);
        effects.calls = true;
      } else if (!IsEffectFreeCallee(callee)) {
        effects.calls = true;
        effects.side_effects = true;
      }
      break;
    }
    case NodeKind::kMemberAccess:
    case NodeKind::kIndexAccess:
    case NodeKind::kIndexRange: {
      std::string root = RootName(id);
      if (!root.empty() && fn.IsLocal(root)) effects.reads_indirect = true;
      break;
    }
    case NodeKind::kNew: {
      const Node& type = ast_.node(node.slot(0));
      if (type.subkind != static_cast<uint8_t>(syntax::TypeNameKind::kArray)) {
        effects.calls = true;
        effects.side_effects = true;
      }
      return;
    }
    case NodeKind::kEmit: {
      effects.side_effects = true;
      const Node& call = ast_.node(node.slot(0));
      if (call.kind == NodeKind::kFunctionCall) {
        for (size_t i = 1; i < call.children.size(); ++i) {
          Visit(call.children[i], fn, skip, effects);
        }
        return;
      }
      break;
    }
    case NodeKind::kInlineAssembly:
      VisitAssembly(id, fn, effects);
      return;
    case NodeKind::kTry:
      effects.opaque = true;
      effects.side_effects = true;
      return;
    default:
      break;
  }
  for (NodeId child : node.children) Visit(child, fn, skip, effects);
}

bool Analysis::Interferes(const Effects& expr, const Effects& region,
                          const FunctionInfo& fn) const {
  if (region.opaque) return true;
  for (const std::string& name : expr.reads) {
    if (region.writes.count(name)) return true;
  }
  const ContractInfo& contract = contracts_[fn.contract];
  bool reads_state = false;
  for (const std::string& name : expr.reads) {
    if (!fn.IsLocal(name) && !contract.constants.count(name)) reads_state = true;
  }
  if ((reads_state || expr.reads_indirect) && (region.calls || region.writes_indirect)) {
    return true;
  }
  if (expr.reads_indirect) {
    if (region.writes_memory) return true;
    for (const std::string& name : region.writes) {
      if (!fn.IsLocal(name)) return true;
    }
  }
  return false;
}

std::optional<std::string> Analysis::TypeOfImpl(NodeId expr, const FunctionInfo& fn) const {
  const Node& node = ast_.node(expr);
  switch (node.kind) {
    case NodeKind::kIdentifier: {
      std::string_view name = ast_.Name(expr);
      if (auto type = fn.ValueTypeOf(name)) return type;
      if (fn.IsLocal(name)) return std::nullopt;
      const auto& constants = contracts_[fn.contract].constants;
      auto it = constants.find(std::string(name));
      if (it != constants.end() && IsValueType(it->second)) return it->second;
      return std::nullopt;
    }
    case NodeKind::kNumberLiteral:
      if (node.flag) return std::nullopt;
      return std::string(kLiteralType);
    case NodeKind::kBoolLiteral:
      return "bool";
    case NodeKind::kTuple:
      if (node.children.size() != 1) return std::nullopt;
      return TypeOfImpl(node.children[0], fn);
    case NodeKind::kBinaryOp: {
      std::string_view op = ast_.Op(expr);
      auto left = TypeOfImpl(node.slot(0), fn);
      auto right = TypeOfImpl(node.slot(1), fn);
      if (!left || !right) return std::nullopt;
      if (IsComparisonOrLogic(op)) return "bool";
      if (op == "<<" || op == ">>" || op == "**") {
        if (*left == kLiteralType) return std::nullopt;
        return left;
      }
      if (!IsArithmetic(op)) return std::nullopt;
      if (*left == *right) return left;
      if (*left == kLiteralType) return right;
      if (*right == kLiteralType) return left;
      return std::nullopt;
    }
    case NodeKind::kUnaryOp: {
      std::string_view op = ast_.Op(expr);
      if (!node.flag) return std::nullopt;
      if (op == "!") return "bool";
      if (op == "-" || op == "~") {
        auto operand = TypeOfImpl(node.slot(0), fn);
        if (!operand || *operand == kLiteralType) return std::nullopt;
        return operand;
      }
      return std::nullopt;
    }
    case NodeKind::kConditional: {
      auto a = TypeOfImpl(node.slot(1), fn);
      auto b = TypeOfImpl(node.slot(2), fn);
      if (!a || !b || *a != *b || *a == kLiteralType) return std::nullopt;
      return a;
    }
    case NodeKind::kFunctionCall: {
      NodeId callee = node.slot(0);
      const Node& callee_node = ast_.node(callee);
      if (callee_node.kind == NodeKind::kElementaryTypeExpression) {
        std::string type = NormalizeTypeName(ast_.Text(callee));
        if (type == "payable") type = "address payable";
        if (IsValueType(type)) return type;
        return std::nullopt;
      }
      if (callee_node.kind == NodeKind::kIdentifier) {
        std::string_view name = ast_.Name(callee);
        if (name == "keccak256") return "bytes32";
        if (name == "addmod" || name == "mulmod") return "uint256";
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

std::optional<std::string> Analysis::TypeOf(NodeId expr, const FunctionInfo& fn) const {
  auto type = TypeOfImpl(expr, fn);
  if (!type || *type == kLiteralType) return std::nullopt;
  return type;
}

bool Analysis::CanRevert(NodeId root, NodeId skip) const {
  if (root == kNoNode || root == skip) return false;
  const Node& node = ast_.node(root);
  switch (node.kind) {
    case NodeKind::kBinaryOp: {
      std::string_view op = ast_.Op(root);
      if (op == "+" || op == "-" || op == "*" || op == "/" || op == "%" || op == "**") {
        return true;
      }
      break;
    }
    case NodeKind::kUnaryOp:
      if (ast_.Op(root) != "!" && ast_.Op(root) != "~") return true;
      break;
    case NodeKind::kAssignment:
      if (ast_.Op(root) != "=") return true;
      break;
    case NodeKind::kIndexAccess:
    case NodeKind::kIndexRange:
    case NodeKind::kNew:
    case NodeKind::kInlineAssembly:
    case NodeKind::kTry:
    case NodeKind::kRevert:
      return true;
    case NodeKind::kFunctionCall:
      if (!IsPureCallee(node.slot(0))) return true;
      break;
    case NodeKind::kTypeName:
      return false;
    default:
      break;
  }
  for (NodeId child : node.children) {
    if (CanRevert(child, skip)) return true;
  }
  return false;
}

std::vector<std::string> Analysis::Identifiers(NodeId root) const {
  std::vector<std::string> names;
  std::vector<NodeId> stack{root};
  // Children are pushed in reverse so traversal is in source order.
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    const Node& node = ast_.node(id);
    if (node.kind == NodeKind::kIdentifier) {
      std::string name(ast_.Name(id));
      if (!IsBuiltinName(name) &&
          std::find(names.begin(), names.end(), name) == names.end()) {
        names.push_back(std::move(name));
      }
    }
    if (node.kind == NodeKind::kTypeName) continue;
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) {
      stack.push_back(*it);
    }
  }
  return names;
}

}  // namespace idol::mutate
