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

#ifndef IDOL_MUTATE_ANALYSIS_H_
#define IDOL_MUTATE_ANALYSIS_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "idol/syntax/ast.h"

namespace idol::mutate {

// "uint" -> "uint256", collapses whitespace. Returns the input otherwise.
std::string NormalizeTypeName(std::string_view text);

// Elementary, statically sized, nameable without a data location.
bool IsValueType(std::string_view normalized);

// Read/write summary of a subtree. Names are compared textually, so
// shadowed declarations merge conservatively.
struct Effects {
  std::set<std::string> reads;
  std::set<std::string> writes;
  bool reads_indirect = false;   // index/member read rooted at a local
  bool writes_indirect = false;  // index/member write rooted at a local
  bool writes_memory = false;    // inline assembly memory writes
  bool calls = false;            // call that may touch state or memory
  bool opaque = false;           // region that may do anything
  bool side_effects = false;     // any write or call at all
};

struct ContractInfo {
  syntax::NodeId node = syntax::kNoNode;
  std::map<std::string, std::string> constants;  // name -> normalized type
};

struct FunctionInfo {
  syntax::NodeId node = syntax::kNoNode;
  syntax::NodeId body = syntax::kNoNode;
  size_t contract = 0;
  // Declared type of each parameter, return variable and local; empty when
  // the name is declared more than once with different types.
  std::map<std::string, std::string> locals;

  bool IsLocal(std::string_view name) const {
    return locals.count(std::string(name)) > 0;
  }
  // Type when the local is a value type, nullopt otherwise.
  std::optional<std::string> ValueTypeOf(std::string_view name) const;
};

class Analysis {
 public:
  explicit Analysis(const syntax::Ast& ast);

  const syntax::Ast& ast() const { return ast_; }
  const std::vector<FunctionInfo>& functions() const { return functions_; }
  const ContractInfo& contract(size_t index) const { return contracts_[index]; }

  // The mutable function body containing id, or nullptr. Modifier bodies and
  // code outside functions are never mutable.
  const FunctionInfo* EnclosingFunction(syntax::NodeId id) const;
  bool InUnchecked(syntax::NodeId id) const;
  bool InsideOpaque(syntax::NodeId id) const;

  // Side-effect free and deterministic within one transaction, judged
  // syntactically.
  bool IsPure(syntax::NodeId expr) const;

  // Effects of the subtree at root, skipping the subtree at skip.
  Effects CollectEffects(syntax::NodeId root, const FunctionInfo& fn,
                         syntax::NodeId skip = syntax::kNoNode) const;

  // True when executing region may change the value of an expression with
  // effects expr.
  bool Interferes(const Effects& expr, const Effects& region,
                  const FunctionInfo& fn) const;

  // Exact static type of a pure expression, or nullopt when it cannot be
  // named (literals, mixed types, reference types).
  std::optional<std::string> TypeOf(syntax::NodeId expr, const FunctionInfo& fn) const;

  // True when evaluating the subtree (minus skip) may revert.
  bool CanRevert(syntax::NodeId root, syntax::NodeId skip = syntax::kNoNode) const;

  // Identifier names referenced in the subtree, in first-occurrence order.
  std::vector<std::string> Identifiers(syntax::NodeId root) const;

  // Name of the root identifier of an lvalue like a.b[c].d, or "".
  std::string RootName(syntax::NodeId expr) const;

 private:
  void CollectLocals(syntax::NodeId id, FunctionInfo& fn) const;
  void Visit(syntax::NodeId id, const FunctionInfo& fn, syntax::NodeId skip,
             Effects& effects) const;
  void VisitTarget(syntax::NodeId id, const FunctionInfo& fn, syntax::NodeId skip,
                   Effects& effects) const;
  void VisitAssembly(syntax::NodeId id, const FunctionInfo& fn, Effects& effects) const;
  std::optional<std::string> TypeOfImpl(syntax::NodeId expr, const FunctionInfo& fn) const;
  bool IsEffectFreeCallee(syntax::NodeId callee) const;
  bool IsPureCallee(syntax::NodeId callee) const;

  const syntax::Ast& ast_;
  std::vector<ContractInfo> contracts_;
  std::vector<FunctionInfo> functions_;
  std::vector<int> function_of_;
};

}  // namespace idol::mutate

#endif  // IDOL_MUTATE_ANALYSIS_H_
