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
#include <set>

#include "idol/common/hash.h"
#include "idol/mutate/analysis.h"
#include "idol/mutate/transform.h"

namespace idol::mutate {

using syntax::Ast;
using syntax::kNoNode;
using syntax::Node;
using syntax::NodeId;
using syntax::NodeKind;
using syntax::Span;

namespace {

struct Context {
  const Ast& ast;
  const Analysis& analysis;
  std::string source_id;
};

Site NewSite(const Context& ctx, TransformKind kind, Span anchor) {
  Site site;
  site.kind = kind;
  site.anchor = anchor;
  site.source_id = ctx.source_id;
  return site;
}

// Visits every node of every mutable function body.
void ForEachNode(const Context& ctx,
                 const std::function<void(NodeId, const FunctionInfo&)>& visit) {
  for (const FunctionInfo& fn : ctx.analysis.functions()) {
    std::vector<NodeId> stack{fn.body};
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      visit(id, fn);
      const Node& node = ctx.ast.node(id);
      for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) {
        stack.push_back(*it);
      }
    }
  }
}

size_t IndexInParent(const Ast& ast, NodeId id) {
  const auto& siblings = ast.node(ast.parent(id)).children;
  return static_cast<size_t>(std::find(siblings.begin(), siblings.end(), id) -
                             siblings.begin());
}

// "v = e;" or "T v = e;" with v a single plain name.
struct SimpleAssignment {
  NodeId statement = kNoNode;
  std::string target;
  Span target_span;
  NodeId expr = kNoNode;
};

std::optional<SimpleAssignment> AsSimpleAssignment(const Ast& ast, NodeId stmt) {
  const Node& node = ast.node(stmt);
  if (node.kind == NodeKind::kExpressionStatement) {
    NodeId expr = node.slot(0);
    const Node& assign = ast.node(expr);
    if (assign.kind != NodeKind::kAssignment || ast.Op(expr) != "=") return std::nullopt;
    const Node& left = ast.node(assign.slot(0));
    if (left.kind != NodeKind::kIdentifier) return std::nullopt;
    return SimpleAssignment{stmt, std::string(ast.Name(assign.slot(0))), left.span,
                            assign.slot(1)};
  }
  if (node.kind == NodeKind::kVariableDeclarationStatement && !node.flag &&
      node.children.size() == 2 && node.slot(0) != kNoNode) {
    NodeId decl = node.children[0];
    if (ast.node(decl).kind != NodeKind::kVariableDeclaration) return std::nullopt;
    return SimpleAssignment{stmt, std::string(ast.Name(decl)), ast.node(decl).name,
                            node.slot(0)};
  }
  return std::nullopt;
}

NodeId LoopBody(const Node& loop) {
  switch (loop.kind) {
    case NodeKind::kWhile:
      return loop.slot(1);
    case NodeKind::kFor:
      return loop.slot(3);
    case NodeKind::kDoWhile:
      return loop.slot(0);
    default:
      return kNoNode;
  }
}

void DiscoverLicm(const Context& ctx, std::vector<Site>& out) {
  const Ast& ast = ctx.ast;
  const Analysis& analysis = ctx.analysis;
  ForEachNode(ctx, [&](NodeId id, const FunctionInfo& fn) {
    const Node& loop = ast.node(id);
    NodeId body = LoopBody(loop);
    if (body == kNoNode || ast.node(body).kind != NodeKind::kBlock) return;
    NodeId block = ast.parent(id);
    if (ast.node(block).kind != NodeKind::kBlock) return;
    const Effects region = analysis.CollectEffects(id, fn);
    struct Member {
      SimpleAssignment assignment;
      Effects effects;
    };
    std::vector<Member> run;  // in source order
    const auto& siblings = ast.node(block).children;
    for (size_t k = IndexInParent(ast, id); k-- > 0;) {
      auto candidate = AsSimpleAssignment(ast, siblings[k]);
      if (!candidate || !fn.ValueTypeOf(candidate->target)) break;
      if (!analysis.IsPure(candidate->expr)) break;
      Effects effects = analysis.CollectEffects(candidate->expr, fn);
      if (region.writes.count(candidate->target) ||
          analysis.Interferes(effects, region, fn)) {
        break;
      }
      // Copies re-run in order at the loop head, so no later member of the
      // run may feed this one.
      bool consistent = !effects.reads.count(candidate->target);
      for (const Member& later : run) {
        if (effects.reads.count(later.assignment.target) ||
            later.assignment.target == candidate->target) {
          consistent = false;
        }
      }
      if (!consistent) break;
      run.insert(run.begin(), Member{*candidate, std::move(effects)});
    }
    if (run.empty()) return;
    Site site = NewSite(ctx, TransformKind::kReverseLicm,
                        Span{ast.node(run.front().assignment.statement).span.begin,
                             loop.span.end});
    for (size_t i = 0; i < run.size(); ++i) {
      const SimpleAssignment& a = run[i].assignment;
      std::string suffix = std::to_string(i);
      site.bindings.push_back({"assignment" + suffix, ast.node(a.statement).span});
      site.bindings.push_back({"target" + suffix, a.target_span});
      site.bindings.push_back({"expr" + suffix, ast.node(a.expr).span});
    }
    site.bindings.push_back({"loop", loop.span});
    site.bindings.push_back({"body", ast.node(body).span});
    out.push_back(std::move(site));
  });
}

void DiscoverLoopInversion(const Context& ctx, std::vector<Site>& out) {
  const Ast& ast = ctx.ast;
  ForEachNode(ctx, [&](NodeId id, const FunctionInfo&) {
    const Node& guard = ast.node(id);
    if (guard.kind != NodeKind::kIf || guard.slot(2) != kNoNode) return;
    NodeId then = guard.slot(1);
    if (ast.node(then).kind == NodeKind::kBlock) {
      if (ast.node(then).children.size() != 1) return;
      then = ast.node(then).children[0];
    }
    const Node& loop = ast.node(then);
    if (loop.kind != NodeKind::kDoWhile) return;
    if (!ast.TokenEqual(ast.node(guard.slot(0)).span, ast.node(loop.slot(1)).span)) return;
    if (!ctx.analysis.IsPure(guard.slot(0))) return;
    Site site = NewSite(ctx, TransformKind::kReverseLoopInversion, guard.span);
    site.bindings.push_back({"guard", ast.node(guard.slot(0)).span});
    site.bindings.push_back({"loop", loop.span});
    site.bindings.push_back({"body", ast.node(loop.slot(0)).span});
    site.bindings.push_back({"condition", ast.node(loop.slot(1)).span});
    out.push_back(std::move(site));
  });
}

void CollectUses(const Ast& ast, NodeId root, std::string_view name,
                 std::vector<Span>& uses) {
  const Node& node = ast.node(root);
  if (node.kind == NodeKind::kIdentifier && ast.Name(root) == name) {
    uses.push_back(node.span);
  }
  if (node.kind == NodeKind::kTypeName) return;
  for (NodeId child : node.children) CollectUses(ast, child, name, uses);
}

void DiscoverCse(const Context& ctx, std::vector<Site>& out) {
  const Ast& ast = ctx.ast;
  const Analysis& analysis = ctx.analysis;
  ForEachNode(ctx, [&](NodeId block, const FunctionInfo& fn) {
    if (ast.node(block).kind != NodeKind::kBlock) return;
    const auto& statements = ast.node(block).children;
    for (size_t i = 0; i < statements.size(); ++i) {
      auto def = AsSimpleAssignment(ast, statements[i]);
      if (!def) continue;
      auto type = fn.ValueTypeOf(def->target);
      if (!type || *type == "address payable") continue;
      if (!analysis.IsPure(def->expr)) continue;
      Effects effects = analysis.CollectEffects(def->expr, fn);
      if (effects.reads.count(def->target)) continue;
      std::vector<Span> uses;
      for (size_t j = i + 1; j < statements.size(); ++j) {
        Effects later = analysis.CollectEffects(statements[j], fn);
        if (later.writes.count(def->target) || analysis.Interferes(effects, later, fn)) {
          break;
        }
        CollectUses(ast, statements[j], def->target, uses);
      }
      if (uses.empty()) continue;
      Site site = NewSite(ctx, TransformKind::kReverseCse, ast.node(statements[i]).span);
      site.bindings.push_back({"definition", ast.node(statements[i]).span});
      site.bindings.push_back({"expr", ast.node(def->expr).span});
      for (size_t u = 0; u < uses.size(); ++u) {
        site.bindings.push_back({"use" + std::to_string(u), uses[u]});
      }
      site.attributes["name"] = def->target;
      site.attributes["type"] = *type;
      auto expr_type = analysis.TypeOf(def->expr, fn);
      site.attributes["cast"] = expr_type && *expr_type == *type ? "false" : "true";
      out.push_back(std::move(site));
    }
  });
}

bool IsConversionTo(const Ast& ast, NodeId callee, bool (*pred)(std::string_view)) {
  const Node& node = ast.node(callee);
  return node.kind == NodeKind::kElementaryTypeExpression && pred(ast.Text(callee));
}

bool IsAddressOrBytesType(std::string_view text) {
  std::string type = NormalizeTypeName(text);
  return type == "payable" || type.rfind("address", 0) == 0 ||
         type.rfind("bytes", 0) == 0;
}

void DiscoverLiterals(const Context& ctx, std::vector<Site>& out) {
  const Ast& ast = ctx.ast;
  ForEachNode(ctx, [&](NodeId id, const FunctionInfo&) {
    const Node& node = ast.node(id);
    if (node.kind != NodeKind::kNumberLiteral || node.flag) return;
    std::string_view text = ast.Text(id);
    if (text.size() > 1 && (text[1] == 'x' || text[1] == 'X')) return;
    if (text.find('.') != std::string_view::npos) return;
    NodeId parent = ast.parent(id);
    const Node& parent_node = ast.node(parent);
    if (parent_node.kind == NodeKind::kTypeName) return;
    if (parent_node.kind == NodeKind::kFunctionCall && parent_node.slot(0) != id) {
      NodeId callee = parent_node.slot(0);
      if (IsConversionTo(ast, callee, IsAddressOrBytesType)) return;
      if (ast.node(callee).kind == NodeKind::kIdentifier && ast.Name(callee) == "type") {
        return;
      }
    }
    Site site = NewSite(ctx, TransformKind::kLiteralObfuscation, node.span);
    site.bindings.push_back({"literal", node.span});
    out.push_back(std::move(site));
  });
}

bool IsHoistable(NodeKind kind) {
  return kind == NodeKind::kExpressionStatement ||
         kind == NodeKind::kVariableDeclarationStatement ||
         kind == NodeKind::kReturn || kind == NodeKind::kEmit ||
         kind == NodeKind::kRevert;
}

void DiscoverKeccak(const Context& ctx, std::vector<Site>& out) {
  const Ast& ast = ctx.ast;
  const Analysis& analysis = ctx.analysis;
  ForEachNode(ctx, [&](NodeId id, const FunctionInfo& fn) {
    const Node& call = ast.node(id);
    if (call.kind != NodeKind::kFunctionCall || call.flag || call.children.size() != 2) {
      return;
    }
    NodeId callee = call.slot(0);
    if (ast.node(callee).kind != NodeKind::kIdentifier || ast.Name(callee) != "keccak256") {
      return;
    }
    NodeId argument = call.children[1];
    if (!analysis.IsPure(argument)) return;
    // The call must run exactly once whenever its statement runs.
    NodeId cur = id;
    NodeId statement = kNoNode;
    while (statement == kNoNode) {
      NodeId parent = ast.parent(cur);
      if (parent == kNoNode) return;
      const Node& p = ast.node(parent);
      if (syntax::IsStatement(p.kind)) {
        statement = parent;
        break;
      }
      if (p.kind == NodeKind::kBinaryOp && p.slot(1) == cur &&
          (ast.Op(parent) == "&&" || ast.Op(parent) == "||")) {
        return;
      }
      if (p.kind == NodeKind::kConditional && p.slot(0) != cur) return;
      cur = parent;
    }
    const Node& stmt = ast.node(statement);
    if (!IsHoistable(stmt.kind)) return;
    if (ast.node(ast.parent(statement)).kind != NodeKind::kBlock) return;
    if (stmt.kind == NodeKind::kExpressionStatement && stmt.slot(0) == id) return;
    Effects region;
    NodeId top = stmt.slot(0);
    if (stmt.kind == NodeKind::kVariableDeclarationStatement) {
      // Declared names are not visible to the argument.
      if (top != kNoNode) region = analysis.CollectEffects(top, fn, id);
    } else if (stmt.kind == NodeKind::kExpressionStatement &&
               ast.node(top).kind == NodeKind::kAssignment &&
               ast.Op(top) == "=" &&
               ast.node(ast.node(top).slot(0)).kind == NodeKind::kIdentifier) {
      // A plain "x = ...;" writes x only after the right side is evaluated.
      region = analysis.CollectEffects(ast.node(top).slot(1), fn, id);
    } else {
      region = analysis.CollectEffects(statement, fn, id);
    }
    Effects effects = analysis.CollectEffects(argument, fn);
    if (analysis.Interferes(effects, region, fn)) return;
    if (analysis.CanRevert(argument) && analysis.CanRevert(statement, id)) return;
    Site site = NewSite(ctx, TransformKind::kKeccakDuplication, call.span);
    site.bindings.push_back({"call", call.span});
    site.bindings.push_back({"argument", ast.node(argument).span});
    site.bindings.push_back({"statement", stmt.span});
    out.push_back(std::move(site));
  });
}

bool MentionsEnvironment(const Ast& ast, NodeId root) {
  const Node& node = ast.node(root);
  if (node.kind == NodeKind::kIdentifier) {
    std::string_view name = ast.Name(root);
    if (name == "msg" || name == "block" || name == "tx" || name == "this" ||
        name == "now" || name == "super") {
      return true;
    }
  }
  for (NodeId child : node.children) {
    if (MentionsEnvironment(ast, child)) return true;
  }
  return false;
}

void DiscoverOutlining(const Context& ctx, std::vector<Site>& out) {
  const Ast& ast = ctx.ast;
  const Analysis& analysis = ctx.analysis;
  ForEachNode(ctx, [&](NodeId id, const FunctionInfo& fn) {
    const Node& call = ast.node(id);
    if (call.kind != NodeKind::kFunctionCall) return;
    NodeId callee = call.slot(0);
    if (ast.node(callee).kind == NodeKind::kIdentifier && ast.Name(callee) == "type") {
      return;
    }
    if (analysis.InUnchecked(id)) return;
    const ContractInfo& contract = analysis.contract(fn.contract);
    for (size_t i = 1; i < call.children.size(); ++i) {
      NodeId expr = call.children[i];
      if (ast.node(expr).kind == NodeKind::kNamedArgument) expr = ast.node(expr).slot(0);
      NodeKind kind = ast.node(expr).kind;
      if (kind != NodeKind::kBinaryOp && kind != NodeKind::kUnaryOp &&
          kind != NodeKind::kConditional && kind != NodeKind::kFunctionCall) {
        continue;
      }
      if (!analysis.IsPure(expr) || MentionsEnvironment(ast, expr)) continue;
      if (analysis.CollectEffects(expr, fn).reads_indirect) continue;
      auto type = analysis.TypeOf(expr, fn);
      if (!type) continue;
      std::string params;
      std::string args;
      bool nameable = true;
      for (const std::string& name : analysis.Identifiers(expr)) {
        if (auto local = fn.ValueTypeOf(name)) {
          params += (params.empty() ? "" : ", ") + *local + " " + name;
          args += (args.empty() ? "" : ", ") + name;
        } else if (fn.IsLocal(name) || !contract.constants.count(name)) {
          nameable = false;
        }
      }
      if (!nameable) continue;
      Site site = NewSite(ctx, TransformKind::kFunctionOutlining, ast.node(expr).span);
      site.bindings.push_back({"expr", ast.node(expr).span});
      site.bindings.push_back({"function", ast.node(fn.node).span});
      site.attributes["type"] = *type;
      site.attributes["params"] = params;
      site.attributes["args"] = args;
      out.push_back(std::move(site));
    }
  });
}

void DiscoverKind(const Context& ctx, TransformKind kind, std::vector<Site>& sites) {
  switch (kind) {
    case TransformKind::kReverseLicm:
      DiscoverLicm(ctx, sites);
      break;
    case TransformKind::kReverseLoopInversion:
      DiscoverLoopInversion(ctx, sites);
      break;
    case TransformKind::kReverseCse:
      DiscoverCse(ctx, sites);
      break;
    case TransformKind::kLiteralObfuscation:
      DiscoverLiterals(ctx, sites);
      break;
    case TransformKind::kKeccakDuplication:
      DiscoverKeccak(ctx, sites);
      break;
    case TransformKind::kFunctionOutlining:
      DiscoverOutlining(ctx, sites);
      break;
  }
}

}  // namespace

std::vector<Site> DiscoverSites(const Ast& ast, TransformKind kind) {
  Analysis analysis(ast);
  Context ctx{ast, analysis, Sha256Hex(ast.source())};
  std::vector<Site> sites;
  DiscoverKind(ctx, kind, sites);
  std::stable_sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    if (a.anchor.begin != b.anchor.begin) return a.anchor.begin < b.anchor.begin;
    return a.anchor.end < b.anchor.end;
  });
  return sites;
}

std::vector<Site> DiscoverAllSites(const Ast& ast, const std::vector<TransformKind>& kinds) {
  Analysis analysis(ast);
  Context ctx{ast, analysis, Sha256Hex(ast.source())};
  std::vector<Site> all;
  for (TransformKind kind : kAllKinds) {
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) continue;
    DiscoverKind(ctx, kind, all);
  }
  std::stable_sort(all.begin(), all.end(), [](const Site& a, const Site& b) {
    if (a.anchor.begin != b.anchor.begin) return a.anchor.begin < b.anchor.begin;
    return a.kind < b.kind;
  });
  return all;
}

}  // namespace idol::mutate
