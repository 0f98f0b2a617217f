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
#include <string>
#include <utility>
#include <vector>

#include "idol/campaign/campaign.h"
#include "idol/common/error.h"
#include "idol/common/prng.h"
#include "idol/execute/execute.h"
#include "idol/syntax/edit.h"
#include "idol/syntax/parser.h"
#include "pipeline.h"

namespace idol::campaign {

using compile::CompileStatus;
using nlohmann::json;

namespace {

// Predicate evaluations allowed per reduction.
constexpr int kMaxPredicateRuns = 400;

// Removable regions: top-level definitions, contract members, and statements
// directly inside a block. Sorted by start, then by decreasing length.
std::vector<syntax::Span> Chunks(const syntax::Ast& ast) {
  std::vector<syntax::Span> chunks;
  for (syntax::NodeId id = 0; id < static_cast<syntax::NodeId>(ast.size()); ++id) {
    const syntax::Node& node = ast.node(id);
    const syntax::NodeId parent = ast.parent(id);
    if (parent == syntax::kNoNode) continue;
    const syntax::NodeKind parent_kind = ast.node(parent).kind;
    const bool top_level = parent_kind == syntax::NodeKind::kSourceUnit &&
                           node.kind == syntax::NodeKind::kContract;
    const bool member = parent_kind == syntax::NodeKind::kContract &&
                        node.kind != syntax::NodeKind::kInheritance;
    const bool statement =
        parent_kind == syntax::NodeKind::kBlock && syntax::IsStatement(node.kind);
    if (top_level || member || statement) chunks.push_back(node.span);
  }
  std::sort(chunks.begin(), chunks.end(), [](syntax::Span a, syntax::Span b) {
    return a.begin != b.begin ? a.begin < b.begin : a.end > b.end;
  });
  return chunks;
}

// Deletes the given spans. Nested spans collapse into their outermost one.
std::string Remove(const std::string& source, std::vector<syntax::Span> spans) {
  std::sort(spans.begin(), spans.end(), [](syntax::Span a, syntax::Span b) {
    return a.begin != b.begin ? a.begin < b.begin : a.end > b.end;
  });
  syntax::EditSet edits;
  for (syntax::Span span : spans) {
    if (!edits.empty() && edits.back().span.Contains(span)) continue;
    edits.push_back({span, ""});
  }
  return syntax::ApplyEdits(source, edits);
}

struct Predicate {
  const BugReport& report;
  compile::Compiler& compiler;
  std::string field;
  std::string baseline;
  std::string other;
  int runs = 0;

  bool operator()(const std::string& candidate) {
    ++runs;
    if (!std::holds_alternative<syntax::Ast>(syntax::Parse(candidate))) return false;
    internal::Evaluation evaluation = internal::EvaluateMatrix(
        candidate, report.configs, nullptr, report.plan_seed, report.rounds, compiler);
    if (!evaluation.AllCompiled()) return false;
    const auto& divergence = evaluation.verdict.divergence;
    return evaluation.verdict.kind == oracle::VerdictKind::kDivergence && divergence &&
           divergence->field == field && divergence->baseline_config == baseline &&
           divergence->other_config == other;
  }

  bool Exhausted() const { return runs >= kMaxPredicateRuns; }
};

// Classic ddmin over a fixed chunk list; returns the surviving chunks.
std::vector<syntax::Span> DeltaDebug(const std::string& source, std::vector<syntax::Span> chunks,
                                     Predicate& predicate) {
  size_t granularity = 2;
  while (chunks.size() >= 2 && !predicate.Exhausted()) {
    const size_t size = chunks.size();
    const size_t step = (size + granularity - 1) / granularity;
    bool reduced = false;
    for (size_t start = 0; start < size && !predicate.Exhausted(); start += step) {
      const size_t end = std::min(size, start + step);
      std::vector<syntax::Span> removed(chunks.begin() + start, chunks.begin() + end);
      std::vector<syntax::Span> kept(chunks.begin(), chunks.begin() + start);
      kept.insert(kept.end(), chunks.begin() + end, chunks.end());
      if (predicate(Remove(source, removed))) {
        // Commit the removal by dropping those chunks from the working list.
        std::vector<syntax::Span> survivors;
        for (syntax::Span span : kept) {
          bool inside = std::any_of(removed.begin(), removed.end(),
                                    [&](syntax::Span r) { return r.Contains(span); });
          if (!inside) survivors.push_back(span);
        }
        chunks = std::move(survivors);
        granularity = std::max<size_t>(granularity - 1, 2);
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      if (granularity >= size) break;
      granularity = std::min(size, granularity * 2);
    }
  }
  return chunks;
}

std::vector<syntax::Span> Complement(const std::vector<syntax::Span>& all,
                                     const std::vector<syntax::Span>& kept) {
  std::vector<syntax::Span> removed;
  for (syntax::Span span : all) {
    if (std::find(kept.begin(), kept.end(), span) == kept.end()) removed.push_back(span);
  }
  return removed;
}

}  // namespace

oracle::Verdict ReplayReport(const BugReport& report, compile::Compiler& compiler) {
  internal::Evaluation evaluation = internal::EvaluateMatrix(
      report.mutant_source, report.configs, nullptr, report.plan_seed, report.rounds, compiler);
  return evaluation.verdict;
}

BugReport Reduce(const BugReport& report, compile::Compiler& compiler) {
  BugReport reduced = report;
  reduced.reduction.original_bytes = report.mutant_source.size();
  reduced.reduction.minimized_bytes = report.mutant_source.size();
  if (report.classification != oracle::Classification::kBehavioral || !report.verdict.contains("divergence") ||
      report.verdict["divergence"].is_null()) {
    reduced.reduction.status = "aborted";
    reduced.reduction.message = "only behavioral divergences are reduced";
    return reduced;
  }
  oracle::Divergence divergence = oracle::Divergence::FromJson(report.verdict["divergence"]);
  Predicate predicate{report, compiler, divergence.field, divergence.baseline_config,
                      divergence.other_config};
  std::string current = report.mutant_source;
  if (!predicate(current)) {
    reduced.reduction.status = "aborted";
    reduced.reduction.message = "divergence does not reproduce on the unreduced source";
    reduced.reduction.predicate_runs = predicate.runs;
    return reduced;
  }

  auto parse_chunks = [](const std::string& source) {
    syntax::ParseResult parsed = syntax::Parse(source);
    return Chunks(std::get<syntax::Ast>(parsed));
  };
  {
    std::vector<syntax::Span> all = parse_chunks(current);
    std::vector<syntax::Span> kept = DeltaDebug(current, all, predicate);
    if (kept.size() != all.size()) current = Remove(current, Complement(all, kept));
  }
  // Single-chunk removals until none succeeds; the result is 1-minimal.
  bool progress = true;
  while (progress && !predicate.Exhausted()) {
    progress = false;
    for (syntax::Span span : parse_chunks(current)) {
      if (predicate.Exhausted()) break;
      std::string candidate = Remove(current, {span});
      if (predicate(candidate)) {
        current = std::move(candidate);
        progress = true;
        break;
      }
    }
  }

  reduced.minimized_source = current;
  reduced.reduction.minimized_bytes = current.size();
  reduced.reduction.predicate_runs = predicate.runs;
  reduced.reduction.status = current.size() < report.mutant_source.size() ? "reduced" : "unchanged";
  reduced.reduction.message = predicate.Exhausted()
                                  ? "predicate budget exhausted; result may not be 1-minimal"
                                  : "1-minimal with respect to removable chunks";
  return reduced;
}

EquivalenceCheck CheckEquivalence(const std::string& parent_source,
                                  const std::string& mutant_source,
                                  const std::string& solc_path, uint64_t seed, int rounds,
                                  compile::Compiler& compiler) {
  const compile::CompileConfig gate = internal::GateConfig(solc_path, "");
  compile::CompileOutcome parent = compiler.Compile(parent_source, gate);
  if (parent.status != CompileStatus::kOk) {
    throw ConfigError("parent does not compile at " + gate.Label() + ": " + parent.message);
  }
  const corpus::SourceUnit unit = corpus::MakeSourceUnit("parent.sol", parent_source);
  execute::PlanOptions options;
  options.rounds = rounds;
  execute::CallPlan plan =
      execute::PlanCalls(parent.artifact->abi, DeriveSeed(seed, "plan/" + unit.id), options);
  execute::ExecutionTrace parent_trace = execute::Run(*parent.artifact, plan);

  EquivalenceCheck check;
  check.parent_trace = parent_trace.ToJson();
  compile::CompileOutcome mutant = compiler.Compile(mutant_source, gate);
  if (mutant.status != CompileStatus::kOk) {
    check.detail = "mutant does not compile at " + gate.Label() + ": " + mutant.message;
    return check;
  }
  if (mutant.artifact->abi != parent.artifact->abi) {
    check.detail = "mutant ABI differs from parent ABI";
    return check;
  }
  execute::ExecutionTrace mutant_trace = execute::Run(*mutant.artifact, plan);
  check.mutant_trace = mutant_trace.ToJson();
  oracle::Equivalence equivalence = oracle::CheckMutantEquivalence(parent_trace, mutant_trace);
  check.equivalent = equivalence.equivalent;
  check.detail = equivalence.detail;
  return check;
}

}  // namespace idol::campaign
