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

#ifndef IDOL_MUTATE_TRANSFORM_H_
#define IDOL_MUTATE_TRANSFORM_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "idol/corpus/source_unit.h"
#include "idol/syntax/ast.h"
#include "idol/syntax/edit.h"

namespace idol::mutate {

// Enumeration order is the tie-breaker for sites sharing an anchor offset.
enum class TransformKind : uint8_t {
  kReverseLicm,
  kReverseLoopInversion,
  kReverseCse,
  kLiteralObfuscation,
  kKeccakDuplication,
  kFunctionOutlining,
};

inline constexpr TransformKind kAllKinds[] = {
    TransformKind::kReverseLicm,        TransformKind::kReverseLoopInversion,
    TransformKind::kReverseCse,         TransformKind::kLiteralObfuscation,
    TransformKind::kKeccakDuplication,  TransformKind::kFunctionOutlining,
};

std::string_view KindName(TransformKind kind);
std::optional<TransformKind> KindFromName(std::string_view name);
// Parses a comma separated list; "all" selects every kind.
std::vector<TransformKind> ParseKindList(std::string_view list);

struct Binding {
  std::string name;
  syntax::Span span;

  friend bool operator==(const Binding&, const Binding&) = default;
};

struct Site {
  TransformKind kind;
  syntax::Span anchor;
  std::vector<Binding> bindings;
  std::map<std::string, std::string> attributes;
  std::string source_id;  // sha256 of the text the site was found on

  syntax::Span Get(std::string_view name) const;
  std::vector<syntax::Span> GetAll(std::string_view prefix) const;

  friend bool operator==(const Site&, const Site&) = default;
};

struct TransformApplication {
  TransformKind kind;
  Site site;
  syntax::EditSet edits;
  std::string mutant_id;
  std::string parent_id;
  uint64_t seed = 0;
};

struct MutantUnit {
  corpus::SourceUnit unit;
  std::string origin_id;  // the corpus unit the chain started from
  std::vector<TransformApplication> applications;
};

class StaleSiteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sites of one kind in source order.
std::vector<Site> DiscoverSites(const syntax::Ast& ast, TransformKind kind);

// Sites of every listed kind, ordered by (anchor start, kind).
std::vector<Site> DiscoverAllSites(const syntax::Ast& ast,
                                   const std::vector<TransformKind>& kinds);

// Applies one site. The site must have been discovered on exactly source.
TransformApplication Apply(const std::string& source, const Site& site,
                           uint64_t seed);

// Up to budget distinct mutants, each built from 1..3 applications with
// sites rediscovered after every step.
std::vector<MutantUnit> MutateUnit(const corpus::SourceUnit& unit, uint64_t seed,
                                   int budget,
                                   const std::vector<TransformKind>& kinds);

// Rebuilds the mutant source by replaying the recorded edits.
std::string Replay(const std::string& origin_source, const MutantUnit& mutant);

nlohmann::ordered_json SiteToJson(const Site& site);
nlohmann::ordered_json ApplicationToJson(const TransformApplication& application);
nlohmann::ordered_json ProvenanceJson(const MutantUnit& mutant);
MutantUnit MutantFromJson(const nlohmann::json& json,
                          const corpus::SourceUnit& origin);

}  // namespace idol::mutate

#endif  // IDOL_MUTATE_TRANSFORM_H_
