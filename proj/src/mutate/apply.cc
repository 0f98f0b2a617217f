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

#include <regex>
#include <set>

#include "idol/common/error.h"
#include "idol/common/hash.h"
#include "idol/common/prng.h"
#include "idol/mutate/transform.h"
#include "idol/syntax/parser.h"

namespace idol::mutate {

using syntax::Edit;
using syntax::EditSet;
using syntax::Span;

namespace {

constexpr std::string_view kKindNames[] = {
    "ReverseLICM",       "ReverseLoopInversion", "ReverseCSE",
    "LiteralObfuscation", "KeccakDuplication",   "FunctionOutlining",
};

std::string_view Slice(const std::string& source, Span span) {
  return std::string_view(source).substr(span.begin, span.size());
}

size_t LineStart(const std::string& source, uint32_t offset) {
  size_t pos = source.rfind('\n', offset == 0 ? 0 : offset - 1);
  if (offset == 0 || pos == std::string::npos) return 0;
  return pos + 1;
}

// Leading whitespace of the line containing offset.
std::string LineIndent(const std::string& source, uint32_t offset) {
  size_t start = LineStart(source, offset);
  size_t end = start;
  while (end < source.size() && (source[end] == ' ' || source[end] == '\t')) ++end;
  return source.substr(start, end - start);
}

bool FirstOnLine(const std::string& source, uint32_t offset) {
  for (size_t i = LineStart(source, offset); i < offset; ++i) {
    if (source[i] != ' ' && source[i] != '\t') return false;
  }
  return true;
}

// Strips up to width leading blanks from every line after the first.
std::string Dedent(std::string_view text, size_t width) {
  std::string out;
  size_t pos = 0;
  bool first = true;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    if (!first) {
      size_t strip = 0;
      while (strip < width && strip < line.size() &&
             (line[strip] == ' ' || line[strip] == '\t')) {
        ++strip;
      }
      line.remove_prefix(strip);
    }
    out.append(line);
    if (end == std::string_view::npos) break;
    out.push_back('\n');
    pos = end + 1;
    first = false;
  }
  return out;
}

int NextIndex(const std::string& source, const std::string& prefix) {
  std::regex pattern(prefix + "([0-9]+)");
  int next = 0;
  for (auto it = std::sregex_iterator(source.begin(), source.end(), pattern);
       it != std::sregex_iterator(); ++it) {
    next = std::max(next, std::stoi((*it)[1].str()) + 1);
  }
  return next;
}

EditSet LicmEdits(const std::string& source, const Site& site) {
  std::vector<std::string> copies;
  std::vector<Span> targets = site.GetAll("target");
  std::vector<Span> exprs = site.GetAll("expr");
  for (size_t i = 0; i < targets.size(); ++i) {
    copies.push_back(std::string(Slice(source, targets[i])) + " = " +
                     std::string(Slice(source, exprs[i])) + ";");
  }
  Span body = site.Get("body");
  const uint32_t insert_at = body.begin + 1;
  // Place copies the way the body's first statement is laid out.
  size_t first = insert_at;
  while (first < body.end - 1 && std::isspace(static_cast<unsigned char>(source[first]))) {
    ++first;
  }
  std::string text;
  if (first >= body.end - 1) {
    for (const std::string& copy : copies) text += " " + copy;
    text += " ";
  } else if (!FirstOnLine(source, static_cast<uint32_t>(first))) {
    for (const std::string& copy : copies) text += " " + copy;
  } else {
    std::string indent = LineIndent(source, static_cast<uint32_t>(first));
    for (const std::string& copy : copies) text += "\n" + indent + copy;
  }
  return {Edit{Span{insert_at, insert_at}, text}};
}

EditSet LoopInversionEdits(const std::string& source, const Site& site) {
  std::string guard_indent = LineIndent(source, site.anchor.begin);
  std::string loop_indent = LineIndent(source, site.Get("loop").begin);
  size_t width = 0;
  if (loop_indent.size() > guard_indent.size() &&
      loop_indent.compare(0, guard_indent.size(), guard_indent) == 0) {
    width = loop_indent.size() - guard_indent.size();
  }
  std::string text = "while (" + std::string(Slice(source, site.Get("guard"))) + ") " +
                     Dedent(Slice(source, site.Get("body")), width);
  return {Edit{site.anchor, text}};
}

EditSet CseEdits(const std::string& source, const Site& site) {
  std::string expr(Slice(source, site.Get("expr")));
  std::string copy;
  if (site.attributes.at("cast") == "true") {
    copy = site.attributes.at("type") + "(" + expr + ")";
  } else {
    copy = "(" + expr + ")";
  }
  EditSet edits;
  for (Span use : site.GetAll("use")) edits.push_back(Edit{use, copy});
  return edits;
}

EditSet LiteralEdits(const std::string& source, const Site& site, uint64_t seed) {
  std::string literal(Slice(source, site.Get("literal")));
  std::string text = seed % 2 == 0 ? "(" + literal + " + 0)" : "(" + literal + " * 1)";
  return {Edit{site.Get("literal"), text}};
}

EditSet KeccakEdits(const std::string& source, const Site& site) {
  const int n = NextIndex(source, "__idol_kh1_");
  const std::string h1 = "__idol_kh1_" + std::to_string(n);
  const std::string h2 = "__idol_kh2_" + std::to_string(n);
  const std::string argument(Slice(source, site.Get("argument")));
  const Span statement = site.Get("statement");
  std::string separator = " ";
  if (FirstOnLine(source, statement.begin)) {
    separator = "\n" + LineIndent(source, statement.begin);
  }
  std::string hoisted = "bytes32 " + h1 + " = keccak256(" + argument + ");" + separator +
                        "bytes32 " + h2 + " = keccak256(" + argument + ");" + separator;
  return {Edit{Span{statement.begin, statement.begin}, hoisted},
          Edit{site.Get("call"), "(" + h1 + " == " + h2 + " ? " + h1 + " : " + h2 + ")"}};
}

EditSet OutliningEdits(const std::string& source, const Site& site) {
  const std::string name = "__idol_outlined_" +
                           std::to_string(NextIndex(source, "__idol_outlined_"));
  const Span function = site.Get("function");
  const std::string indent = LineIndent(source, function.begin);
  std::string definition = "\n\n" + indent + "function " + name + "(" +
                           site.attributes.at("params") + ") private pure returns (" +
                           site.attributes.at("type") + ") {\n" + indent + "    return " +
                           std::string(Slice(source, site.Get("expr"))) + ";\n" + indent +
                           "}";
  return {Edit{site.Get("expr"), name + "(" + site.attributes.at("args") + ")"},
          Edit{Span{function.end, function.end}, definition}};
}

EditSet ComputeEdits(const std::string& source, const Site& site, uint64_t seed) {
  switch (site.kind) {
    case TransformKind::kReverseLicm:
      return LicmEdits(source, site);
    case TransformKind::kReverseLoopInversion:
      return LoopInversionEdits(source, site);
    case TransformKind::kReverseCse:
      return CseEdits(source, site);
    case TransformKind::kLiteralObfuscation:
      return LiteralEdits(source, site, seed);
    case TransformKind::kKeccakDuplication:
      return KeccakEdits(source, site);
    case TransformKind::kFunctionOutlining:
      return OutliningEdits(source, site);
  }
  throw HarnessError("unknown transform kind");
}

nlohmann::ordered_json SpanJson(Span span) {
  return nlohmann::ordered_json::array({span.begin, span.end});
}

Span SpanFromJson(const nlohmann::json& json) {
  return Span{json.at(0).get<uint32_t>(), json.at(1).get<uint32_t>()};
}

}  // namespace

std::string_view KindName(TransformKind kind) {
  return kKindNames[static_cast<size_t>(kind)];
}

std::optional<TransformKind> KindFromName(std::string_view name) {
  for (TransformKind kind : kAllKinds) {
    if (KindName(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<TransformKind> ParseKindList(std::string_view list) {
  std::vector<TransformKind> kinds;
  if (list.empty() || list == "all") {
    return std::vector<TransformKind>(std::begin(kAllKinds), std::end(kAllKinds));
  }
  size_t pos = 0;
  while (pos <= list.size()) {
    size_t comma = list.find(',', pos);
    std::string_view item = list.substr(pos, comma == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    auto kind = KindFromName(item);
    if (!kind) throw ConfigError("unknown transform kind '" + std::string(item) + "'");
    if (std::find(kinds.begin(), kinds.end(), *kind) == kinds.end()) kinds.push_back(*kind);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  std::sort(kinds.begin(), kinds.end());
  return kinds;
}

Span Site::Get(std::string_view name) const {
  for (const Binding& binding : bindings) {
    if (binding.name == name) return binding.span;
  }
  throw HarnessError("site has no binding '" + std::string(name) + "'");
}

std::vector<Span> Site::GetAll(std::string_view prefix) const {
  std::vector<Span> spans;
  for (const Binding& binding : bindings) {
    if (binding.name.size() > prefix.size() &&
        binding.name.compare(0, prefix.size(), prefix) == 0 &&
        std::isdigit(static_cast<unsigned char>(binding.name[prefix.size()]))) {
      spans.push_back(binding.span);
    }
  }
  return spans;
}

TransformApplication Apply(const std::string& source, const Site& site, uint64_t seed) {
  const std::string source_id = Sha256Hex(source);
  if (source_id != site.source_id) {
    throw StaleSiteError(std::string(KindName(site.kind)) + " site at offset " +
                         std::to_string(site.anchor.begin) +
                         " was discovered on different source text");
  }
  TransformApplication application;
  application.kind = site.kind;
  application.site = site;
  application.edits = ComputeEdits(source, site, seed);
  application.parent_id = source_id;
  application.seed = seed;
  std::string mutant = syntax::ApplyEdits(source, application.edits);
  syntax::ParseResult reparsed = syntax::Parse(mutant);
  if (auto* failure = std::get_if<syntax::ParseFailure>(&reparsed)) {
    throw HarnessError(std::string(KindName(site.kind)) +
                       " produced unparsable source: " + failure->Describe());
  }
  application.mutant_id = Sha256Hex(mutant);
  return application;
}

std::vector<MutantUnit> MutateUnit(const corpus::SourceUnit& unit, uint64_t seed,
                                   int budget, const std::vector<TransformKind>& kinds) {
  std::vector<MutantUnit> mutants;
  if (budget <= 0 || kinds.empty()) return mutants;
  Prng prng(DeriveSeed(seed, "mutate/" + unit.id));
  std::set<std::string> seen{unit.id};
  // Duplicate chains are redrawn a bounded number of times.
  for (int attempt = 0;
       static_cast<int>(mutants.size()) < budget && attempt < 4 * budget; ++attempt) {
    const int steps = 1 + static_cast<int>(prng.Uniform(3));
    std::string current = unit.source;
    std::vector<TransformApplication> applications;
    for (int step = 0; step < steps; ++step) {
      syntax::ParseResult parsed = syntax::Parse(current);
      if (!std::holds_alternative<syntax::Ast>(parsed)) break;
      std::vector<Site> sites = DiscoverAllSites(std::get<syntax::Ast>(parsed), kinds);
      if (sites.empty()) break;
      const Site& site = sites[prng.Uniform(sites.size())];
      TransformApplication application = Apply(current, site, prng.Next());
      current = syntax::ApplyEdits(current, application.edits);
      applications.push_back(std::move(application));
    }
    if (applications.empty()) break;
    const std::string id = Sha256Hex(current);
    if (!seen.insert(id).second) continue;
    MutantUnit mutant;
    mutant.unit = corpus::MakeSourceUnit(unit.path, std::move(current));
    mutant.origin_id = unit.id;
    mutant.applications = std::move(applications);
    mutants.push_back(std::move(mutant));
  }
  return mutants;
}

std::string Replay(const std::string& origin_source, const MutantUnit& mutant) {
  std::string current = origin_source;
  for (const TransformApplication& application : mutant.applications) {
    current = syntax::ApplyEdits(current, application.edits);
  }
  return current;
}

nlohmann::ordered_json SiteToJson(const Site& site) {
  nlohmann::ordered_json json;
  json["kind"] = KindName(site.kind);
  json["anchor"] = SpanJson(site.anchor);
  json["bindings"] = nlohmann::ordered_json::array();
  for (const Binding& binding : site.bindings) {
    json["bindings"].push_back({{"name", binding.name}, {"span", SpanJson(binding.span)}});
  }
  json["attributes"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : site.attributes) json["attributes"][key] = value;
  json["source_id"] = site.source_id;
  return json;
}

nlohmann::ordered_json ApplicationToJson(const TransformApplication& application) {
  nlohmann::ordered_json json;
  json["kind"] = KindName(application.kind);
  json["parent_id"] = application.parent_id;
  json["mutant_id"] = application.mutant_id;
  json["seed"] = application.seed;
  json["site"] = SiteToJson(application.site);
  json["edits"] = nlohmann::ordered_json::array();
  for (const Edit& edit : application.edits) {
    json["edits"].push_back(
        {{"span", SpanJson(edit.span)}, {"replacement", edit.replacement}});
  }
  return json;
}

nlohmann::ordered_json ProvenanceJson(const MutantUnit& mutant) {
  nlohmann::ordered_json json;
  json["origin_id"] = mutant.origin_id;
  json["mutant_id"] = mutant.unit.id;
  json["path"] = mutant.unit.path;
  json["applications"] = nlohmann::ordered_json::array();
  for (const TransformApplication& application : mutant.applications) {
    json["applications"].push_back(ApplicationToJson(application));
  }
  return json;
}

MutantUnit MutantFromJson(const nlohmann::json& json, const corpus::SourceUnit& origin) {
  MutantUnit mutant;
  mutant.origin_id = json.at("origin_id").get<std::string>();
  if (mutant.origin_id != origin.id) {
    throw HarnessError("provenance origin " + mutant.origin_id +
                       " does not match source " + origin.id);
  }
  for (const auto& item : json.at("applications")) {
    TransformApplication application;
    auto kind = KindFromName(item.at("kind").get<std::string>());
    if (!kind) throw HarnessError("unknown transform kind in provenance");
    application.kind = *kind;
    application.parent_id = item.at("parent_id").get<std::string>();
    application.mutant_id = item.at("mutant_id").get<std::string>();
    application.seed = item.at("seed").get<uint64_t>();
    const auto& site = item.at("site");
    application.site.kind = *kind;
    application.site.anchor = SpanFromJson(site.at("anchor"));
    for (const auto& binding : site.at("bindings")) {
      application.site.bindings.push_back(
          {binding.at("name").get<std::string>(), SpanFromJson(binding.at("span"))});
    }
    for (const auto& [key, value] : site.at("attributes").items()) {
      application.site.attributes[key] = value.get<std::string>();
    }
    application.site.source_id = site.at("source_id").get<std::string>();
    for (const auto& edit : item.at("edits")) {
      application.edits.push_back(
          {SpanFromJson(edit.at("span")), edit.at("replacement").get<std::string>()});
    }
    mutant.applications.push_back(std::move(application));
  }
  std::string source = Replay(origin.source, mutant);
  mutant.unit = corpus::MakeSourceUnit(origin.path, std::move(source));
  if (json.contains("mutant_id") && json.at("mutant_id").get<std::string>() != mutant.unit.id) {
    throw HarnessError("replayed mutant does not match recorded id");
  }
  return mutant;
}

}  // namespace idol::mutate
