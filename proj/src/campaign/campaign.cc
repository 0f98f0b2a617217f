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

#include "idol/campaign/campaign.h"

#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "idol/common/error.h"
#include "idol/common/fs.h"
#include "idol/common/hash.h"
#include "idol/common/prng.h"
#include "idol/corpus/corpus.h"
#include "idol/execute/execute.h"
#include "idol/syntax/parser.h"
#include "pipeline.h"

namespace idol::campaign {

namespace fs = std::filesystem;
using compile::CompileConfig;
using compile::CompileOutcome;
using compile::CompileStatus;
using nlohmann::json;
using oracle::Classification;

namespace {

std::string ViaIrName(compile::ViaIrMode mode) {
  switch (mode) {
    case compile::ViaIrMode::kOff: return "off";
    case compile::ViaIrMode::kOnly: return "only";
    case compile::ViaIrMode::kBoth: return "both";
  }
  return "off";
}

compile::ViaIrMode ViaIrFromName(const std::string& name) {
  if (name == "off") return compile::ViaIrMode::kOff;
  if (name == "only") return compile::ViaIrMode::kOnly;
  if (name == "both") return compile::ViaIrMode::kBoth;
  throw ConfigError("via-ir must be off, only or both: " + name);
}

}  // namespace

json CampaignConfig::ToJson() const {
  json kind_names = json::array();
  for (mutate::TransformKind kind : kinds) kind_names.push_back(mutate::KindName(kind));
  return json{{"corpus_root", corpus_root},
              {"solc_paths", solc_paths},
              {"seed", seed},
              {"units", units},
              {"budget", budget},
              {"kinds", kind_names},
              {"via_ir", ViaIrName(via_ir)},
              {"runs_list", runs_list},
              {"evm_version", evm_version},
              {"jobs", jobs},
              {"out_dir", out_dir},
              {"rounds", rounds},
              {"reduce", reduce},
              {"dol_baseline", dol_baseline},
              {"compile_timeout_s", compile_timeout_s},
              {"prng", Prng::kAlgorithm}};
}

CampaignConfig CampaignConfig::FromJson(const json& j) {
  CampaignConfig config;
  config.corpus_root = j.at("corpus_root").get<std::string>();
  config.solc_paths = j.at("solc_paths").get<std::vector<std::string>>();
  config.seed = j.at("seed").get<uint64_t>();
  config.units = j.at("units").get<size_t>();
  config.budget = j.at("budget").get<int>();
  config.kinds.clear();
  for (const json& name : j.at("kinds")) {
    auto kind = mutate::KindFromName(name.get<std::string>());
    if (!kind) throw ConfigError("unknown transform kind: " + name.get<std::string>());
    config.kinds.push_back(*kind);
  }
  config.via_ir = ViaIrFromName(j.at("via_ir").get<std::string>());
  config.runs_list = j.at("runs_list").get<std::vector<int>>();
  config.evm_version = j.value("evm_version", "");
  config.jobs = j.value("jobs", 1);
  config.out_dir = j.value("out_dir", "");
  config.rounds = j.at("rounds").get<int>();
  config.reduce = j.value("reduce", false);
  config.dol_baseline = j.value("dol_baseline", false);
  config.compile_timeout_s = j.value("compile_timeout_s", 60);
  return config;
}

void CampaignConfig::Validate() const {
  if (corpus_root.empty()) throw ConfigError("no corpus root given");
  if (solc_paths.empty()) throw ConfigError("no solc path given");
  if (out_dir.empty()) throw ConfigError("no output directory given");
  if (budget < 0) throw ConfigError("budget must be non-negative");
  if (rounds < 1) throw ConfigError("rounds must be at least 1");
  if (jobs < 1) throw ConfigError("jobs must be at least 1");
  if (compile_timeout_s < 1) throw ConfigError("compile timeout must be positive");
  for (int runs : runs_list) {
    if (runs <= 0) throw ConfigError("optimizer runs must be positive");
  }
}

json BugReport::ToJson() const {
  json configs_json = json::array();
  for (const CompileConfig& config : configs) configs_json.push_back(config.ToJson());
  return json{
      {"signature_id", signature.Id()},
      {"classification", oracle::ClassificationName(classification)},
      {"signature", signature.ToJson()},
      {"parent", {{"id", parent.id}, {"path", parent.path}, {"source", parent.source}}},
      {"mutant", {{"source", mutant_source}, {"provenance", provenance}}},
      {"configs", configs_json},
      {"compile_results", compile_results},
      {"traces", traces},
      {"verdict", verdict},
      {"detail", detail},
      {"plan", {{"seed", plan_seed}, {"rounds", rounds}}},
      {"occurrences", occurrences},
      {"minimized_source", minimized_source ? json(*minimized_source) : json(nullptr)},
      {"reduction",
       {{"status", reduction.status},
        {"message", reduction.message},
        {"original_bytes", reduction.original_bytes},
        {"minimized_bytes", reduction.minimized_bytes},
        {"predicate_runs", reduction.predicate_runs}}},
  };
}

BugReport BugReport::FromJson(const json& j) {
  BugReport report;
  report.classification = oracle::ClassificationFromName(j.at("classification").get<std::string>());
  report.signature = oracle::BugSignature::FromJson(j.at("signature"));
  const json& parent = j.at("parent");
  report.parent = corpus::MakeSourceUnit(parent.at("path").get<std::string>(),
                                         parent.at("source").get<std::string>());
  report.mutant_source = j.at("mutant").at("source").get<std::string>();
  report.provenance = j.at("mutant").at("provenance");
  for (const json& config : j.at("configs")) report.configs.push_back(CompileConfig::FromJson(config));
  report.compile_results = j.value("compile_results", json::object());
  report.traces = j.value("traces", json::object());
  report.verdict = j.value("verdict", json::object());
  report.detail = j.value("detail", "");
  report.plan_seed = j.at("plan").at("seed").get<uint64_t>();
  report.rounds = j.at("plan").at("rounds").get<int>();
  report.occurrences = j.value("occurrences", 1);
  if (j.contains("minimized_source") && j.at("minimized_source").is_string()) {
    report.minimized_source = j.at("minimized_source").get<std::string>();
  }
  if (j.contains("reduction")) {
    const json& r = j.at("reduction");
    report.reduction.status = r.value("status", "not-run");
    report.reduction.message = r.value("message", "");
    report.reduction.original_bytes = r.value("original_bytes", size_t{0});
    report.reduction.minimized_bytes = r.value("minimized_bytes", size_t{0});
    report.reduction.predicate_runs = r.value("predicate_runs", 0);
  }
  return report;
}

json StripTiming(json report) {
  if (report.is_object()) report.erase("timing");
  return report;
}

namespace {

struct SolcContext {
  std::string path;
  std::string version;
  std::vector<CompileConfig> matrix;
  CompileConfig gate;
  size_t gate_index = 0;  // position of the gate config in the matrix, or matrix.size()
};

struct Shared {
  const CampaignConfig& config;
  bool idol;
  fs::path cache_dir;
  fs::path state_dir;
  double audit_rate;
};

BugReport BaseReport(const corpus::SourceUnit& unit, const mutate::MutantUnit& mutant,
                     const SolcContext& solc, uint64_t plan_seed, int rounds) {
  BugReport report;
  report.parent = unit;
  report.mutant_source = mutant.unit.source;
  report.provenance = json::parse(mutate::ProvenanceJson(mutant).dump());
  report.configs = solc.matrix;
  report.plan_seed = plan_seed;
  report.rounds = rounds;
  return report;
}

json KindNames(const mutate::MutantUnit& mutant) {
  json names = json::array();
  for (const auto& application : mutant.applications) {
    names.push_back(mutate::KindName(application.kind));
  }
  return names;
}

json ProcessItem(const Shared& shared, const SolcContext& solc, const corpus::SourceUnit& unit,
                 const mutate::MutantUnit& mutant, int mutant_index,
                 const execute::CallPlan& plan, const execute::ExecutionTrace& parent_trace,
                 const json& parent_abi, uint64_t plan_seed, compile::Compiler& compiler,
                 json& reports) {
  const std::string& source = mutant.unit.source;
  json item{{"mutant_index", mutant_index},
            {"mutant_id", mutant.unit.id},
            {"kinds", KindNames(mutant)}};
  int executions = 0;

  CompileOutcome gate = compiler.Compile(source, solc.gate);
  bool equivalent = false;
  std::string detail;
  std::optional<execute::ExecutionTrace> gate_trace;
  if (gate.status != CompileStatus::kOk) {
    detail = "mutant does not compile at " + solc.gate.Label() + ": " + gate.message;
  } else if (gate.artifact->abi != parent_abi) {
    detail = "mutant ABI differs from parent ABI";
  } else {
    gate_trace = execute::Run(*gate.artifact, plan);
    ++executions;
    oracle::Equivalence equivalence = oracle::CheckMutantEquivalence(parent_trace, *gate_trace);
    equivalent = equivalence.equivalent;
    detail = equivalence.detail;
  }
  item["equivalent"] = equivalent;

  std::vector<std::optional<CompileOutcome>> known(solc.matrix.size());
  if (solc.gate_index < solc.matrix.size()) known[solc.gate_index] = gate;

  if (!equivalent) {
    std::vector<CompileOutcome> outcomes;
    json compiles = json::object();
    for (size_t i = 0; i < solc.matrix.size(); ++i) {
      outcomes.push_back(known[i] ? *known[i] : compiler.Compile(source, solc.matrix[i]));
      compiles[solc.matrix[i].Label()] = compile::CompileStatusName(outcomes.back().status);
    }
    item["compiles"] = compiles;
    item["executions"] = executions;
    item["verdict"] = "skipped";
    BugReport report = BaseReport(unit, mutant, solc, plan_seed, shared.config.rounds);
    report.classification = Classification::kMutantNonEquivalence;
    report.signature.solc_version = solc.version;
    report.signature.config_pair = "parent@" + solc.gate.Label() + "|mutant@" + solc.gate.Label();
    report.signature.field = "equivalence";
    report.signature.selector = mutant.unit.id.substr(0, 16);
    report.signature.diff_hash = Sha256Hex(detail).substr(0, 16);
    report.compile_results = internal::CompileResultsJson(solc.matrix, outcomes);
    report.traces = json{{"parent", parent_trace.ToJson()},
                         {"mutant", gate_trace ? gate_trace->ToJson() : json(nullptr)}};
    report.detail = detail;
    reports.push_back(report.ToJson());
    return item;
  }

  internal::Evaluation evaluation = internal::EvaluateMatrix(
      source, solc.matrix, &plan, plan_seed, shared.config.rounds, compiler, &known);
  executions += evaluation.executions;
  json compiles = json::object();
  std::vector<std::pair<std::string, CompileStatus>> statuses;
  for (size_t i = 0; i < solc.matrix.size(); ++i) {
    compiles[solc.matrix[i].Label()] = compile::CompileStatusName(evaluation.outcomes[i].status);
    statuses.emplace_back(solc.matrix[i].Label(), evaluation.outcomes[i].status);
  }
  item["compiles"] = compiles;
  item["executions"] = executions;
  item["verdict"] = oracle::VerdictKindName(evaluation.verdict.kind);

  auto fill = [&](BugReport& report) {
    report.compile_results = internal::CompileResultsJson(solc.matrix, evaluation.outcomes);
    report.traces = internal::TracesJson(solc.matrix, evaluation.traces);
    report.verdict = evaluation.verdict.ToJson();
  };
  if (evaluation.CompileAsymmetry()) {
    BugReport report = BaseReport(unit, mutant, solc, plan_seed, shared.config.rounds);
    report.classification = Classification::kCompileDivergence;
    report.signature = oracle::CompileDivergenceSignature(solc.version, statuses);
    fill(report);
    report.detail = "compiles under some configs but not others";
    reports.push_back(report.ToJson());
  }
  if (evaluation.verdict.kind == oracle::VerdictKind::kDivergence) {
    BugReport report = BaseReport(unit, mutant, solc, plan_seed, shared.config.rounds);
    report.classification = Classification::kBehavioral;
    report.signature = oracle::Signature(evaluation.verdict, solc.version);
    fill(report);
    const oracle::Divergence& d = *evaluation.verdict.divergence;
    report.detail = d.baseline_config + " vs " + d.other_config + " differ in " + d.field +
                    " at " + (d.call_index < 0 ? std::string("deployment")
                                                : "call " + std::to_string(d.call_index));
    reports.push_back(report.ToJson());
  }
  return item;
}

json ProcessUnit(const Shared& shared, const SolcContext& solc, size_t index,
                 const corpus::SourceUnit& unit, compile::Compiler& compiler) {
  const CampaignConfig& config = shared.config;
  json result{{"index", index},
              {"path", unit.path},
              {"id", unit.id},
              {"solc_version", solc.version},
              {"status", "ok"},
              {"message", ""},
              {"sites", json::object()},
              {"mutants", 0},
              {"items", json::array()},
              {"reports", json::array()}};
  try {
    CompileOutcome parent = compiler.Compile(unit.source, solc.gate);
    if (parent.status != CompileStatus::kOk) {
      result["status"] = "parent-compile-failed";
      result["message"] = parent.message;
      return result;
    }
    const uint64_t plan_seed = DeriveSeed(config.seed, "plan/" + unit.id);
    execute::PlanOptions options;
    options.rounds = config.rounds;
    execute::CallPlan plan = execute::PlanCalls(parent.artifact->abi, plan_seed, options);
    result["plan_hash"] = plan.Hash();
    execute::ExecutionTrace parent_trace = execute::Run(*parent.artifact, plan);

    std::vector<mutate::MutantUnit> items;
    mutate::MutantUnit identity;
    identity.unit = unit;
    identity.origin_id = unit.id;
    items.push_back(identity);
    if (shared.idol) {
      syntax::ParseResult parsed = syntax::Parse(unit.source);
      if (auto* ast = std::get_if<syntax::Ast>(&parsed)) {
        for (mutate::TransformKind kind : config.kinds) {
          result["sites"][std::string(mutate::KindName(kind))] =
              mutate::DiscoverSites(*ast, kind).size();
        }
      }
      std::vector<mutate::MutantUnit> mutants = mutate::MutateUnit(
          unit, DeriveSeed(config.seed, "mutate"), config.budget, config.kinds);
      result["mutants"] = mutants.size();
      for (auto& mutant : mutants) items.push_back(std::move(mutant));
    }
    for (size_t i = 0; i < items.size(); ++i) {
      result["items"].push_back(ProcessItem(shared, solc, unit, items[i], static_cast<int>(i),
                                            plan, parent_trace, parent.artifact->abi, plan_seed,
                                            compiler, result["reports"]));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& error) {
    result["status"] = "error";
    result["message"] = error.what();
    result["items"] = json::array();
    result["reports"] = json::array();
  }
  return result;
}

std::string StateKey(const CampaignConfig& config, bool idol, const SolcContext& solc) {
  json key = config.ToJson();
  for (const char* field : {"jobs", "out_dir", "reduce", "dol_baseline"}) key.erase(field);
  key["mode"] = idol ? "idol" : "dol";
  key["solc_version"] = solc.version;
  key["solc_path"] = solc.path;
  return Sha256Hex(key.dump()).substr(0, 16);
}

struct CacheTotals {
  std::mutex mutex;
  compile::CacheStats stats;
  void Add(const compile::CacheStats& more) {
    std::lock_guard<std::mutex> lock(mutex);
    stats.hits += more.hits;
    stats.misses += more.misses;
    stats.audits += more.audits;
  }
};

CampaignReport Run(const CampaignConfig& config, const RunControl& control, bool idol) {
  const auto started = std::chrono::steady_clock::now();
  config.Validate();
  const fs::path out(config.out_dir);
  fs::create_directories(out);
  Shared shared{config, idol, out / "cache", out / "state", control.cache_audit_rate};
  const auto timeout = std::chrono::seconds(config.compile_timeout_s);
  CacheTotals cache_totals;

  compile::Compiler main_compiler(shared.cache_dir, DeriveSeed(config.seed, "audit/main"),
                                  timeout, shared.audit_rate);
  std::vector<SolcContext> solcs;
  for (const std::string& path : config.solc_paths) {
    SolcContext solc;
    solc.path = path;
    solc.version = main_compiler.Version(path);
    compile::MatrixOptions options;
    options.solc_path = path;
    options.evm_version = config.evm_version;
    options.via_ir = config.via_ir;
    options.runs_list = config.runs_list;
    solc.matrix = compile::ConfigMatrix(options);
    solc.gate = internal::GateConfig(path, config.evm_version);
    solc.gate_index = solc.matrix.size();
    for (size_t i = 0; i < solc.matrix.size(); ++i) {
      if (solc.matrix[i] == solc.gate) solc.gate_index = i;
    }
    solcs.push_back(std::move(solc));
  }

  corpus::CorpusIndex index = corpus::Ingest(config.corpus_root, solcs[0].gate, main_compiler);
  WriteFileAtomic(out / "corpus.index.json", index.ToJson().dump(2) + "\n");
  const size_t valid = index.Count(corpus::EntryStatus::kValid);
  const size_t requested = config.units == 0 ? valid : config.units;
  std::vector<corpus::SourceUnit> units = corpus::Sample(index, config.seed, requested);

  // Results per (solc, unit) in canonical order.
  std::vector<json> results(solcs.size() * units.size());
  std::atomic<size_t> next{0};
  std::atomic<size_t> fresh{0};
  std::atomic<bool> interrupted{false};
  std::mutex error_mutex;
  std::exception_ptr fatal;

  auto worker = [&](int worker_index) {
    try {
      compile::Compiler compiler(shared.cache_dir,
                                 DeriveSeed(config.seed, "audit/" + std::to_string(worker_index)),
                                 timeout, shared.audit_rate);
      while (true) {
        size_t slot = next.fetch_add(1);
        if (slot >= results.size()) break;
        const SolcContext& solc = solcs[slot / units.size()];
        const size_t unit_index = slot % units.size();
        const corpus::SourceUnit& unit = units[unit_index];
        fs::path state = shared.state_dir / StateKey(config, idol, solc) /
                         (std::to_string(unit_index) + "-" + unit.id.substr(0, 16) + ".json");
        if (std::optional<std::string> saved = ReadFile(state)) {
          json parsed = json::parse(*saved, nullptr, false);
          if (!parsed.is_discarded() && parsed.value("id", "") == unit.id) {
            results[slot] = std::move(parsed);
            continue;
          }
        }
        if (control.stop_after_units && fresh.fetch_add(1) >= *control.stop_after_units) {
          interrupted = true;
          break;
        }
        results[slot] = ProcessUnit(shared, solc, unit_index, unit, compiler);
        fs::create_directories(state.parent_path());
        WriteFileAtomic(state, results[slot].dump());
      }
      cache_totals.Add(compiler.stats());
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!fatal) fatal = std::current_exception();
      next = results.size();
    }
  };
  std::vector<std::thread> threads;
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(results.size())));
  for (int i = 1; i < jobs; ++i) threads.emplace_back(worker, i);
  worker(0);
  for (std::thread& thread : threads) thread.join();
  if (fatal) std::rethrow_exception(fatal);

  CampaignReport report;
  report.interrupted = interrupted;

  // Aggregate in canonical order.
  json counts{{"units_sampled", units.size()},
              {"units_ok", 0},
              {"units_parent_compile_failed", 0},
              {"units_error", 0},
              {"units_without_sites", 0},
              {"mutants_generated", 0},
              {"work_items", 0},
              {"compiles_ok", 0},
              {"compile_failures", 0},
              {"compile_timeouts", 0},
              {"executions", 0},
              {"verdicts", {{"agree", 0}, {"divergence", 0}, {"inconclusive", 0}, {"skipped", 0}}},
              {"equivalence", {{"passed", 0}, {"failed", 0}}}};
  json per_kind = json::object();
  for (mutate::TransformKind kind : config.kinds) {
    per_kind[std::string(mutate::KindName(kind))] = {
        {"sites_found", 0}, {"applied", 0}, {"mutants", 0}, {"equivalence_passed", 0}};
  }
  auto bump = [](json& value, int64_t by = 1) { value = value.get<int64_t>() + by; };
  std::map<std::string, size_t> by_signature;
  json unit_summaries = json::array();
  for (const json& result : results) {
    if (result.is_null()) continue;
    const std::string status = result.at("status").get<std::string>();
    if (status == "ok") bump(counts["units_ok"]);
    if (status == "parent-compile-failed") bump(counts["units_parent_compile_failed"]);
    if (status == "error") bump(counts["units_error"]);
    bump(counts["mutants_generated"], result.at("mutants").get<int64_t>());
    if (idol && status == "ok" && result.at("mutants").get<int64_t>() == 0) {
      bump(counts["units_without_sites"]);
    }
    for (auto& [kind, found] : result.at("sites").items()) {
      if (per_kind.contains(kind)) bump(per_kind[kind]["sites_found"], found.get<int64_t>());
    }
    json verdicts = json::array();
    for (const json& item : result.at("items")) {
      bump(counts["work_items"]);
      bump(counts["executions"], item.at("executions").get<int64_t>());
      for (auto& [label, compiled] : item.at("compiles").items()) {
        const std::string text = compiled.get<std::string>();
        bump(counts[text == "ok" ? "compiles_ok" : text == "timeout" ? "compile_timeouts"
                                                                     : "compile_failures"]);
      }
      bump(counts["verdicts"][item.at("verdict").get<std::string>()]);
      const bool equivalent = item.at("equivalent").get<bool>();
      bump(counts["equivalence"][equivalent ? "passed" : "failed"]);
      std::set<std::string> seen;
      for (const json& name : item.at("kinds")) {
        const std::string kind = name.get<std::string>();
        if (!per_kind.contains(kind)) continue;
        bump(per_kind[kind]["applied"]);
        if (seen.insert(kind).second) {
          bump(per_kind[kind]["mutants"]);
          if (equivalent) bump(per_kind[kind]["equivalence_passed"]);
        }
      }
      verdicts.push_back(item.at("verdict"));
    }
    for (const json& entry : result.at("reports")) {
      BugReport bug = BugReport::FromJson(entry);
      const std::string id = bug.signature.Id();
      auto found = by_signature.find(id);
      if (found != by_signature.end()) {
        report.findings[found->second].occurrences += 1;
      } else {
        by_signature[id] = report.findings.size();
        report.findings.push_back(std::move(bug));
      }
    }
    unit_summaries.push_back({{"path", result.at("path")},
                              {"id", result.at("id")},
                              {"solc_version", result.at("solc_version")},
                              {"status", status},
                              {"message", result.at("message")},
                              {"mutants", result.at("mutants")},
                              {"verdicts", verdicts}});
  }
  for (auto& [kind, stats] : per_kind.items()) {
    int64_t mutants = stats["mutants"].get<int64_t>();
    stats["equivalence_pass_rate"] =
        mutants == 0 ? 1.0
                     : static_cast<double>(stats["equivalence_passed"].get<int64_t>()) /
                           static_cast<double>(mutants);
  }

  if (config.reduce && !report.interrupted) {
    for (BugReport& bug : report.findings) {
      if (bug.classification == Classification::kBehavioral) bug = Reduce(bug, main_compiler);
    }
  }

  int behavioral = 0, compile_divergence = 0, nonequivalent = 0;
  json findings = json::array();
  fs::create_directories(out / "findings");
  for (const BugReport& bug : report.findings) {
    switch (bug.classification) {
      case Classification::kBehavioral: ++behavioral; break;
      case Classification::kCompileDivergence: ++compile_divergence; break;
      case Classification::kMutantNonEquivalence: ++nonequivalent; break;
    }
    const std::string id = bug.signature.Id();
    WriteFileAtomic(out / "findings" / (id + ".json"), bug.ToJson().dump(2) + "\n");
    if (bug.minimized_source) {
      WriteFileAtomic(out / "findings" / (id + ".min.sol"), *bug.minimized_source);
    }
    findings.push_back({{"signature_id", id},
                        {"classification", oracle::ClassificationName(bug.classification)},
                        {"signature", bug.signature.ToJson()},
                        {"occurrences", bug.occurrences},
                        {"parent_path", bug.parent.path},
                        {"detail", bug.detail},
                        {"reduction", bug.reduction.status},
                        {"file", "findings/" + id + ".json"}});
  }
  report.exit_code = nonequivalent > 0        ? kExitNonEquivalence
                     : behavioral > 0         ? kExitBehavioral
                     : compile_divergence > 0 ? kExitCompileDivergence
                                              : kExitClean;

  json versions = json::object();
  json matrix = json::array();
  for (const SolcContext& solc : solcs) versions[solc.path] = solc.version;
  for (const CompileConfig& config_entry : solcs[0].matrix) {
    matrix.push_back({{"label", config_entry.Label()},
                      {"fingerprint", config_entry.Fingerprint()},
                      {"config", config_entry.ToJson()}});
  }
  cache_totals.Add(main_compiler.stats());
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);

  report.json = json{
      {"tool", "idol"},
      {"mode", idol ? "idol" : "dol"},
      {"config", config.ToJson()},
      {"solc_versions", versions},
      {"matrix", matrix},
      {"corpus",
       {{"files", index.entries.size()},
        {"valid", valid},
        {"unsupported", index.Count(corpus::EntryStatus::kUnsupported)},
        {"compile_failed", index.Count(corpus::EntryStatus::kCompileFailed)}}},
      {"sample", {{"requested", requested}, {"drawn", units.size()}, {"wrapped", requested > valid}}},
      {"counts", counts},
      {"per_kind", idol ? per_kind : json::object()},
      {"findings", findings},
      {"summary",
       {{"behavioral", behavioral},
        {"compile_divergence", compile_divergence},
        {"mutant_nonequivalence", nonequivalent}}},
      {"units", unit_summaries},
      {"interrupted", report.interrupted},
      {"exit_code", report.exit_code},
      // Run-dependent values; excluded from determinism comparisons.
      {"timing",
       {{"wall_clock_ms", elapsed.count()},
        {"cache_hits", cache_totals.stats.hits},
        {"cache_misses", cache_totals.stats.misses},
        {"cache_audits", cache_totals.stats.audits}}},
  };
  if (!report.interrupted) {
    WriteFileAtomic(out / "campaign.json", report.json.dump(2) + "\n");
  }
  return report;
}

}  // namespace

CampaignReport RunCampaign(const CampaignConfig& config, const RunControl& control) {
  return Run(config, control, !config.dol_baseline);
}

CampaignReport RunDolBaseline(const CampaignConfig& config, const RunControl& control) {
  return Run(config, control, false);
}

}  // namespace idol::campaign
