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

// Command-line entry point: run, mutate, check-equiv, reduce, replay.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "idol/campaign/campaign.h"
#include "idol/common/error.h"
#include "idol/common/fs.h"
#include "idol/corpus/source_unit.h"
#include "idol/mutate/transform.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitHarness = 3;
constexpr int kExitReplayMismatch = 1;

std::string ReadOrThrow(const std::string& path) {
  std::optional<std::string> text = idol::ReadFile(path);
  if (!text) throw idol::ConfigError("cannot read " + path);
  return *text;
}

idol::campaign::BugReport LoadReport(const std::string& path) {
  json parsed = json::parse(ReadOrThrow(path), nullptr, false);
  if (parsed.is_discarded()) throw idol::ConfigError(path + " is not valid JSON");
  return idol::campaign::BugReport::FromJson(parsed);
}

std::string DefaultCache() { return (fs::temp_directory_path() / "idol-cache").string(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IDOL: differential testing of solc optimization levels on de-optimized variants"};
  app.require_subcommand(1);

  // run. Required values are enforced by CampaignConfig::Validate so that
  // they may come from the config file.
  idol::campaign::CampaignConfig config;
  std::string kinds_text = "all";
  std::string via_ir = "off";
  CLI::App* run = app.add_subcommand("run", "Run a campaign over a corpus");
  // Config keys live in a [run] section; run falls through to the top-level
  // --config option so "idol run --config FILE" works.
  app.set_config("--config", "", "TOML file with a [run] section mirroring the flags");
  run->fallthrough();
  run->add_option("--corpus", config.corpus_root, "Corpus directory");
  run->add_option("--solc", config.solc_paths, "solc binary or solc-js install dir (repeatable)");
  run->add_option("--seed", config.seed, "Campaign seed");
  run->add_option("--units", config.units, "Units to sample; 0 uses every valid unit");
  run->add_option("--budget", config.budget, "Mutants per unit");
  run->add_option("--jobs", config.jobs, "Worker threads");
  run->add_option("--out", config.out_dir, "Output directory");
  run->add_option("--via-ir", via_ir, "off | only | both")
      ->check(CLI::IsMember({"off", "only", "both"}));
  run->add_option("--kinds", kinds_text, "Comma-separated transformation kinds, or all");
  run->add_option("--runs-list", config.runs_list, "Optimizer runs values")->delimiter(',');
  run->add_option("--evm-version", config.evm_version, "EVM version passed to solc");
  run->add_option("--rounds", config.rounds, "Call plan rounds");
  run->add_option("--compile-timeout", config.compile_timeout_s, "Seconds per compile");
  run->add_flag("--dol-baseline", config.dol_baseline, "Disable mutation");
  run->add_flag("--reduce", config.reduce, "Minimize behavioral findings");

  // mutate
  std::string mutate_file;
  uint64_t mutate_seed = 0;
  int mutate_budget = 3;
  std::string mutate_kinds = "all";
  std::string mutate_out;
  CLI::App* mutate = app.add_subcommand("mutate", "Generate equivalent variants of one file");
  mutate->add_option("FILE", mutate_file)->required();
  mutate->add_option("--seed", mutate_seed);
  mutate->add_option("--budget", mutate_budget);
  mutate->add_option("--kinds", mutate_kinds);
  mutate->add_option("--out", mutate_out, "Directory for mutant files and provenance.json");

  // check-equiv
  std::string equiv_parent, equiv_mutant, equiv_solc, cache_dir = DefaultCache();
  uint64_t equiv_seed = 0;
  int equiv_rounds = 2;
  CLI::App* check = app.add_subcommand("check-equiv", "Compare a mutant against its parent at O0");
  check->add_option("FILE", equiv_parent)->required();
  check->add_option("MUTANT", equiv_mutant)->required();
  check->add_option("--solc", equiv_solc)->required();
  check->add_option("--seed", equiv_seed);
  check->add_option("--rounds", equiv_rounds);
  check->add_option("--cache", cache_dir);

  // reduce
  std::string report_path, reduce_out;
  CLI::App* reduce = app.add_subcommand("reduce", "Minimize a behavioral finding");
  reduce->add_option("REPORT", report_path)->required();
  reduce->add_option("--out", reduce_out, "Reduced report path (default REPORT with .reduced.json)");
  reduce->add_option("--cache", cache_dir);

  // replay
  CLI::App* replay = app.add_subcommand("replay", "Re-evaluate a finding from its embedded inputs");
  replay->add_option("REPORT", report_path)->required();
  replay->add_option("--cache", cache_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      config.kinds = idol::mutate::ParseKindList(kinds_text);
      config.via_ir = via_ir == "both"   ? idol::compile::ViaIrMode::kBoth
                      : via_ir == "only" ? idol::compile::ViaIrMode::kOnly
                                         : idol::compile::ViaIrMode::kOff;
      idol::campaign::CampaignReport report = config.dol_baseline
                                                  ? idol::campaign::RunDolBaseline(config)
                                                  : idol::campaign::RunCampaign(config);
      const json& counts = report.json.at("counts");
      std::cout << "units " << counts.at("units_sampled") << ", work items "
                << counts.at("work_items") << ", findings " << report.findings.size()
                << ", report " << (fs::path(config.out_dir) / "campaign.json").string() << "\n";
      for (const auto& finding : report.json.at("findings")) {
        std::cout << "  " << finding.at("classification").get<std::string>() << " "
                  << finding.at("signature_id").get<std::string>() << " "
                  << finding.at("detail").get<std::string>() << "\n";
      }
      return report.exit_code;
    }
    if (*mutate) {
      idol::corpus::SourceUnit unit =
          idol::corpus::MakeSourceUnit(mutate_file, ReadOrThrow(mutate_file));
      std::vector<idol::mutate::MutantUnit> mutants = idol::mutate::MutateUnit(
          unit, mutate_seed, mutate_budget, idol::mutate::ParseKindList(mutate_kinds));
      json out{{"origin", unit.id}, {"mutants", json::array()}};
      for (const auto& mutant : mutants) {
        out["mutants"].push_back({{"id", mutant.unit.id},
                                  {"source", mutant.unit.source},
                                  {"provenance", json::parse(idol::mutate::ProvenanceJson(mutant).dump())}});
        if (!mutate_out.empty()) {
          fs::create_directories(mutate_out);
          idol::WriteFileAtomic(fs::path(mutate_out) / (mutant.unit.id.substr(0, 16) + ".sol"),
                                mutant.unit.source);
        }
      }
      if (mutate_out.empty()) {
        std::cout << out.dump(2) << "\n";
      } else {
        idol::WriteFileAtomic(fs::path(mutate_out) / "provenance.json", out.dump(2) + "\n");
        std::cout << mutants.size() << " mutants written to " << mutate_out << "\n";
      }
      return 0;
    }
    if (*check) {
      idol::compile::Compiler compiler(cache_dir, equiv_seed);
      idol::campaign::EquivalenceCheck result = idol::campaign::CheckEquivalence(
          ReadOrThrow(equiv_parent), ReadOrThrow(equiv_mutant), equiv_solc, equiv_seed,
          equiv_rounds, compiler);
      json out{{"equivalent", result.equivalent},
               {"detail", result.detail},
               {"parent_trace", result.parent_trace},
               {"mutant_trace", result.mutant_trace}};
      std::cout << out.dump(2) << "\n";
      return result.equivalent ? 0 : idol::campaign::kExitNonEquivalence;
    }
    if (*reduce) {
      idol::campaign::BugReport report = LoadReport(report_path);
      idol::compile::Compiler compiler(cache_dir, report.plan_seed);
      idol::campaign::BugReport reduced = idol::campaign::Reduce(report, compiler);
      fs::path out = reduce_out.empty()
                         ? fs::path(report_path).replace_extension(".reduced.json")
                         : fs::path(reduce_out);
      idol::WriteFileAtomic(out, reduced.ToJson().dump(2) + "\n");
      if (reduced.minimized_source) {
        idol::WriteFileAtomic(fs::path(out).replace_extension(".min.sol"),
                              *reduced.minimized_source);
      }
      std::cout << reduced.reduction.status << ": " << reduced.reduction.original_bytes
                << " -> " << reduced.reduction.minimized_bytes << " bytes ("
                << reduced.reduction.message << "), report " << out.string() << "\n";
      return reduced.reduction.status == "aborted" ? kExitReplayMismatch : 0;
    }
    if (*replay) {
      idol::campaign::BugReport report = LoadReport(report_path);
      idol::compile::Compiler compiler(cache_dir, report.plan_seed);
      idol::oracle::Verdict verdict = idol::campaign::ReplayReport(report, compiler);
      // Only behavioral findings carry a trace-level signature to match.
      if (report.classification != idol::oracle::Classification::kBehavioral) {
        std::cout << json{{"verdict", verdict.ToJson()}, {"reproduced", nullptr}}.dump(2) << "\n";
        return 0;
      }
      const bool reproduced =
          verdict.kind == idol::oracle::VerdictKind::kDivergence &&
          idol::oracle::Signature(verdict, report.signature.solc_version) == report.signature;
      std::cout << json{{"verdict", verdict.ToJson()}, {"reproduced", reproduced}}.dump(2) << "\n";
      return reproduced ? 0 : kExitReplayMismatch;
    }
  } catch (const idol::ConfigError& error) {
    std::cerr << "idol: " << error.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& error) {
    std::cerr << "idol: internal error: " << error.what() << "\n";
    return kExitHarness;
  }
  return 0;
}
