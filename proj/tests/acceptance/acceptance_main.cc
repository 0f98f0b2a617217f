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

// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corpus_gen.h"
#include "idol/campaign/campaign.h"
#include "idol/common/fs.h"
#include "idol/compile/compile.h"
#include "idol/corpus/corpus.h"
#include "idol/mutate/transform.h"
#include "idol/syntax/edit.h"
#include "idol/syntax/parser.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace idol;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  fs::path work;
  fs::path fixtures;
  std::string current;  // non-buggy release
  std::string buggy;    // affected by the keccak caching defect
  std::string fixed;    // first release with the fix
  uint64_t seed = 1;
  int jobs = 1;
  // Filled by the large campaign and reused by later criteria.
  std::optional<campaign::CampaignReport> large;
  std::vector<campaign::BugReport> regression_findings;
};

std::string Read(const fs::path& path) {
  std::optional<std::string> text = ReadFile(path);
  if (!text) throw std::runtime_error("cannot read " + path.string());
  return *text;
}

std::string SolcDir(const fs::path& root, const std::string& version) {
  fs::path dir = root / version;
  if (!fs::exists(dir / "node_modules" / "solc" / "soljson.js")) {
    throw std::runtime_error("solc " + version + " not installed under " + root.string() +
                             "; run third_party/solc/fetch.sh");
  }
  return dir.string();
}

fs::path SingleFileCorpus(const fs::path& dir, const fs::path& file) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::copy_file(file, dir / file.filename());
  return dir;
}

campaign::CampaignConfig BaseConfig(const Context& ctx, const fs::path& corpus,
                                    const std::string& solc, const std::string& out) {
  campaign::CampaignConfig config;
  config.corpus_root = corpus.string();
  config.solc_paths = {solc};
  config.out_dir = (ctx.work / out).string();
  config.seed = ctx.seed;
  config.jobs = ctx.jobs;
  fs::remove_all(config.out_dir);
  return config;
}

campaign::CampaignReport& LargeCampaign(Context& ctx) {
  if (!ctx.large) {
    const fs::path corpus = ctx.work / "corpus";
    fs::remove_all(corpus);
    tools::WriteCorpus(corpus.string(), ctx.seed, 530);
    campaign::CampaignConfig config = BaseConfig(ctx, corpus, ctx.current, "large");
    ctx.large = campaign::RunCampaign(config);
  }
  return *ctx.large;
}

Outcome MutantEquivalence(Context& ctx) {
  const campaign::CampaignReport& report = LargeCampaign(ctx);
  const json& counts = report.json["counts"];
  const int units = counts["units_sampled"].get<int>();
  const int mutants = counts["mutants_generated"].get<int>();
  const int failed = counts["equivalence"]["failed"].get<int>();
  std::ostringstream detail;
  detail << units << " units, " << mutants << " mutants, " << failed << " equivalence failures;";
  bool every_kind = true;
  for (auto& [kind, stats] : report.json["per_kind"].items()) {
    detail << " " << kind << " " << stats["equivalence_passed"] << "/" << stats["mutants"];
    every_kind &= stats["mutants"].get<int>() > 0;
  }
  if (!every_kind) detail << "; some kind produced no mutants";
  return {units >= 500 && mutants > 0 && failed == 0 && every_kind &&
              counts["units_error"].get<int>() == 0,
          detail.str()};
}

Outcome GoldenTransformations(Context& ctx) {
  struct Case {
    const char* input;
    const char* expected;
    mutate::TransformKind kind;
  };
  const Case cases[] = {
      {"golden/licm.sol", "golden/licm.expected.sol", mutate::TransformKind::kReverseLicm},
      {"golden/inversion.sol", "golden/inversion.expected.sol",
       mutate::TransformKind::kReverseLoopInversion},
  };
  compile::Compiler compiler(ctx.work / "golden-cache", ctx.seed);
  compile::MatrixOptions options;
  options.solc_path = ctx.current;
  std::ostringstream detail;
  bool pass = true;
  for (const Case& c : cases) {
    const std::string source = Read(ctx.fixtures / c.input);
    syntax::ParseResult parsed = syntax::Parse(source);
    if (!std::holds_alternative<syntax::Ast>(parsed)) {
      detail << c.input << " does not parse; ";
      pass = false;
      continue;
    }
    std::vector<mutate::Site> sites = mutate::DiscoverSites(std::get<syntax::Ast>(parsed), c.kind);
    if (sites.empty()) {
      detail << c.input << " has no site; ";
      pass = false;
      continue;
    }
    const std::string mutant =
        syntax::ApplyEdits(source, mutate::Apply(source, sites[0], 0).edits);
    const bool exact = mutant == Read(ctx.fixtures / c.expected);
    int compiled = 0;
    for (const compile::CompileConfig& config : compile::ConfigMatrix(options)) {
      compiled += compiler.Compile(mutant, config).status == compile::CompileStatus::kOk;
    }
    detail << c.input << (exact ? " byte-exact" : " MISMATCH") << ", compiles " << compiled
           << "/3; ";
    pass &= exact && compiled == 3;
  }
  return {pass, detail.str()};
}

Outcome NullHypothesis(Context& ctx) {
  const campaign::CampaignReport& report = LargeCampaign(ctx);
  const int behavioral = report.json["summary"]["behavioral"].get<int>();
  const int units = report.json["counts"]["units_sampled"].get<int>();
  std::ostringstream detail;
  detail << units << " units on " << report.json["solc_versions"].begin().value().get<std::string>()
         << ": " << behavioral << " behavioral findings, "
         << report.json["summary"]["compile_divergence"] << " compile divergences, verdicts "
         << report.json["counts"]["verdicts"].dump();
  return {units >= 500 && behavioral == 0, detail.str()};
}

Outcome KnownBugRegression(Context& ctx) {
  const fs::path corpus =
      SingleFileCorpus(ctx.work / "keccak-corpus", ctx.fixtures / "regression/keccak_witness.sol");
  campaign::CampaignConfig buggy = BaseConfig(ctx, corpus, ctx.buggy, "keccak-buggy");
  buggy.reduce = true;
  campaign::CampaignReport on_buggy = campaign::RunCampaign(buggy);
  campaign::CampaignReport on_fixed =
      campaign::RunCampaign(BaseConfig(ctx, corpus, ctx.fixed, "keccak-fixed"));
  int behavioral = 0;
  std::string pair;
  for (const campaign::BugReport& bug : on_buggy.findings) {
    if (bug.classification == oracle::Classification::kBehavioral) {
      ++behavioral;
      pair = bug.signature.config_pair;
      ctx.regression_findings.push_back(bug);
    }
  }
  const bool o0_vs_optimized = pair.rfind("O0|opt-", 0) == 0;
  std::ostringstream detail;
  detail << "affected release: " << behavioral << " behavioral finding(s) [" << pair
         << "], total " << on_buggy.findings.size() << "; fixed release: "
         << on_fixed.findings.size() << " findings";
  return {behavioral == 1 && on_buggy.findings.size() == 1 && o0_vs_optimized &&
              on_fixed.findings.empty(),
          detail.str()};
}

Outcome Separation(Context& ctx) {
  const fs::path corpus = SingleFileCorpus(ctx.work / "separation-corpus",
                                           ctx.fixtures / "separation/cached_slot_loop.sol");
  campaign::CampaignConfig idol_config = BaseConfig(ctx, corpus, ctx.buggy, "separation-idol");
  idol_config.reduce = true;
  campaign::CampaignReport dol =
      campaign::RunDolBaseline(BaseConfig(ctx, corpus, ctx.buggy, "separation-dol"));
  campaign::CampaignReport idol = campaign::RunCampaign(idol_config);
  int idol_behavioral = 0;
  for (const campaign::BugReport& bug : idol.findings) {
    if (bug.classification == oracle::Classification::kBehavioral) {
      ++idol_behavioral;
      ctx.regression_findings.push_back(bug);
    }
  }
  std::ostringstream detail;
  detail << "seed " << ctx.seed << ": DOL " << dol.findings.size() << " findings, IDOL "
         << idol.findings.size() << " (" << idol_behavioral << " behavioral)";
  return {dol.findings.empty() && idol_behavioral >= 1, detail.str()};
}

Outcome Determinism(Context& ctx) {
  std::ostringstream detail;
  bool pass = true;
  auto twice = [&](const std::string& name, campaign::CampaignConfig config) {
    json first = campaign::StripTiming(campaign::RunCampaign(config).json);
    std::set<std::string> first_ids;
    for (const json& finding : first["findings"]) first_ids.insert(finding["signature_id"]);
    fs::remove_all(config.out_dir);
    json second = campaign::StripTiming(campaign::RunCampaign(config).json);
    std::set<std::string> second_ids;
    for (const json& finding : second["findings"]) second_ids.insert(finding["signature_id"]);
    const bool same = first.dump() == second.dump() && first_ids == second_ids;
    detail << name << ": " << (same ? "identical" : "DIFFERENT") << " (" << first_ids.size()
           << " signatures); ";
    pass &= same;
  };
  LargeCampaign(ctx);  // ensures the generated corpus exists
  campaign::CampaignConfig sampled = BaseConfig(ctx, ctx.work / "corpus", ctx.current, "det-a");
  sampled.units = 60;
  twice("60-unit sample", sampled);
  const fs::path separation = ctx.work / "separation-corpus";
  if (!fs::exists(separation)) {
    SingleFileCorpus(separation, ctx.fixtures / "separation/cached_slot_loop.sol");
  }
  campaign::CampaignConfig with_findings = BaseConfig(ctx, separation, ctx.buggy, "det-b");
  with_findings.reduce = true;
  twice("findings corpus", with_findings);
  return {pass, detail.str()};
}

Outcome RoundTrip(Context& ctx) {
  LargeCampaign(ctx);
  json index = json::parse(Read(ctx.work / "large" / "corpus.index.json"));
  corpus::CorpusIndex parsed = corpus::CorpusIndex::FromJson(index);
  size_t valid = 0, exact = 0;
  std::string first_failure;
  for (const corpus::IndexEntry& entry : parsed.entries) {
    if (entry.status != corpus::EntryStatus::kValid) continue;
    ++valid;
    const std::string source = Read(fs::path(parsed.root) / entry.path);
    syntax::ParseResult result = syntax::Parse(source);
    if (auto* ast = std::get_if<syntax::Ast>(&result); ast && ast->Reprint() == source) {
      ++exact;
    } else if (first_failure.empty()) {
      first_failure = entry.path;
    }
  }
  std::ostringstream detail;
  detail << exact << "/" << valid << " valid files reprint byte-exact";
  if (!first_failure.empty()) detail << "; first failure " << first_failure;
  return {valid > 0 && exact == valid, detail.str()};
}

Outcome ReductionSoundness(Context& ctx) {
  if (ctx.regression_findings.empty()) return {false, "no findings from criteria 4 and 5 to check"};
  compile::Compiler compiler(ctx.work / "replay-cache", ctx.seed);
  std::ostringstream detail;
  bool pass = true;
  for (const campaign::BugReport& bug : ctx.regression_findings) {
    bool ok = bug.minimized_source.has_value() &&
              bug.minimized_source->size() <= bug.mutant_source.size();
    if (ok) {
      campaign::BugReport minimized = bug;
      minimized.mutant_source = *bug.minimized_source;
      oracle::Verdict verdict = campaign::ReplayReport(minimized, compiler);
      ok = verdict.kind == oracle::VerdictKind::kDivergence &&
           verdict.divergence->field == bug.signature.field &&
           verdict.divergence->baseline_config + "|" + verdict.divergence->other_config ==
               bug.signature.config_pair;
    }
    detail << bug.signature.Id() << " " << bug.reduction.original_bytes << "->"
           << bug.reduction.minimized_bytes << " bytes " << (ok ? "reproduces" : "BROKEN")
           << "; ";
    pass &= ok;
  }
  return {pass, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IDOL acceptance suite"};
  std::string work = (fs::temp_directory_path() / "idol-acceptance").string();
  std::string solc_root = IDOL_SOLC_ROOT;
  Context ctx;
  ctx.fixtures = IDOL_FIXTURE_DIR;
  std::vector<int> only;
  app.add_option("--work", work, "Scratch directory");
  app.add_option("--solc-root", solc_root, "Directory holding the pinned solc-js installs");
  app.add_option("--seed", ctx.seed, "Campaign seed");
  app.add_option("--jobs", ctx.jobs, "Worker threads per campaign");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);
  ctx.work = work;
  fs::create_directories(ctx.work);

  const std::vector<std::pair<std::string, std::function<Outcome(Context&)>>> criteria = {
      {"mutant equivalence over >=500 units", MutantEquivalence},
      {"golden transformations", GoldenTransformations},
      {"null-hypothesis agreement on current solc", NullHypothesis},
      {"known keccak-cache bug regression", KnownBugRegression},
      {"IDOL finds what DOL misses", Separation},
      {"determinism", Determinism},
      {"parse-print round trip", RoundTrip},
      {"reduction soundness", ReductionSoundness},
  };
  bool solc_ok = true;
  std::string solc_error;
  try {
    ctx.current = SolcDir(solc_root, "0.8.28");
    ctx.buggy = SolcDir(solc_root, "0.8.2");
    ctx.fixed = SolcDir(solc_root, "0.8.3");
  } catch (const std::exception& error) {
    solc_ok = false;
    solc_error = error.what();
  }

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), number) == only.end()) continue;
    Outcome outcome;
    if (!solc_ok) {
      outcome = {false, solc_error};
    } else {
      try {
        outcome = criteria[i].second(ctx);
      } catch (const std::exception& error) {
        outcome = {false, std::string("error: ") + error.what()};
      }
    }
    failures += !outcome.pass;
    while (!outcome.detail.empty() && (outcome.detail.back() == ' ' || outcome.detail.back() == ';')) {
      outcome.detail.pop_back();
    }
    std::cout << "criterion " << number << " " << (outcome.pass ? "PASS" : "FAIL") << " "
              << criteria[i].first << ": " << outcome.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
