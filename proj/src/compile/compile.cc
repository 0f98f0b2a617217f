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

#include "idol/compile/compile.h"

#include <algorithm>

#include "idol/common/error.h"
#include "idol/common/fs.h"
#include "idol/common/hash.h"
#include "idol/common/subprocess.h"
#include "idol/syntax/parser.h"

namespace idol::compile {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Reads one standard-json request per line and answers with one line. The
// first line announces the compiler version.
constexpr const char* kServerScript = R"JS(
const solc = require(process.argv[1]);
const readline = require('readline');
const rl = readline.createInterface({ input: process.stdin, terminal: false });
process.stdout.write(JSON.stringify({ version: solc.version() }) + '\n');
rl.on('line', (line) => {
  let out;
  try {
    out = JSON.stringify(JSON.parse(solc.compile(line)));
  } catch (e) {
    out = JSON.stringify({ errors: [{ severity: 'error', type: 'InternalError',
      message: String(e), formattedMessage: String(e) }] });
  }
  process.stdout.write(out + '\n');
});
)JS";

constexpr const char* kSourceName = "unit.sol";

// Responses may be preceded by stray output from the compiler runtime.
std::optional<json> ParseResponse(const std::string& line) {
  size_t start = line.find('{');
  if (start == std::string::npos) return std::nullopt;
  json parsed = json::parse(line.begin() + static_cast<std::ptrdiff_t>(start), line.end(),
                            nullptr, false);
  if (parsed.is_discarded()) return std::nullopt;
  return parsed;
}

std::string ResolveSolcJs(const std::string& path) {
  fs::path p(path);
  std::error_code ec;
  if (fs::is_directory(p, ec)) {
    if (fs::exists(p / "soljson.js")) return fs::absolute(p).string();
    if (fs::exists(p / "node_modules" / "solc" / "soljson.js")) {
      return fs::absolute(p / "node_modules" / "solc").string();
    }
    return "";
  }
  if (p.filename() == "soljson.js") return fs::absolute(p.parent_path()).string();
  return "";
}

// Source-order names of contracts (not interfaces or libraries).
std::vector<std::string> ContractOrder(const std::string& source) {
  std::vector<std::string> names;
  auto tokens = syntax::Tokenize(source);
  if (const auto* list = std::get_if<std::vector<syntax::Token>>(&tokens)) {
    for (size_t i = 0; i + 1 < list->size(); ++i) {
      const syntax::Token& token = (*list)[i];
      const syntax::Token& next = (*list)[i + 1];
      if (token.kind == syntax::TokenKind::kIdentifier &&
          source.compare(token.span.begin, token.span.size(), "contract") == 0 &&
          next.kind == syntax::TokenKind::kIdentifier) {
        names.emplace_back(source.substr(next.span.begin, next.span.size()));
      }
    }
  }
  return names;
}

}  // namespace

std::string CompileConfig::Label() const {
  std::string label = optimize ? "opt-runs" + std::to_string(runs) : "O0";
  if (pipeline == Pipeline::kViaIr) label += "+ir";
  return label;
}

std::string CompileConfig::Fingerprint() const { return Sha256Hex(ToJson().dump()); }

json CompileConfig::ToJson() const {
  return json{{"optimize", optimize},
              {"runs", runs},
              {"pipeline", pipeline == Pipeline::kViaIr ? "via-ir" : "legacy"},
              {"solc_path", solc_path},
              {"evm_version", evm_version}};
}

CompileConfig CompileConfig::FromJson(const json& j) {
  CompileConfig config;
  config.optimize = j.at("optimize").get<bool>();
  config.runs = j.at("runs").get<int>();
  config.pipeline = j.at("pipeline").get<std::string>() == "via-ir" ? Pipeline::kViaIr
                                                                    : Pipeline::kLegacy;
  config.solc_path = j.at("solc_path").get<std::string>();
  config.evm_version = j.value("evm_version", "");
  return config;
}

std::vector<CompileConfig> ConfigMatrix(const MatrixOptions& options) {
  std::vector<Pipeline> pipelines;
  if (options.via_ir != ViaIrMode::kOnly) pipelines.push_back(Pipeline::kLegacy);
  if (options.via_ir != ViaIrMode::kOff) pipelines.push_back(Pipeline::kViaIr);
  std::vector<CompileConfig> matrix;
  for (Pipeline pipeline : pipelines) {
    CompileConfig base;
    base.pipeline = pipeline;
    base.solc_path = options.solc_path;
    base.evm_version = options.evm_version;
    if (options.include_unoptimized) matrix.push_back(base);
    for (int runs : options.runs_list) {
      if (runs <= 0) throw ConfigError("optimizer runs must be positive");
      CompileConfig config = base;
      config.optimize = true;
      config.runs = runs;
      matrix.push_back(config);
    }
  }
  return matrix;
}

json CompiledArtifact::ToJson() const {
  return json{{"config", config.ToJson()},
              {"contract_name", contract_name},
              {"deploy_bytecode", ToHex(deploy_bytecode)},
              {"runtime_bytecode", ToHex(runtime_bytecode)},
              {"abi", abi},
              {"solc_version", solc_version},
              {"diagnostics", diagnostics}};
}

CompiledArtifact CompiledArtifact::FromJson(const json& j) {
  CompiledArtifact artifact;
  artifact.config = CompileConfig::FromJson(j.at("config"));
  artifact.contract_name = j.at("contract_name").get<std::string>();
  artifact.deploy_bytecode = FromHex(j.at("deploy_bytecode").get<std::string>());
  artifact.runtime_bytecode = FromHex(j.at("runtime_bytecode").get<std::string>());
  artifact.abi = j.at("abi");
  artifact.solc_version = j.at("solc_version").get<std::string>();
  artifact.diagnostics = j.value("diagnostics", "");
  return artifact;
}

std::string_view CompileStatusName(CompileStatus status) {
  switch (status) {
    case CompileStatus::kOk: return "ok";
    case CompileStatus::kFailure: return "failure";
    case CompileStatus::kTimeout: return "timeout";
  }
  return "unknown";
}

json OutcomeToJson(const CompileOutcome& outcome) {
  json j{{"status", CompileStatusName(outcome.status)}, {"message", outcome.message}};
  if (outcome.artifact) j["artifact"] = outcome.artifact->ToJson();
  return j;
}

CompileOutcome OutcomeFromJson(const json& j) {
  CompileOutcome outcome;
  std::string status = j.at("status").get<std::string>();
  outcome.status = status == "ok"        ? CompileStatus::kOk
                   : status == "timeout" ? CompileStatus::kTimeout
                                         : CompileStatus::kFailure;
  outcome.message = j.value("message", "");
  if (j.contains("artifact")) outcome.artifact = CompiledArtifact::FromJson(j.at("artifact"));
  return outcome;
}

json StandardJsonInput(const std::string& source, const CompileConfig& config) {
  json settings{
      {"optimizer", {{"enabled", config.optimize}, {"runs", config.runs}}},
      {"metadata", {{"bytecodeHash", "none"}}},
      {"outputSelection",
       {{"*", {{"*", {"abi", "evm.bytecode.object", "evm.deployedBytecode.object"}}}}}},
  };
  if (!config.evm_version.empty()) settings["evmVersion"] = config.evm_version;
  if (config.pipeline == Pipeline::kViaIr) settings["viaIR"] = true;
  return json{{"language", "Solidity"},
              {"sources", {{kSourceName, {{"content", source}}}}},
              {"settings", settings}};
}

CompileOutcome ParseStandardJsonOutput(const std::string& source, const json& output,
                                       const CompileConfig& config,
                                       const std::string& solc_version) {
  CompileOutcome outcome;
  std::string diagnostics;
  std::string first_error;
  if (output.contains("errors")) {
    for (const json& error : output.at("errors")) {
      std::string text = error.value("formattedMessage", error.value("message", ""));
      diagnostics += text;
      if (!diagnostics.empty() && diagnostics.back() != '\n') diagnostics += '\n';
      if (error.value("severity", "") == "error" && first_error.empty()) {
        first_error = text.empty() ? std::string("unknown compiler error") : text;
      }
    }
  }
  if (!first_error.empty()) {
    outcome.status = CompileStatus::kFailure;
    outcome.message = first_error;
    return outcome;
  }
  const json* contracts = nullptr;
  if (output.contains("contracts") && output.at("contracts").contains(kSourceName)) {
    contracts = &output.at("contracts").at(kSourceName);
  }
  if (contracts != nullptr) {
    std::vector<std::string> order = ContractOrder(source);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (!contracts->contains(*it)) continue;
      const json& contract = contracts->at(*it);
      std::string object = contract["evm"]["bytecode"].value("object", "");
      if (object.empty()) continue;
      CompiledArtifact artifact;
      artifact.config = config;
      artifact.contract_name = *it;
      artifact.deploy_bytecode = FromHex(object);
      artifact.runtime_bytecode =
          FromHex(contract["evm"]["deployedBytecode"].value("object", ""));
      artifact.abi = contract.value("abi", json::array());
      artifact.solc_version = solc_version;
      artifact.diagnostics = diagnostics;
      outcome.status = CompileStatus::kOk;
      outcome.artifact = std::move(artifact);
      return outcome;
    }
  }
  outcome.status = CompileStatus::kFailure;
  outcome.message = "no deployable contract in compiler output";
  return outcome;
}

class SolcDriver::Server {
 public:
  explicit Server(const std::string& module_dir)
      : process({"node", "-e", kServerScript, module_dir}) {}
  Subprocess process;
};

SolcDriver::SolcDriver(std::string solc_path, std::chrono::milliseconds timeout)
    : path_(std::move(solc_path)), timeout_(timeout) {
  module_dir_ = ResolveSolcJs(path_);
  if (!module_dir_.empty()) {
    StartServer();
    return;
  }
  ProcessResult result;
  try {
    result = RunProcess({path_, "--version"}, "", std::chrono::seconds(30));
  } catch (const HarnessError& error) {
    throw ConfigError(std::string("solc is not runnable: ") + error.what());
  }
  if (result.exit_status != 0) throw ConfigError("solc is not runnable: " + path_);
  size_t at = result.output.find("Version: ");
  if (at == std::string::npos) throw ConfigError("unrecognized solc --version output");
  size_t end = result.output.find('\n', at);
  version_ = result.output.substr(at + 9, end == std::string::npos ? end : end - at - 9);
}

SolcDriver::~SolcDriver() = default;

void SolcDriver::StartServer() {
  server_ = std::make_unique<Server>(module_dir_);
  // Loading the emscripten module dominates start-up; allow generously.
  auto deadline = std::chrono::steady_clock::now() + std::max(timeout_, timeout_ * 4);
  std::optional<std::string> line = server_->process.ReadLine(deadline);
  std::optional<json> hello = line ? ParseResponse(*line) : std::nullopt;
  if (!hello || !hello->contains("version")) {
    server_.reset();
    throw ConfigError("solc-js did not start from " + module_dir_);
  }
  std::string version = hello->at("version").get<std::string>();
  if (!version_.empty() && version != version_) {
    throw HarnessError("solc-js version changed across restarts");
  }
  version_ = version;
}

std::optional<json> SolcDriver::Run(const json& input) {
  auto deadline = std::chrono::steady_clock::now() + timeout_;
  if (module_dir_.empty()) {
    ProcessResult result = RunProcess({path_, "--standard-json"}, input.dump(), timeout_);
    if (result.timed_out) return std::nullopt;
    std::optional<json> output = ParseResponse(result.output);
    if (!output) throw HarnessError("unparseable solc output");
    return output;
  }
  if (!server_) StartServer();
  if (!server_->process.Write(input.dump() + "\n")) {
    server_.reset();
    throw HarnessError("solc-js server exited");
  }
  std::optional<std::string> line = server_->process.ReadLine(deadline);
  if (!line) {
    // Either a timeout or a crash; the next request starts a fresh server.
    bool timed_out = server_->process.timed_out();
    server_.reset();
    if (timed_out) return std::nullopt;
    throw HarnessError("solc-js server exited");
  }
  std::optional<json> output = ParseResponse(*line);
  if (!output) throw HarnessError("unparseable solc-js output");
  return output;
}

Compiler::Compiler(fs::path cache_dir, uint64_t audit_seed, std::chrono::milliseconds timeout,
                   double audit_rate)
    : cache_dir_(std::move(cache_dir)),
      timeout_(timeout),
      audit_rate_(audit_rate),
      audit_prng_(DeriveSeed(audit_seed, "cache-audit")) {
  if (!cache_dir_.empty()) fs::create_directories(cache_dir_);
}

Compiler::~Compiler() = default;

SolcDriver& Compiler::Driver(const std::string& solc_path) {
  for (auto& driver : drivers_) {
    if (driver->path() == solc_path) return *driver;
  }
  drivers_.push_back(std::make_unique<SolcDriver>(solc_path, timeout_));
  return *drivers_.back();
}

std::string Compiler::Version(const std::string& solc_path) {
  std::lock_guard<std::mutex> lock(mutex_);
  return Driver(solc_path).version();
}

CacheStats Compiler::stats() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return stats_;
}

CompileOutcome Compiler::Fresh(const std::string& source, const CompileConfig& config) {
  SolcDriver& driver = Driver(config.solc_path);
  std::optional<json> output = driver.Run(StandardJsonInput(source, config));
  if (!output) {
    CompileOutcome outcome;
    outcome.status = CompileStatus::kTimeout;
    outcome.message = "compiler timed out after " + std::to_string(timeout_.count()) + " ms";
    return outcome;
  }
  return ParseStandardJsonOutput(source, *output, config, driver.version());
}

CompileOutcome Compiler::Compile(const std::string& source, const CompileConfig& config) {
  std::lock_guard<std::mutex> lock(mutex_);
  const std::string version = Driver(config.solc_path).version();
  if (cache_dir_.empty()) {
    ++stats_.misses;
    return Fresh(source, config);
  }
  const std::string key =
      Sha256Hex(Sha256Hex(source) + "\n" + config.Fingerprint() + "\n" + version);
  const fs::path file = cache_dir_ / (key + ".json");
  if (std::optional<std::string> cached = ReadFile(file)) {
    json parsed = json::parse(*cached, nullptr, false);
    if (!parsed.is_discarded()) {
      CompileOutcome outcome = OutcomeFromJson(parsed);
      outcome.cache_hit = true;
      ++stats_.hits;
      if (static_cast<double>(audit_prng_.Uniform(1000000)) < audit_rate_ * 1e6) {
        ++stats_.audits;
        CompileOutcome fresh = Fresh(source, config);
        if (fresh.status != CompileStatus::kTimeout &&
            OutcomeToJson(fresh).dump() != OutcomeToJson(outcome).dump()) {
          throw HarnessError("compile cache audit mismatch for " + file.string());
        }
      }
      return outcome;
    }
  }
  ++stats_.misses;
  CompileOutcome outcome = Fresh(source, config);
  // Timeouts are not cached; a later run may have more headroom.
  if (outcome.status != CompileStatus::kTimeout) {
    WriteFileAtomic(file, OutcomeToJson(outcome).dump());
  }
  return outcome;
}

}  // namespace idol::compile
