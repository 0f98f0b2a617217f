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

// Writes the synthetic evaluation corpus.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "corpus_gen.h"

int main(int argc, char** argv) {
  CLI::App app{"Generate a deterministic synthetic Solidity corpus"};
  std::string out;
  uint64_t seed = 1;
  size_t count = 530;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--count", count, "Number of files");
  CLI11_PARSE(app, argc, argv);
  idol::tools::CorpusPlan plan = idol::tools::WriteCorpus(out, seed, count);
  std::cout << plan.files << " files (" << plan.unsupported << " unsupported, "
            << plan.compile_failed << " with type errors) in " << out << "\n";
  return 0;
}
