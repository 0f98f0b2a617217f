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

#ifndef IDOL_TESTS_UNIT_SUPPORT_H_
#define IDOL_TESTS_UNIT_SUPPORT_H_

#include <filesystem>
#include <string>

#include <gtest/gtest.h>

namespace idol::testing {

// Install directory of a pinned solc-js release, or empty when absent.
inline std::string SolcPath(const std::string& version) {
  std::filesystem::path dir = std::filesystem::path(IDOL_SOLC_ROOT) / version;
  if (!std::filesystem::exists(dir / "node_modules" / "solc" / "soljson.js")) return "";
  return dir.string();
}

// Fresh empty directory under the system temp dir, unique per test.
inline std::filesystem::path ScratchDir(const std::string& tag) {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "idol-tests" /
                              (std::string(info->test_suite_name()) + "." + info->name() + "." + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace idol::testing

#define IDOL_REQUIRE_SOLC(var, version)                                    \
  const std::string var = ::idol::testing::SolcPath(version);              \
  if (var.empty()) GTEST_SKIP() << "solc " version " not installed; run third_party/solc/fetch.sh"

#endif  // IDOL_TESTS_UNIT_SUPPORT_H_
