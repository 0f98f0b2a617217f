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

#ifndef IDOL_COMMON_ERROR_H_
#define IDOL_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace idol {

// Invalid campaign setup: missing corpus, unusable solc, bad flags. Fatal
// before any work starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A defect or inconsistency inside the harness itself. Never reported as a
// compiler finding.
class HarnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace idol

#endif  // IDOL_COMMON_ERROR_H_
