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

#ifndef IDOL_COMMON_FS_H_
#define IDOL_COMMON_FS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace idol {

std::optional<std::string> ReadFile(const std::filesystem::path& path);

// Writes through a temporary sibling and renames, so readers never observe a
// partially written file.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);

}  // namespace idol

#endif  // IDOL_COMMON_FS_H_
