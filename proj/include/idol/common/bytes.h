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

#ifndef IDOL_COMMON_BYTES_H_
#define IDOL_COMMON_BYTES_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace idol {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;
using Hash32 = std::array<uint8_t, 32>;

// Lowercase hex without a prefix.
std::string ToHex(ByteView bytes);

// Lowercase hex with a "0x" prefix.
std::string ToHexPrefixed(ByteView bytes);

// Accepts an optional "0x" prefix. Throws std::invalid_argument on odd length
// or non-hex characters.
Bytes FromHex(std::string_view hex);

inline ByteView AsBytes(std::string_view text) {
  return {reinterpret_cast<const uint8_t*>(text.data()), text.size()};
}

}  // namespace idol

#endif  // IDOL_COMMON_BYTES_H_
