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

#ifndef IDOL_COMMON_HASH_H_
#define IDOL_COMMON_HASH_H_

#include <string>
#include <string_view>

#include "idol/common/bytes.h"

namespace idol {

// Original Keccak-256 (0x01 domain padding), as used by the EVM.
Hash32 Keccak256(ByteView data);

Hash32 Sha256(ByteView data);

inline std::string Sha256Hex(std::string_view text) {
  return ToHex(Sha256(AsBytes(text)));
}

}  // namespace idol

#endif  // IDOL_COMMON_HASH_H_
