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

#include "idol/common/prng.h"

#include "idol/common/hash.h"

namespace idol {

uint64_t Prng::Uniform(uint64_t bound) {
  // Reject the low (2^64 mod bound) values so every residue is equally likely.
  const uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    uint64_t value = Next();
    if (value >= threshold) return value % bound;
  }
}

uint64_t DeriveSeed(uint64_t seed, std::string_view label) {
  std::string material = std::to_string(seed);
  material.push_back('/');
  material.append(label);
  Hash32 digest = Sha256(AsBytes(material));
  uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out = (out << 8) | digest[i];
  return out;
}

}  // namespace idol
