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

#include "idol/common/hash.h"

#include <openssl/evp.h>

#include <cstring>

#include "idol/common/error.h"

namespace idol {
namespace {

constexpr uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};

constexpr int kRotations[25] = {0,  1,  62, 28, 27, 36, 44, 6,  55,
                                20, 3,  10, 43, 25, 39, 41, 45, 15,
                                21, 8,  18, 2,  61, 56, 14};

inline uint64_t Rotl(uint64_t x, int n) {
  return n == 0 ? x : (x << n) | (x >> (64 - n));
}

void KeccakF1600(uint64_t state[25]) {
  for (uint64_t round_constant : kRoundConstants) {
    uint64_t c[5];
    for (int x = 0; x < 5; ++x) {
      c[x] = state[x] ^ state[x + 5] ^ state[x + 10] ^ state[x + 15] ^
             state[x + 20];
    }
    for (int x = 0; x < 5; ++x) {
      uint64_t d = c[(x + 4) % 5] ^ Rotl(c[(x + 1) % 5], 1);
      for (int y = 0; y < 25; y += 5) state[y + x] ^= d;
    }
    // rho and pi
    uint64_t b[25];
    for (int x = 0; x < 5; ++x) {
      for (int y = 0; y < 5; ++y) {
        int index = x + 5 * y;
        b[y + 5 * ((2 * x + 3 * y) % 5)] =
            Rotl(state[index], kRotations[index]);
      }
    }
    // chi
    for (int y = 0; y < 25; y += 5) {
      for (int x = 0; x < 5; ++x) {
        state[y + x] = b[y + x] ^ (~b[y + (x + 1) % 5] & b[y + (x + 2) % 5]);
      }
    }
    state[0] ^= round_constant;
  }
}

void AbsorbBlock(uint64_t state[25], const uint8_t* block, size_t rate) {
  for (size_t i = 0; i < rate / 8; ++i) {
    uint64_t lane = 0;
    for (int j = 7; j >= 0; --j) lane = (lane << 8) | block[8 * i + j];
    state[i] ^= lane;
  }
  KeccakF1600(state);
}

}  // namespace

Hash32 Keccak256(ByteView data) {
  constexpr size_t kRate = 136;
  uint64_t state[25] = {};
  size_t offset = 0;
  while (data.size() - offset >= kRate) {
    AbsorbBlock(state, data.data() + offset, kRate);
    offset += kRate;
  }
  uint8_t last[kRate] = {};
  std::memcpy(last, data.data() + offset, data.size() - offset);
  last[data.size() - offset] ^= 0x01;
  last[kRate - 1] ^= 0x80;
  AbsorbBlock(state, last, kRate);

  Hash32 out;
  for (size_t i = 0; i < 4; ++i) {
    for (size_t j = 0; j < 8; ++j) {
      out[8 * i + j] = static_cast<uint8_t>(state[i] >> (8 * j));
    }
  }
  return out;
}

Hash32 Sha256(ByteView data) {
  Hash32 out;
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &length, EVP_sha256(),
                 nullptr) != 1 ||
      length != out.size()) {
    throw HarnessError("SHA-256 digest failed");
  }
  return out;
}

}  // namespace idol
