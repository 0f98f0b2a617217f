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

#ifndef IDOL_COMMON_PRNG_H_
#define IDOL_COMMON_PRNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace idol {

// Every seeded draw in the harness goes through this generator. The engine is
// std::mt19937_64, whose output sequence is fixed by the C++ standard; bounded
// draws use rejection sampling so results never depend on a standard library
// distribution implementation.
class Prng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit Prng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform in [0, bound). bound must be nonzero.
  uint64_t Uniform(uint64_t bound);

  bool Coin() { return (Next() & 1) != 0; }

 private:
  std::mt19937_64 engine_;
};

// Derives a child seed from a parent seed and a label, so that independent
// consumers (per unit, per mutant, per plan) never share a stream.
uint64_t DeriveSeed(uint64_t seed, std::string_view label);

}  // namespace idol

#endif  // IDOL_COMMON_PRNG_H_
