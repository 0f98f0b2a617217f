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

#ifndef IDOL_EXECUTE_ABI_H_
#define IDOL_EXECUTE_ABI_H_

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idol/common/bytes.h"
#include "idol/evm/evm.h"

namespace idol::execute {

struct AbiType {
  enum class Kind : uint8_t {
    kUint, kInt, kBool, kAddress, kFixedBytes, kBytes, kString, kArray, kFixedArray, kTuple
  };
  Kind kind = Kind::kUint;
  int size = 256;     // bit width for integers, byte width for bytesN
  size_t length = 0;  // element count for fixed arrays
  std::vector<AbiType> elements;  // one element type for arrays; members for tuples

  // Canonical type string used in signatures, e.g. "uint256[2]" or "(bool,bytes)".
  std::string Canonical() const;
  bool IsDynamic() const;
};

// Parses a JSON ABI parameter ("type" plus "components" for tuples).
// Returns std::nullopt for types the harness cannot synthesize, such as
// function types or fixed-point numbers.
std::optional<AbiType> ParseAbiType(const nlohmann::json& param);

struct AbiValue {
  evm::u256 word = 0;              // scalars, already in 256-bit two's complement
  Bytes bytes;                     // bytes and string payloads
  std::vector<AbiValue> items;     // arrays and tuples
};

Bytes EncodeArguments(const std::vector<AbiType>& types, const std::vector<AbiValue>& values);

// "name(type,...)" and its 4-byte selector.
std::string FunctionSignature(const std::string& name, const std::vector<AbiType>& inputs);
std::array<uint8_t, 4> Selector(const std::string& signature);

}  // namespace idol::execute

#endif  // IDOL_EXECUTE_ABI_H_
