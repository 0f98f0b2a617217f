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

#include "idol/execute/abi.h"

#include <regex>

#include "idol/common/error.h"
#include "idol/common/hash.h"

namespace idol::execute {

using Kind = AbiType::Kind;

std::string AbiType::Canonical() const {
  switch (kind) {
    case Kind::kUint: return "uint" + std::to_string(size);
    case Kind::kInt: return "int" + std::to_string(size);
    case Kind::kBool: return "bool";
    case Kind::kAddress: return "address";
    case Kind::kFixedBytes: return "bytes" + std::to_string(size);
    case Kind::kBytes: return "bytes";
    case Kind::kString: return "string";
    case Kind::kArray: return elements[0].Canonical() + "[]";
    case Kind::kFixedArray: return elements[0].Canonical() + "[" + std::to_string(length) + "]";
    case Kind::kTuple: {
      std::string out = "(";
      for (size_t i = 0; i < elements.size(); ++i) {
        if (i > 0) out += ",";
        out += elements[i].Canonical();
      }
      return out + ")";
    }
  }
  return "";
}

bool AbiType::IsDynamic() const {
  switch (kind) {
    case Kind::kBytes:
    case Kind::kString:
    case Kind::kArray:
      return true;
    case Kind::kFixedArray:
      return elements[0].IsDynamic();
    case Kind::kTuple:
      for (const AbiType& element : elements) {
        if (element.IsDynamic()) return true;
      }
      return false;
    default:
      return false;
  }
}

namespace {

std::optional<AbiType> ParseTypeString(std::string type, const nlohmann::json& param) {
  // Array suffixes bind outermost last: "uint8[2][]" is a dynamic array of uint8[2].
  if (!type.empty() && type.back() == ']') {
    size_t open = type.rfind('[');
    if (open == std::string::npos) return std::nullopt;
    std::string inside = type.substr(open + 1, type.size() - open - 2);
    std::optional<AbiType> element = ParseTypeString(type.substr(0, open), param);
    if (!element) return std::nullopt;
    AbiType array;
    array.elements.push_back(*element);
    if (inside.empty()) {
      array.kind = Kind::kArray;
    } else {
      if (inside.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
      array.kind = Kind::kFixedArray;
      array.length = std::stoul(inside);
      if (array.length == 0) return std::nullopt;
    }
    return array;
  }
  AbiType result;
  static const std::regex kInteger("(u?)int([0-9]*)");
  static const std::regex kFixedBytes("bytes([0-9]+)");
  std::smatch match;
  if (std::regex_match(type, match, kInteger)) {
    result.kind = match[1].length() ? Kind::kUint : Kind::kInt;
    result.size = match[2].length() ? std::stoi(match[2]) : 256;
    if (result.size < 8 || result.size > 256 || result.size % 8 != 0) return std::nullopt;
    return result;
  }
  if (std::regex_match(type, match, kFixedBytes)) {
    result.kind = Kind::kFixedBytes;
    result.size = std::stoi(match[1]);
    if (result.size < 1 || result.size > 32) return std::nullopt;
    return result;
  }
  if (type == "bool") {
    result.kind = Kind::kBool;
  } else if (type == "address") {
    result.kind = Kind::kAddress;
  } else if (type == "bytes") {
    result.kind = Kind::kBytes;
  } else if (type == "string") {
    result.kind = Kind::kString;
  } else if (type == "tuple") {
    result.kind = Kind::kTuple;
    if (!param.contains("components")) return std::nullopt;
    for (const nlohmann::json& component : param.at("components")) {
      std::optional<AbiType> member = ParseAbiType(component);
      if (!member) return std::nullopt;
      result.elements.push_back(*member);
    }
  } else {
    return std::nullopt;
  }
  return result;
}

void Append(Bytes& out, const evm::u256& word) {
  uint8_t buffer[32];
  evm::StoreWord(word, buffer);
  out.insert(out.end(), buffer, buffer + 32);
}

Bytes EncodeValue(const AbiType& type, const AbiValue& value);

Bytes EncodeSequence(const std::vector<const AbiType*>& types,
                     const std::vector<const AbiValue*>& values) {
  if (types.size() != values.size()) throw HarnessError("abi arity mismatch");
  size_t head_size = 0;
  for (const AbiType* type : types) {
    head_size += type->IsDynamic() ? 32 : EncodeValue(*type, AbiValue{}).size();
  }
  Bytes head;
  Bytes tail;
  for (size_t i = 0; i < types.size(); ++i) {
    Bytes encoded = EncodeValue(*types[i], *values[i]);
    if (types[i]->IsDynamic()) {
      Append(head, head_size + tail.size());
      tail.insert(tail.end(), encoded.begin(), encoded.end());
    } else {
      head.insert(head.end(), encoded.begin(), encoded.end());
    }
  }
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

// Static types encode a default value when the value has no items, which
// lets EncodeSequence measure head sizes.
Bytes EncodeValue(const AbiType& type, const AbiValue& value) {
  Bytes out;
  switch (type.kind) {
    case Kind::kUint:
    case Kind::kInt:
    case Kind::kBool:
    case Kind::kAddress:
      Append(out, value.word);
      return out;
    case Kind::kFixedBytes: {
      Bytes padded(32, 0);
      std::copy_n(value.bytes.begin(), std::min<size_t>(value.bytes.size(), type.size),
                  padded.begin());
      return padded;
    }
    case Kind::kBytes:
    case Kind::kString: {
      Append(out, value.bytes.size());
      out.insert(out.end(), value.bytes.begin(), value.bytes.end());
      out.resize(32 + (value.bytes.size() + 31) / 32 * 32, 0);
      return out;
    }
    case Kind::kArray:
    case Kind::kFixedArray: {
      size_t count = type.kind == Kind::kArray ? value.items.size() : type.length;
      AbiValue empty;
      std::vector<const AbiType*> types(count, &type.elements[0]);
      std::vector<const AbiValue*> values;
      for (size_t i = 0; i < count; ++i) {
        values.push_back(i < value.items.size() ? &value.items[i] : &empty);
      }
      if (type.kind == Kind::kArray) Append(out, count);
      Bytes body = EncodeSequence(types, values);
      out.insert(out.end(), body.begin(), body.end());
      return out;
    }
    case Kind::kTuple: {
      AbiValue empty;
      std::vector<const AbiType*> types;
      std::vector<const AbiValue*> values;
      for (size_t i = 0; i < type.elements.size(); ++i) {
        types.push_back(&type.elements[i]);
        values.push_back(i < value.items.size() ? &value.items[i] : &empty);
      }
      return EncodeSequence(types, values);
    }
  }
  return out;
}

}  // namespace

std::optional<AbiType> ParseAbiType(const nlohmann::json& param) {
  if (!param.contains("type")) return std::nullopt;
  return ParseTypeString(param.at("type").get<std::string>(), param);
}

Bytes EncodeArguments(const std::vector<AbiType>& types, const std::vector<AbiValue>& values) {
  std::vector<const AbiType*> type_ptrs;
  std::vector<const AbiValue*> value_ptrs;
  for (const AbiType& type : types) type_ptrs.push_back(&type);
  for (const AbiValue& value : values) value_ptrs.push_back(&value);
  return EncodeSequence(type_ptrs, value_ptrs);
}

std::string FunctionSignature(const std::string& name, const std::vector<AbiType>& inputs) {
  std::string signature = name + "(";
  for (size_t i = 0; i < inputs.size(); ++i) {
    if (i > 0) signature += ",";
    signature += inputs[i].Canonical();
  }
  return signature + ")";
}

std::array<uint8_t, 4> Selector(const std::string& signature) {
  Hash32 hash = Keccak256(AsBytes(signature));
  return {hash[0], hash[1], hash[2], hash[3]};
}

}  // namespace idol::execute
