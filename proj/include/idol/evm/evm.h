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

#ifndef IDOL_EVM_EVM_H_
#define IDOL_EVM_EVM_H_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "idol/common/bytes.h"

namespace idol::evm {

using u256 = boost::multiprecision::uint256_t;
using u512 = boost::multiprecision::uint512_t;
using Address = std::array<uint8_t, 20>;

u256 LoadWord(const uint8_t* big_endian32);
void StoreWord(const u256& value, uint8_t* big_endian32);
Hash32 ToHash(const u256& value);
u256 FromBytes(ByteView big_endian);  // at most 32 bytes
Address ToAddress(const u256& value);
u256 FromAddress(const Address& address);
Address AddressFromHex(std::string_view hex);

// CREATE address: keccak(rlp([sender, nonce]))[12:].
Address CreateAddress(const Address& sender, uint64_t nonce);

enum class Status : uint8_t { kSuccess, kRevert, kFailure };

enum class Failure : uint8_t {
  kNone,
  kOutOfGas,
  kInvalidOpcode,
  kStackUnderflow,
  kStackOverflow,
  kBadJump,
  kStaticViolation,
  kReturnDataOutOfBounds,
  kCallDepth,
  kInsufficientBalance,
  kAddressCollision,
  kInvalidCode,
  kPrecompile,
};

std::string_view FailureName(Failure failure);

struct Log {
  Address address{};
  std::vector<Hash32> topics;
  Bytes data;
};

// Fixed block context; nothing reads the host clock or entropy.
struct Environment {
  uint64_t block_number = 1;
  uint64_t timestamp = 1;
  uint64_t chain_id = 1;
  uint64_t gas_limit = 1ull << 31;
  Address coinbase{};
  u256 base_fee = 0;
  u256 prev_randao = 0;
};

struct TxResult {
  Status status = Status::kSuccess;
  Failure failure = Failure::kNone;
  Bytes output;
  std::vector<Log> logs;
  std::optional<Address> created;
  int64_t gas_used = 0;
};

struct Account {
  uint64_t nonce = 0;
  u256 balance = 0;
  std::shared_ptr<const Bytes> code;
  std::map<u256, u256> storage;
  bool created_in_tx = false;
};

// Single-threaded Cancun-era interpreter. Code size limits are not enforced.
class Evm {
 public:
  explicit Evm(Environment env = {});
  ~Evm();
  Evm(const Evm&) = delete;
  Evm& operator=(const Evm&) = delete;

  void SetBalance(const Address& address, const u256& balance);
  void SetCode(const Address& address, Bytes code);
  const Account* GetAccount(const Address& address) const;

  // Each call is one transaction: warm sets, transient storage and original
  // storage values start fresh.
  TxResult Deploy(const Address& sender, const Bytes& initcode, int64_t gas_limit);
  TxResult Call(const Address& sender, const Address& to, const Bytes& input,
                int64_t gas_limit);

  // keccak256 over (address, key, value) for every nonzero slot, sorted.
  Hash32 StorageDigest() const;

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace idol::evm

#endif  // IDOL_EVM_EVM_H_
