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

#include "idol/evm/evm.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstring>
#include <limits>

#include "idol/common/error.h"
#include "idol/common/hash.h"

namespace idol::evm {

namespace mp = boost::multiprecision;

u256 LoadWord(const uint8_t* big_endian32) {
  u256 value;
  mp::import_bits(value, big_endian32, big_endian32 + 32);
  return value;
}

void StoreWord(const u256& value, uint8_t* big_endian32) {
  uint8_t buffer[32];
  uint8_t* end = mp::export_bits(value, buffer, 8);
  size_t n = static_cast<size_t>(end - buffer);
  std::memset(big_endian32, 0, 32 - n);
  std::memcpy(big_endian32 + 32 - n, buffer, n);
}

Hash32 ToHash(const u256& value) {
  Hash32 hash;
  StoreWord(value, hash.data());
  return hash;
}

u256 FromBytes(ByteView big_endian) {
  uint8_t word[32] = {};
  size_t n = std::min<size_t>(big_endian.size(), 32);
  std::memcpy(word + 32 - n, big_endian.data() + big_endian.size() - n, n);
  return LoadWord(word);
}

Address ToAddress(const u256& value) {
  uint8_t word[32];
  StoreWord(value, word);
  Address address;
  std::memcpy(address.data(), word + 12, 20);
  return address;
}

u256 FromAddress(const Address& address) {
  return FromBytes(ByteView(address.data(), address.size()));
}

Address AddressFromHex(std::string_view hex) {
  Bytes bytes = FromHex(hex);
  if (bytes.size() != 20) throw HarnessError("address must be 20 bytes: " + std::string(hex));
  Address address;
  std::copy(bytes.begin(), bytes.end(), address.begin());
  return address;
}

Address CreateAddress(const Address& sender, uint64_t nonce) {
  Bytes nonce_rlp;
  if (nonce == 0) {
    nonce_rlp.push_back(0x80);
  } else if (nonce < 0x80) {
    nonce_rlp.push_back(static_cast<uint8_t>(nonce));
  } else {
    Bytes be;
    for (uint64_t n = nonce; n > 0; n >>= 8) be.insert(be.begin(), static_cast<uint8_t>(n));
    nonce_rlp.push_back(static_cast<uint8_t>(0x80 + be.size()));
    nonce_rlp.insert(nonce_rlp.end(), be.begin(), be.end());
  }
  Bytes rlp;
  rlp.push_back(static_cast<uint8_t>(0xc0 + 21 + nonce_rlp.size()));
  rlp.push_back(0x94);
  rlp.insert(rlp.end(), sender.begin(), sender.end());
  rlp.insert(rlp.end(), nonce_rlp.begin(), nonce_rlp.end());
  Hash32 hash = Keccak256(rlp);
  Address address;
  std::memcpy(address.data(), hash.data() + 12, 20);
  return address;
}

std::string_view FailureName(Failure failure) {
  switch (failure) {
    case Failure::kNone: return "none";
    case Failure::kOutOfGas: return "out_of_gas";
    case Failure::kInvalidOpcode: return "invalid_opcode";
    case Failure::kStackUnderflow: return "stack_underflow";
    case Failure::kStackOverflow: return "stack_overflow";
    case Failure::kBadJump: return "bad_jump";
    case Failure::kStaticViolation: return "static_violation";
    case Failure::kReturnDataOutOfBounds: return "returndata_out_of_bounds";
    case Failure::kCallDepth: return "call_depth";
    case Failure::kInsufficientBalance: return "insufficient_balance";
    case Failure::kAddressCollision: return "address_collision";
    case Failure::kInvalidCode: return "invalid_code";
    case Failure::kPrecompile: return "precompile";
  }
  return "unknown";
}

namespace {

constexpr int64_t kWarmAccess = 100;
constexpr int64_t kColdAccount = 2600;
constexpr int64_t kColdSload = 2100;
constexpr int kMaxDepth = 1024;
constexpr size_t kMaxStack = 1024;
constexpr uint64_t kMaxMemory = 1ull << 32;

struct Halt {
  Failure failure;
};

bool IsNegative(const u256& x) { return mp::bit_test(x, 255); }
u256 Negate(const u256& x) { return ~x + 1; }

int64_t Words(uint64_t size) { return static_cast<int64_t>((size + 31) / 32); }

enum class CallKind { kCall, kCallCode, kDelegateCall, kStaticCall, kCreate, kCreate2 };

struct Message {
  CallKind kind = CallKind::kCall;
  Address caller{};
  Address recipient{};
  Address code_address{};
  u256 value = 0;
  Bytes input;
  int64_t gas = 0;
  int depth = 0;
  bool is_static = false;
};

struct FrameResult {
  Status status = Status::kSuccess;
  Failure failure = Failure::kNone;
  Bytes output;
  int64_t gas_left = 0;
};

FrameResult Fail(Failure failure) {
  FrameResult result;
  result.status = Status::kFailure;
  result.failure = failure;
  return result;
}

bool IsPrecompile(const Address& address) {
  for (size_t i = 0; i < 19; ++i) {
    if (address[i] != 0) return false;
  }
  return address[19] >= 1 && address[19] <= 10;
}

}  // namespace

class Evm::Impl {
 public:
  explicit Impl(Environment env) : env_(env) {}

  Environment env_;
  std::map<Address, Account> accounts_;

  TxResult RunTransaction(const Address& sender, std::optional<Address> to,
                          const Bytes& data, int64_t gas_limit);
  Hash32 StorageDigest() const;

 private:
  enum class JournalKind {
    kStorage, kTransient, kBalance, kNonce, kCode, kAccount, kWarmAddress, kWarmSlot, kDestructed
  };
  struct JournalEntry {
    JournalKind kind;
    Address address{};
    u256 key = 0;
    u256 value = 0;
    uint64_t nonce = 0;
    std::shared_ptr<const Bytes> code{};
    std::optional<Account> account{};
  };
  struct Checkpoint {
    size_t journal;
    size_t logs;
  };

  Checkpoint Snapshot() const { return {journal_.size(), logs_.size()}; }
  void Revert(Checkpoint checkpoint);

  bool Exists(const Address& address) const { return accounts_.count(address) > 0; }
  bool IsEmpty(const Address& address) const;
  Account& Touch(const Address& address);
  u256 Balance(const Address& address) const;
  void SetBalance(const Address& address, const u256& balance);
  void Transfer(const Address& from, const Address& to, const u256& value);
  u256 Storage(const Address& address, const u256& key) const;
  void SetStorage(const Address& address, const u256& key, const u256& value);
  const Bytes& Code(const Address& address) const;
  // Returns the access surcharge (cold minus warm) and warms the account.
  int64_t AccessAccount(const Address& address);
  int64_t AccessSlot(const Address& address, const u256& key);

  FrameResult Call(const Message& message);
  FrameResult Create(const Message& message, const Address& target);
  FrameResult Precompile(const Message& message);
  FrameResult Interpret(const Message& message, const Bytes& code);

  std::set<Address> warm_addresses_;
  std::set<std::pair<Address, u256>> warm_slots_;
  std::map<std::pair<Address, u256>, u256> original_;
  std::map<std::pair<Address, u256>, u256> transient_;
  std::set<Address> destructed_;
  std::vector<Log> logs_;
  std::vector<JournalEntry> journal_;
  Address origin_{};
  static const Bytes kEmptyCode;
};

const Bytes Evm::Impl::kEmptyCode;

void Evm::Impl::Revert(Checkpoint checkpoint) {
  while (journal_.size() > checkpoint.journal) {
    JournalEntry& entry = journal_.back();
    switch (entry.kind) {
      case JournalKind::kStorage: {
        auto& storage = accounts_[entry.address].storage;
        if (entry.value == 0) {
          storage.erase(entry.key);
        } else {
          storage[entry.key] = entry.value;
        }
        break;
      }
      case JournalKind::kTransient:
        if (entry.value == 0) {
          transient_.erase({entry.address, entry.key});
        } else {
          transient_[{entry.address, entry.key}] = entry.value;
        }
        break;
      case JournalKind::kBalance:
        accounts_[entry.address].balance = entry.value;
        break;
      case JournalKind::kNonce:
        accounts_[entry.address].nonce = entry.nonce;
        break;
      case JournalKind::kCode:
        accounts_[entry.address].code = entry.code;
        break;
      case JournalKind::kAccount:
        if (entry.account) {
          accounts_[entry.address] = *entry.account;
        } else {
          accounts_.erase(entry.address);
        }
        break;
      case JournalKind::kWarmAddress:
        warm_addresses_.erase(entry.address);
        break;
      case JournalKind::kWarmSlot:
        warm_slots_.erase({entry.address, entry.key});
        break;
      case JournalKind::kDestructed:
        destructed_.erase(entry.address);
        break;
    }
    journal_.pop_back();
  }
  logs_.resize(checkpoint.logs);
}

bool Evm::Impl::IsEmpty(const Address& address) const {
  auto it = accounts_.find(address);
  if (it == accounts_.end()) return true;
  const Account& account = it->second;
  return account.nonce == 0 && account.balance == 0 &&
         (!account.code || account.code->empty());
}

Account& Evm::Impl::Touch(const Address& address) {
  auto it = accounts_.find(address);
  if (it != accounts_.end()) return it->second;
  JournalEntry entry{JournalKind::kAccount};
  entry.address = address;
  journal_.push_back(std::move(entry));
  return accounts_[address];
}

u256 Evm::Impl::Balance(const Address& address) const {
  auto it = accounts_.find(address);
  return it == accounts_.end() ? u256(0) : it->second.balance;
}

void Evm::Impl::SetBalance(const Address& address, const u256& balance) {
  Account& account = Touch(address);
  JournalEntry entry{JournalKind::kBalance};
  entry.address = address;
  entry.value = account.balance;
  journal_.push_back(std::move(entry));
  account.balance = balance;
}

void Evm::Impl::Transfer(const Address& from, const Address& to, const u256& value) {
  if (value == 0) return;
  SetBalance(from, Balance(from) - value);
  SetBalance(to, Balance(to) + value);
}

u256 Evm::Impl::Storage(const Address& address, const u256& key) const {
  auto it = accounts_.find(address);
  if (it == accounts_.end()) return 0;
  auto slot = it->second.storage.find(key);
  return slot == it->second.storage.end() ? u256(0) : slot->second;
}

void Evm::Impl::SetStorage(const Address& address, const u256& key, const u256& value) {
  Account& account = Touch(address);
  JournalEntry entry{JournalKind::kStorage};
  entry.address = address;
  entry.key = key;
  auto it = account.storage.find(key);
  entry.value = it == account.storage.end() ? u256(0) : it->second;
  journal_.push_back(std::move(entry));
  if (value == 0) {
    account.storage.erase(key);
  } else {
    account.storage[key] = value;
  }
}

const Bytes& Evm::Impl::Code(const Address& address) const {
  auto it = accounts_.find(address);
  if (it == accounts_.end() || !it->second.code) return kEmptyCode;
  return *it->second.code;
}

int64_t Evm::Impl::AccessAccount(const Address& address) {
  if (warm_addresses_.insert(address).second) {
    JournalEntry entry{JournalKind::kWarmAddress};
    entry.address = address;
    journal_.push_back(std::move(entry));
    return kColdAccount - kWarmAccess;
  }
  return 0;
}

int64_t Evm::Impl::AccessSlot(const Address& address, const u256& key) {
  if (warm_slots_.insert({address, key}).second) {
    JournalEntry entry{JournalKind::kWarmSlot};
    entry.address = address;
    entry.key = key;
    journal_.push_back(std::move(entry));
    return kColdSload;
  }
  return kWarmAccess;
}

FrameResult Evm::Impl::Call(const Message& message) {
  Checkpoint checkpoint = Snapshot();
  if (message.kind == CallKind::kCall) {
    Touch(message.recipient);
    Transfer(message.caller, message.recipient, message.value);
  }
  FrameResult result;
  if (IsPrecompile(message.code_address)) {
    result = Precompile(message);
  } else {
    std::shared_ptr<const Bytes> code;
    auto it = accounts_.find(message.code_address);
    if (it != accounts_.end()) code = it->second.code;
    if (!code || code->empty()) {
      result.gas_left = message.gas;
    } else {
      result = Interpret(message, *code);
    }
  }
  if (result.status != Status::kSuccess) Revert(checkpoint);
  if (result.status == Status::kFailure) result.gas_left = 0;
  return result;
}

FrameResult Evm::Impl::Create(const Message& message, const Address& target) {
  AccessAccount(target);
  auto existing = accounts_.find(target);
  if (existing != accounts_.end() &&
      (existing->second.nonce != 0 ||
       (existing->second.code && !existing->second.code->empty()))) {
    return Fail(Failure::kAddressCollision);
  }
  Checkpoint checkpoint = Snapshot();
  JournalEntry entry{JournalKind::kAccount};
  entry.address = target;
  if (existing != accounts_.end()) entry.account = existing->second;
  journal_.push_back(std::move(entry));
  Account& account = accounts_[target];
  account.nonce = 1;
  account.storage.clear();
  account.created_in_tx = true;
  Transfer(message.caller, target, message.value);
  FrameResult result = Interpret(message, message.input);
  if (result.status == Status::kSuccess) {
    const int64_t deposit = 200 * static_cast<int64_t>(result.output.size());
    if (!result.output.empty() && result.output[0] == 0xef) {
      result = Fail(Failure::kInvalidCode);
    } else if (result.gas_left < deposit) {
      result = Fail(Failure::kOutOfGas);
    } else {
      result.gas_left -= deposit;
      JournalEntry code_entry{JournalKind::kCode};
      code_entry.address = target;
      journal_.push_back(std::move(code_entry));
      accounts_[target].code = std::make_shared<const Bytes>(result.output);
      result.output.clear();
    }
  }
  if (result.status != Status::kSuccess) Revert(checkpoint);
  if (result.status == Status::kFailure) result.gas_left = 0;
  return result;
}

FrameResult Evm::Impl::Precompile(const Message& message) {
  const Bytes& input = message.input;
  const int64_t words = Words(input.size());
  FrameResult result;
  auto charge = [&](int64_t cost) {
    if (cost > message.gas) return false;
    result.gas_left = message.gas - cost;
    return true;
  };
  switch (message.code_address[19]) {
    case 1:  // ecrecover: recovery is not modeled; behaves as a failed recovery.
      if (!charge(3000)) return Fail(Failure::kOutOfGas);
      return result;
    case 2: {
      if (!charge(60 + 12 * words)) return Fail(Failure::kOutOfGas);
      Hash32 hash = Sha256(input);
      result.output.assign(hash.begin(), hash.end());
      return result;
    }
    case 3: {
      if (!charge(600 + 120 * words)) return Fail(Failure::kOutOfGas);
      const EVP_MD* md = EVP_get_digestbyname("RIPEMD160");
      unsigned char digest[EVP_MAX_MD_SIZE];
      unsigned int len = 0;
      if (md == nullptr ||
          EVP_Digest(input.data(), input.size(), digest, &len, md, nullptr) != 1) {
        return Fail(Failure::kPrecompile);
      }
      result.output.assign(12, 0);
      result.output.insert(result.output.end(), digest, digest + len);
      return result;
    }
    case 4:
      if (!charge(15 + 3 * words)) return Fail(Failure::kOutOfGas);
      result.output = input;
      return result;
    case 5: {
      auto read = [&](size_t offset, size_t size) {
        Bytes out(size, 0);
        for (size_t i = 0; i < size && offset + i < input.size(); ++i) out[i] = input[offset + i];
        return out;
      };
      auto header = [&](size_t offset) { return FromBytes(read(offset, 32)); };
      const u256 base_len = header(0), exp_len = header(32), mod_len = header(64);
      if (base_len > 1024 || exp_len > 1024 || mod_len > 1024) {
        return Fail(Failure::kOutOfGas);
      }
      const size_t b = static_cast<size_t>(base_len), e = static_cast<size_t>(exp_len),
                   m = static_cast<size_t>(mod_len);
      mp::cpp_int base, exponent, modulus;
      Bytes base_bytes = read(96, b), exp_bytes = read(96 + b, e), mod_bytes = read(96 + b + e, m);
      mp::import_bits(base, base_bytes.begin(), base_bytes.end());
      mp::import_bits(exponent, exp_bytes.begin(), exp_bytes.end());
      mp::import_bits(modulus, mod_bytes.begin(), mod_bytes.end());
      int64_t words_max = static_cast<int64_t>((std::max(b, m) + 7) / 8);
      int64_t complexity = words_max * words_max;
      Bytes head = read(96 + b, std::min<size_t>(e, 32));
      mp::cpp_int head_value;
      mp::import_bits(head_value, head.begin(), head.end());
      int64_t head_bits = head_value == 0 ? 0 : static_cast<int64_t>(mp::msb(head_value));
      int64_t iterations = e <= 32 ? head_bits : 8 * static_cast<int64_t>(e - 32) + head_bits;
      iterations = std::max<int64_t>(iterations, 1);
      int64_t cost = std::max<int64_t>(200, complexity * iterations / 3);
      if (!charge(cost)) return Fail(Failure::kOutOfGas);
      result.output.assign(m, 0);
      if (modulus != 0 && m > 0) {
        mp::cpp_int value = mp::powm(base, exponent, modulus);
        Bytes out;
        mp::export_bits(value, std::back_inserter(out), 8);
        if (value == 0) out.clear();
        std::copy(out.begin(), out.end(), result.output.end() - out.size());
      }
      return result;
    }
    default:
      return Fail(Failure::kPrecompile);
  }
}

FrameResult Evm::Impl::Interpret(const Message& message, const Bytes& code) {
  std::vector<u256> stack;
  stack.reserve(kMaxStack);
  Bytes memory;
  Bytes return_data;
  int64_t gas = message.gas;
  size_t pc = 0;
  const size_t code_size = code.size();

  std::vector<bool> jumpdests(code_size, false);
  for (size_t i = 0; i < code_size; ++i) {
    uint8_t op = code[i];
    if (op == 0x5b) {
      jumpdests[i] = true;
    } else if (op >= 0x60 && op <= 0x7f) {
      i += op - 0x5f;
    }
  }

  auto charge = [&](int64_t cost) {
    if (cost < 0 || gas < cost) throw Halt{Failure::kOutOfGas};
    gas -= cost;
  };
  auto pop = [&]() {
    if (stack.empty()) throw Halt{Failure::kStackUnderflow};
    u256 value = std::move(stack.back());
    stack.pop_back();
    return value;
  };
  auto push = [&](u256 value) {
    if (stack.size() >= kMaxStack) throw Halt{Failure::kStackOverflow};
    stack.push_back(std::move(value));
  };
  auto need = [&](size_t n) {
    if (stack.size() < n) throw Halt{Failure::kStackUnderflow};
  };
  auto memory_cost = [](uint64_t words) {
    return static_cast<int64_t>(3 * words + words * words / 512);
  };
  // Expands memory to cover [offset, offset + size) and returns the offset.
  auto expand = [&](const u256& offset, const u256& size) -> uint64_t {
    if (size == 0) return 0;
    if (offset > kMaxMemory || size > kMaxMemory) throw Halt{Failure::kOutOfGas};
    uint64_t end = static_cast<uint64_t>(offset) + static_cast<uint64_t>(size);
    if (end > kMaxMemory) throw Halt{Failure::kOutOfGas};
    uint64_t new_words = (end + 31) / 32;
    uint64_t old_words = memory.size() / 32;
    if (new_words > old_words) {
      charge(memory_cost(new_words) - memory_cost(old_words));
      memory.resize(new_words * 32, 0);
    }
    return static_cast<uint64_t>(offset);
  };
  // Copies source[src, src+size) into memory, zero-filling past the end.
  auto copy_to_memory = [&](uint64_t dest, const u256& src, uint64_t size, ByteView source) {
    for (uint64_t i = 0; i < size; ++i) {
      u256 index = src + i;
      memory[dest + i] = index < source.size() ? source[static_cast<size_t>(index)] : 0;
    }
  };
  auto require_mutable = [&]() {
    if (message.is_static) throw Halt{Failure::kStaticViolation};
  };
  auto done = [&](Status status, Bytes output) {
    FrameResult result;
    result.status = status;
    result.output = std::move(output);
    result.gas_left = gas;
    return result;
  };
  auto memory_slice = [&](uint64_t offset, uint64_t size) {
    if (size == 0) return Bytes{};
    return Bytes(memory.begin() + offset, memory.begin() + offset + size);
  };

  try {
    while (true) {
      if (pc >= code_size) return done(Status::kSuccess, {});
      const uint8_t op = code[pc];
      switch (op) {
        case 0x00:
          return done(Status::kSuccess, {});
        case 0x01: { charge(3); need(2); u256 a = pop(); stack.back() = a + stack.back(); break; }
        case 0x02: { charge(5); need(2); u256 a = pop(); stack.back() = a * stack.back(); break; }
        case 0x03: { charge(3); need(2); u256 a = pop(); stack.back() = a - stack.back(); break; }
        case 0x04: {
          charge(5); need(2); u256 a = pop(); u256& b = stack.back();
          b = b == 0 ? u256(0) : u256(a / b);
          break;
        }
        case 0x05: {
          charge(5); need(2); u256 a = pop(); u256& b = stack.back();
          if (b == 0) break;
          bool neg_a = IsNegative(a), neg_b = IsNegative(b);
          u256 q = (neg_a ? Negate(a) : a) / (neg_b ? Negate(b) : b);
          b = neg_a != neg_b ? Negate(q) : q;
          break;
        }
        case 0x06: {
          charge(5); need(2); u256 a = pop(); u256& b = stack.back();
          b = b == 0 ? u256(0) : u256(a % b);
          break;
        }
        case 0x07: {
          charge(5); need(2); u256 a = pop(); u256& b = stack.back();
          if (b == 0) break;
          bool neg_a = IsNegative(a);
          u256 r = (neg_a ? Negate(a) : a) % (IsNegative(b) ? Negate(b) : b);
          b = neg_a ? Negate(r) : r;
          break;
        }
        case 0x08: {
          charge(8); need(3); u256 a = pop(); u256 b = pop(); u256& n = stack.back();
          n = n == 0 ? u256(0) : static_cast<u256>((u512(a) + u512(b)) % u512(n));
          break;
        }
        case 0x09: {
          charge(8); need(3); u256 a = pop(); u256 b = pop(); u256& n = stack.back();
          n = n == 0 ? u256(0) : static_cast<u256>((u512(a) * u512(b)) % u512(n));
          break;
        }
        case 0x0a: {
          need(2);
          u256 base = pop(); u256 exponent = pop();
          int64_t bytes = exponent == 0 ? 0 : static_cast<int64_t>(mp::msb(exponent) / 8 + 1);
          charge(10 + 50 * bytes);
          u256 result = 1;
          while (exponent != 0) {
            if (mp::bit_test(exponent, 0)) result *= base;
            base *= base;
            exponent >>= 1;
          }
          push(result);
          break;
        }
        case 0x0b: {
          charge(5); need(2); u256 b = pop(); u256& x = stack.back();
          if (b < 31) {
            unsigned bit = static_cast<unsigned>(b) * 8 + 7;
            u256 mask = (u256(1) << (bit + 1)) - 1;
            x = mp::bit_test(x, bit) ? u256(x | ~mask) : u256(x & mask);
          }
          break;
        }
        case 0x10: { charge(3); need(2); u256 a = pop(); stack.back() = a < stack.back() ? 1 : 0; break; }
        case 0x11: { charge(3); need(2); u256 a = pop(); stack.back() = a > stack.back() ? 1 : 0; break; }
        case 0x12:
        case 0x13: {
          charge(3); need(2); u256 a = pop(); u256& b = stack.back();
          bool neg_a = IsNegative(a), neg_b = IsNegative(b);
          bool less = neg_a != neg_b ? neg_a : a < b;
          bool greater = neg_a != neg_b ? neg_b : a > b;
          b = (op == 0x12 ? less : greater) ? 1 : 0;
          break;
        }
        case 0x14: { charge(3); need(2); u256 a = pop(); stack.back() = a == stack.back() ? 1 : 0; break; }
        case 0x15: { charge(3); need(1); stack.back() = stack.back() == 0 ? 1 : 0; break; }
        case 0x16: { charge(3); need(2); u256 a = pop(); stack.back() &= a; break; }
        case 0x17: { charge(3); need(2); u256 a = pop(); stack.back() |= a; break; }
        case 0x18: { charge(3); need(2); u256 a = pop(); stack.back() ^= a; break; }
        case 0x19: { charge(3); need(1); stack.back() = ~stack.back(); break; }
        case 0x1a: {
          charge(3); need(2); u256 i = pop(); u256& x = stack.back();
          x = i < 32 ? u256((x >> (8 * (31 - static_cast<unsigned>(i)))) & 0xff) : u256(0);
          break;
        }
        case 0x1b: {
          charge(3); need(2); u256 s = pop(); u256& x = stack.back();
          x = s < 256 ? u256(x << static_cast<unsigned>(s)) : u256(0);
          break;
        }
        case 0x1c: {
          charge(3); need(2); u256 s = pop(); u256& x = stack.back();
          x = s < 256 ? u256(x >> static_cast<unsigned>(s)) : u256(0);
          break;
        }
        case 0x1d: {
          charge(3); need(2); u256 s = pop(); u256& x = stack.back();
          bool neg = IsNegative(x);
          if (s >= 256) {
            x = neg ? ~u256(0) : u256(0);
          } else {
            unsigned shift = static_cast<unsigned>(s);
            x = neg ? u256(~(u256(~x) >> shift)) : u256(x >> shift);
          }
          break;
        }
        case 0x20: {
          need(2); u256 offset = pop(); u256 size = pop();
          charge(30);
          uint64_t start = expand(offset, size);
          charge(6 * Words(static_cast<uint64_t>(size)));
          Hash32 hash = size == 0 ? Keccak256(ByteView())
                                  : Keccak256(ByteView(memory.data() + start,
                                                       static_cast<size_t>(size)));
          push(LoadWord(hash.data()));
          break;
        }
        case 0x30: charge(2); push(FromAddress(message.recipient)); break;
        case 0x31: {
          need(1); Address address = ToAddress(pop());
          charge(kWarmAccess + AccessAccount(address));
          push(Balance(address));
          break;
        }
        case 0x32: charge(2); push(FromAddress(origin_)); break;
        case 0x33: charge(2); push(FromAddress(message.caller)); break;
        case 0x34: charge(2); push(message.value); break;
        case 0x35: {
          charge(3); need(1); u256 offset = pop();
          uint8_t word[32] = {};
          for (size_t i = 0; i < 32; ++i) {
            u256 index = offset + i;
            if (index < message.input.size()) word[i] = message.input[static_cast<size_t>(index)];
          }
          push(LoadWord(word));
          break;
        }
        case 0x36: charge(2); push(message.input.size()); break;
        case 0x37:
        case 0x39:
        case 0x3e: {
          need(3); u256 dest = pop(); u256 src = pop(); u256 size = pop();
          charge(3);
          uint64_t start = expand(dest, size);
          uint64_t n = static_cast<uint64_t>(size);
          charge(3 * Words(n));
          if (op == 0x3e) {
            if (src + size > return_data.size()) throw Halt{Failure::kReturnDataOutOfBounds};
            copy_to_memory(start, src, n, return_data);
          } else {
            copy_to_memory(start, src, n, op == 0x37 ? ByteView(message.input) : ByteView(code));
          }
          break;
        }
        case 0x38: charge(2); push(code_size); break;
        case 0x3a: charge(2); push(0); break;
        case 0x3b: {
          need(1); Address address = ToAddress(pop());
          charge(kWarmAccess + AccessAccount(address));
          push(Code(address).size());
          break;
        }
        case 0x3c: {
          need(4); Address address = ToAddress(pop());
          u256 dest = pop(); u256 src = pop(); u256 size = pop();
          charge(kWarmAccess + AccessAccount(address));
          uint64_t start = expand(dest, size);
          uint64_t n = static_cast<uint64_t>(size);
          charge(3 * Words(n));
          copy_to_memory(start, src, n, Code(address));
          break;
        }
        case 0x3d: charge(2); push(return_data.size()); break;
        case 0x3f: {
          need(1); Address address = ToAddress(pop());
          charge(kWarmAccess + AccessAccount(address));
          if (IsEmpty(address)) {
            push(0);
          } else {
            Hash32 hash = Keccak256(Code(address));
            push(LoadWord(hash.data()));
          }
          break;
        }
        case 0x40: charge(20); need(1); pop(); push(0); break;
        case 0x41: charge(2); push(FromAddress(env_.coinbase)); break;
        case 0x42: charge(2); push(env_.timestamp); break;
        case 0x43: charge(2); push(env_.block_number); break;
        case 0x44: charge(2); push(env_.prev_randao); break;
        case 0x45: charge(2); push(env_.gas_limit); break;
        case 0x46: charge(2); push(env_.chain_id); break;
        case 0x47: charge(5); push(Balance(message.recipient)); break;
        case 0x48: charge(2); push(env_.base_fee); break;
        case 0x49: charge(3); need(1); pop(); push(0); break;
        case 0x4a: charge(2); push(0); break;
        case 0x50: charge(2); pop(); break;
        case 0x51: {
          charge(3); need(1); u256 offset = pop();
          uint64_t start = expand(offset, 32);
          push(LoadWord(memory.data() + start));
          break;
        }
        case 0x52: {
          charge(3); need(2); u256 offset = pop(); u256 value = pop();
          uint64_t start = expand(offset, 32);
          StoreWord(value, memory.data() + start);
          break;
        }
        case 0x53: {
          charge(3); need(2); u256 offset = pop(); u256 value = pop();
          uint64_t start = expand(offset, 1);
          memory[start] = static_cast<uint8_t>(value & 0xff);
          break;
        }
        case 0x54: {
          need(1); u256 key = pop();
          charge(AccessSlot(message.recipient, key));
          push(Storage(message.recipient, key));
          break;
        }
        case 0x55: {
          require_mutable();
          need(2); u256 key = pop(); u256 value = pop();
          if (gas <= 2300) throw Halt{Failure::kOutOfGas};
          int64_t cost = warm_slots_.count({message.recipient, key}) ? 0 : kColdSload;
          AccessSlot(message.recipient, key);
          u256 current = Storage(message.recipient, key);
          auto original = original_.emplace(std::make_pair(message.recipient, key), current).first->second;
          if (current == value) {
            cost += kWarmAccess;
          } else if (original == current) {
            cost += original == 0 ? 20000 : 2900;
          } else {
            cost += kWarmAccess;
          }
          charge(cost);
          SetStorage(message.recipient, key, value);
          break;
        }
        case 0x56: {
          charge(8); need(1); u256 dest = pop();
          if (dest >= code_size || !jumpdests[static_cast<size_t>(dest)]) throw Halt{Failure::kBadJump};
          pc = static_cast<size_t>(dest);
          continue;
        }
        case 0x57: {
          charge(10); need(2); u256 dest = pop(); u256 condition = pop();
          if (condition != 0) {
            if (dest >= code_size || !jumpdests[static_cast<size_t>(dest)]) {
              throw Halt{Failure::kBadJump};
            }
            pc = static_cast<size_t>(dest);
            continue;
          }
          break;
        }
        case 0x58: charge(2); push(pc); break;
        case 0x59: charge(2); push(memory.size()); break;
        case 0x5a: charge(2); push(gas); break;
        case 0x5b: charge(1); break;
        case 0x5c: {
          charge(kWarmAccess); need(1); u256 key = pop();
          auto it = transient_.find({message.recipient, key});
          push(it == transient_.end() ? u256(0) : it->second);
          break;
        }
        case 0x5d: {
          require_mutable();
          charge(kWarmAccess); need(2); u256 key = pop(); u256 value = pop();
          JournalEntry entry{JournalKind::kTransient};
          entry.address = message.recipient;
          entry.key = key;
          auto it = transient_.find({message.recipient, key});
          entry.value = it == transient_.end() ? u256(0) : it->second;
          journal_.push_back(std::move(entry));
          if (value == 0) {
            transient_.erase({message.recipient, key});
          } else {
            transient_[{message.recipient, key}] = value;
          }
          break;
        }
        case 0x5e: {
          need(3); u256 dest = pop(); u256 src = pop(); u256 size = pop();
          charge(3);
          if (size != 0) {
            u256 high = std::max(dest, src);
            expand(high, size);
            uint64_t n = static_cast<uint64_t>(size);
            charge(3 * Words(n));
            std::memmove(memory.data() + static_cast<uint64_t>(dest),
                         memory.data() + static_cast<uint64_t>(src), n);
          }
          break;
        }
        case 0x5f: charge(2); push(0); break;
        case 0xf3:
        case 0xfd: {
          need(2); u256 offset = pop(); u256 size = pop();
          uint64_t start = expand(offset, size);
          Bytes output = memory_slice(start, static_cast<uint64_t>(size));
          return done(op == 0xf3 ? Status::kSuccess : Status::kRevert, std::move(output));
        }
        case 0xfe:
          throw Halt{Failure::kInvalidOpcode};
        case 0xf0:
        case 0xf5: {
          require_mutable();
          need(op == 0xf0 ? 3 : 4);
          u256 value = pop(); u256 offset = pop(); u256 size = pop();
          u256 salt = op == 0xf5 ? pop() : u256(0);
          charge(32000);
          uint64_t start = expand(offset, size);
          uint64_t n = static_cast<uint64_t>(size);
          charge(2 * Words(n) + (op == 0xf5 ? 6 * Words(n) : 0));
          Bytes initcode = memory_slice(start, n);
          return_data.clear();
          if (message.depth + 1 > kMaxDepth || Balance(message.recipient) < value) {
            push(0);
            break;
          }
          Account& self = Touch(message.recipient);
          Address target;
          if (op == 0xf0) {
            target = CreateAddress(message.recipient, self.nonce);
          } else {
            Bytes preimage{0xff};
            preimage.insert(preimage.end(), message.recipient.begin(), message.recipient.end());
            Hash32 salt_bytes = ToHash(salt);
            preimage.insert(preimage.end(), salt_bytes.begin(), salt_bytes.end());
            Hash32 code_hash = Keccak256(initcode);
            preimage.insert(preimage.end(), code_hash.begin(), code_hash.end());
            Hash32 hash = Keccak256(preimage);
            std::memcpy(target.data(), hash.data() + 12, 20);
          }
          JournalEntry nonce_entry{JournalKind::kNonce};
          nonce_entry.address = message.recipient;
          nonce_entry.nonce = self.nonce;
          journal_.push_back(std::move(nonce_entry));
          self.nonce += 1;
          int64_t child_gas = gas - gas / 64;
          charge(child_gas);
          Message child;
          child.kind = op == 0xf0 ? CallKind::kCreate : CallKind::kCreate2;
          child.caller = message.recipient;
          child.recipient = target;
          child.code_address = target;
          child.value = value;
          child.input = std::move(initcode);
          child.gas = child_gas;
          child.depth = message.depth + 1;
          FrameResult result = Create(child, target);
          gas += result.gas_left;
          if (result.status == Status::kRevert) return_data = std::move(result.output);
          push(result.status == Status::kSuccess ? FromAddress(target) : u256(0));
          break;
        }
        case 0xf1:
        case 0xf2:
        case 0xf4:
        case 0xfa: {
          const bool has_value = op == 0xf1 || op == 0xf2;
          need(has_value ? 7 : 6);
          u256 requested = pop();
          Address target = ToAddress(pop());
          u256 value = has_value ? pop() : u256(0);
          u256 in_offset = pop(), in_size = pop(), out_offset = pop(), out_size = pop();
          if (op == 0xf1 && value != 0) require_mutable();
          uint64_t in_start = expand(in_offset, in_size);
          uint64_t out_start = expand(out_offset, out_size);
          int64_t cost = kWarmAccess + AccessAccount(target);
          if (value != 0) {
            cost += 9000;
            if (op == 0xf1 && IsEmpty(target)) cost += 25000;
          }
          charge(cost);
          int64_t available = gas - gas / 64;
          int64_t child_gas = static_cast<int64_t>(
              std::min<u256>(requested, static_cast<uint64_t>(available)));
          charge(child_gas);
          if (value != 0) child_gas += 2300;
          return_data.clear();
          if (message.depth + 1 > kMaxDepth ||
              (has_value && Balance(message.recipient) < value)) {
            gas += child_gas;
            push(0);
            break;
          }
          Message child;
          child.caller = message.recipient;
          child.recipient = target;
          child.code_address = target;
          child.value = value;
          child.input = memory_slice(in_start, static_cast<uint64_t>(in_size));
          child.gas = child_gas;
          child.depth = message.depth + 1;
          child.is_static = message.is_static;
          switch (op) {
            case 0xf1:
              child.kind = CallKind::kCall;
              break;
            case 0xf2:
              child.kind = CallKind::kCallCode;
              child.recipient = message.recipient;
              break;
            case 0xf4:
              child.kind = CallKind::kDelegateCall;
              child.caller = message.caller;
              child.recipient = message.recipient;
              child.value = message.value;
              break;
            default:
              child.kind = CallKind::kStaticCall;
              child.is_static = true;
              break;
          }
          FrameResult result = Call(child);
          gas += result.gas_left;
          return_data = std::move(result.output);
          uint64_t n = std::min<uint64_t>(static_cast<uint64_t>(out_size), return_data.size());
          if (n > 0) std::memcpy(memory.data() + out_start, return_data.data(), n);
          push(result.status == Status::kSuccess ? 1 : 0);
          break;
        }
        case 0xff: {
          require_mutable();
          need(1);
          Address beneficiary = ToAddress(pop());
          int64_t cost = 5000 + (AccessAccount(beneficiary) > 0 ? kColdAccount : 0);
          u256 balance = Balance(message.recipient);
          if (balance != 0 && IsEmpty(beneficiary)) cost += 25000;
          charge(cost);
          Touch(beneficiary);
          Transfer(message.recipient, beneficiary, balance);
          if (accounts_[message.recipient].created_in_tx) {
            if (beneficiary == message.recipient) SetBalance(message.recipient, 0);
            if (destructed_.insert(message.recipient).second) {
              JournalEntry entry{JournalKind::kDestructed};
              entry.address = message.recipient;
              journal_.push_back(std::move(entry));
            }
          }
          return done(Status::kSuccess, {});
        }
        default:
          if (op >= 0x60 && op <= 0x7f) {
            charge(3);
            size_t n = op - 0x5f;
            uint8_t word[32] = {};
            for (size_t i = 0; i < n; ++i) {
              size_t index = pc + 1 + i;
              word[32 - n + i] = index < code_size ? code[index] : 0;
            }
            push(LoadWord(word));
            pc += n + 1;
            continue;
          }
          if (op >= 0x80 && op <= 0x8f) {
            charge(3);
            size_t n = op - 0x7f;
            need(n);
            push(stack[stack.size() - n]);
            break;
          }
          if (op >= 0x90 && op <= 0x9f) {
            charge(3);
            size_t n = op - 0x8f;
            need(n + 1);
            std::swap(stack.back(), stack[stack.size() - 1 - n]);
            break;
          }
          if (op >= 0xa0 && op <= 0xa4) {
            require_mutable();
            size_t topics = op - 0xa0;
            need(2 + topics);
            u256 offset = pop(); u256 size = pop();
            charge(375 + 375 * static_cast<int64_t>(topics));
            uint64_t start = expand(offset, size);
            charge(8 * static_cast<int64_t>(static_cast<uint64_t>(size)));
            Log log;
            log.address = message.recipient;
            for (size_t i = 0; i < topics; ++i) log.topics.push_back(ToHash(pop()));
            log.data = memory_slice(start, static_cast<uint64_t>(size));
            logs_.push_back(std::move(log));
            break;
          }
          throw Halt{Failure::kInvalidOpcode};
      }
      ++pc;
    }
  } catch (const Halt& halt) {
    return Fail(halt.failure);
  }
}

TxResult Evm::Impl::RunTransaction(const Address& sender, std::optional<Address> to,
                                   const Bytes& data, int64_t gas_limit) {
  warm_addresses_.clear();
  warm_slots_.clear();
  original_.clear();
  transient_.clear();
  destructed_.clear();
  logs_.clear();
  journal_.clear();
  for (auto& [address, account] : accounts_) account.created_in_tx = false;
  origin_ = sender;

  int64_t intrinsic = 21000;
  for (uint8_t byte : data) intrinsic += byte == 0 ? 4 : 16;
  if (!to) intrinsic += 32000 + 2 * Words(data.size());

  TxResult tx;
  if (gas_limit < intrinsic) {
    tx.status = Status::kFailure;
    tx.failure = Failure::kOutOfGas;
    return tx;
  }
  warm_addresses_.insert(sender);
  warm_addresses_.insert(env_.coinbase);
  for (uint8_t i = 1; i <= 10; ++i) {
    Address precompile{};
    precompile[19] = i;
    warm_addresses_.insert(precompile);
  }
  Account& account = accounts_[sender];
  const uint64_t nonce = account.nonce;
  account.nonce += 1;

  Message message;
  message.caller = sender;
  message.input = data;
  message.gas = gas_limit - intrinsic;
  FrameResult result;
  if (to) {
    warm_addresses_.insert(*to);
    message.kind = CallKind::kCall;
    message.recipient = *to;
    message.code_address = *to;
    result = Call(message);
  } else {
    Address target = CreateAddress(sender, nonce);
    message.kind = CallKind::kCreate;
    message.recipient = target;
    message.code_address = target;
    result = Create(message, target);
    if (result.status == Status::kSuccess) tx.created = target;
  }
  for (const Address& address : destructed_) accounts_.erase(address);
  tx.status = result.status;
  tx.failure = result.failure;
  tx.output = std::move(result.output);
  tx.gas_used = gas_limit - result.gas_left;
  if (tx.status == Status::kSuccess) tx.logs = std::move(logs_);
  logs_.clear();
  journal_.clear();
  return tx;
}

Hash32 Evm::Impl::StorageDigest() const {
  Bytes preimage;
  for (const auto& [address, account] : accounts_) {
    for (const auto& [key, value] : account.storage) {
      if (value == 0) continue;
      preimage.insert(preimage.end(), address.begin(), address.end());
      Hash32 k = ToHash(key), v = ToHash(value);
      preimage.insert(preimage.end(), k.begin(), k.end());
      preimage.insert(preimage.end(), v.begin(), v.end());
    }
  }
  return Keccak256(preimage);
}

Evm::Evm(Environment env) : impl_(std::make_unique<Impl>(env)) {}
Evm::~Evm() = default;

void Evm::SetBalance(const Address& address, const u256& balance) {
  impl_->accounts_[address].balance = balance;
}

void Evm::SetCode(const Address& address, Bytes code) {
  impl_->accounts_[address].code = std::make_shared<const Bytes>(std::move(code));
}

const Account* Evm::GetAccount(const Address& address) const {
  auto it = impl_->accounts_.find(address);
  return it == impl_->accounts_.end() ? nullptr : &it->second;
}

TxResult Evm::Deploy(const Address& sender, const Bytes& initcode, int64_t gas_limit) {
  return impl_->RunTransaction(sender, std::nullopt, initcode, gas_limit);
}

TxResult Evm::Call(const Address& sender, const Address& to, const Bytes& input,
                   int64_t gas_limit) {
  return impl_->RunTransaction(sender, to, input, gas_limit);
}

Hash32 Evm::StorageDigest() const { return impl_->StorageDigest(); }

}  // namespace idol::evm
