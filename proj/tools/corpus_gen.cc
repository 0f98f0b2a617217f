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

#include "corpus_gen.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "idol/common/fs.h"
#include "idol/common/prng.h"

namespace idol::tools {
namespace {

using Template = std::function<std::string(Prng&, const std::string&)>;

std::string K(Prng& prng, uint64_t low, uint64_t high) {
  return std::to_string(low + prng.Uniform(high - low + 1));
}

const std::vector<Template>& Templates() {
  static const std::vector<Template> templates = {
      // Loop with an invariant computed before it.
      [](Prng& p, const std::string& n) {
        return "    function loop" + n + "(uint256 a, uint8 n) public returns (uint256 acc) {\n"
               "        uint256 step = a % " + K(p, 3, 97) + " + " + K(p, 1, 9) + ";\n"
               "        for (uint256 i = 0; i < n; i++) {\n"
               "            acc += step * (i + 1);\n"
               "        }\n"
               "        total = acc;\n"
               "    }\n";
      },
      // Invariant assignment followed by a loop reading storage.
      [](Prng& p, const std::string& n) {
        return "    function cached" + n + "(uint256 k, uint8 n) public view returns (uint256 s) {\n"
               "        uint256 x;\n"
               "        x = slots[k % " + K(p, 4, 16) + "] + " + K(p, 1, 50) + ";\n"
               "        for (uint256 i = 0; i < n; i++) {\n"
               "            s += x + i;\n"
               "        }\n"
               "    }\n";
      },
      // While loop.
      [](Prng& p, const std::string& n) {
        return "    function scan" + n + "(uint256 seed, uint8 n) public pure returns (uint256 h) {\n"
               "        uint256 i = 0;\n"
               "        h = seed % " + K(p, 1000, 100000) + ";\n"
               "        while (i < n) {\n"
               "            h = (h * 31 + i) % " + K(p, 1000, 100000) + ";\n"
               "            i++;\n"
               "        }\n"
               "    }\n";
      },
      // Guarded do-while, the inverted loop shape.
      [](Prng& p, const std::string& n) {
        return "    function inv" + n + "(uint256 a, uint8 n) public pure returns (uint256 r) {\n"
               "        uint256 i = 0;\n"
               "        if (i < n) {\n"
               "            do {\n"
               "                r += a % " + K(p, 2, 50) + " + i;\n"
               "                i++;\n"
               "            } while (i < n);\n"
               "        }\n"
               "    }\n";
      },
      // Named subexpression reused twice.
      [](Prng& p, const std::string& n) {
        return "    function mix" + n + "(uint256 a, uint256 b) public pure returns (uint256) {\n"
               "        uint256 s = (a % " + K(p, 10, 1000) + ") + (b % " + K(p, 10, 1000) + ");\n"
               "        uint256 t = s * s;\n"
               "        return t + s;\n"
               "    }\n";
      },
      // Hashing into storage.
      [](Prng& p, const std::string& n) {
        return "    function hash" + n + "(uint256 a, uint256 b) public returns (bytes32 h) {\n"
               "        h = keccak256(abi.encode(a, b));\n"
               "        slots[a % " + K(p, 4, 32) + "] = uint256(h);\n"
               "        emit Hashed(h);\n"
               "    }\n";
      },
      // Arithmetic with literals.
      [](Prng& p, const std::string& n) {
        return "    function calc" + n + "(uint256 x) public pure returns (uint256) {\n"
               "        uint256 y = (x % " + K(p, 10, 5000) + ") * " + K(p, 2, 300) + " + " +
               K(p, 0, 77) + ";\n"
               "        return y ^ (x >> " + K(p, 1, 8) + ");\n"
               "    }\n";
      },
      // Internal helper used twice.
      [](Prng& p, const std::string& n) {
        return "    function scale" + n + "(uint256 x) internal pure returns (uint256) {\n"
               "        return x % " + K(p, 10, 900) + " + " + K(p, 1, 40) + ";\n"
               "    }\n"
               "    function use" + n + "(uint256 a) public returns (uint256) {\n"
               "        counter = scale" + n + "(a) + scale" + n + "(a / 2);\n"
               "        return counter;\n"
               "    }\n";
      },
      // Guarded storage update with an event.
      [](Prng& p, const std::string& n) {
        return "    function deposit" + n + "(uint256 v) public {\n"
               "        require(v != " + K(p, 1, 3) + ", \"rejected\");\n"
               "        total += v % " + K(p, 100, 100000) + ";\n"
               "        slots[v % 16] += 1;\n"
               "        emit Updated(msg.sender, total);\n"
               "    }\n";
      },
      // Dynamic storage array.
      [](Prng& p, const std::string& n) {
        return "    function push" + n + "(uint256 v) public returns (uint256) {\n"
               "        items.push(v % " + K(p, 10, 1000) + ");\n"
               "        if (items.length > " + K(p, 2, 5) + ") {\n"
               "            items.pop();\n"
               "        }\n"
               "        return items.length;\n"
               "    }\n";
      },
      // Dynamic bytes argument.
      [](Prng& p, const std::string& n) {
        return "    function len" + n + "(bytes memory d) public pure returns (uint256) {\n"
               "        if (d.length == 0) {\n"
               "            return " + K(p, 1, 99) + ";\n"
               "        }\n"
               "        return d.length * " + K(p, 2, 9) + " + uint8(d[0]);\n"
               "    }\n";
      },
      // Signed arithmetic with an unchecked block.
      [](Prng& p, const std::string& n) {
        return "    function signed" + n + "(int256 a, int256 b) public pure returns (int256 r) {\n"
               "        unchecked {\n"
               "            r = a * " + K(p, 2, 9) + " - b;\n"
               "        }\n"
               "        if (r < 0) {\n"
               "            r = -(r / 2);\n"
               "        }\n"
               "    }\n";
      },
      // Storage reads returning a tuple.
      [](Prng& p, const std::string& n) {
        return "    function read" + n + "(uint256 k) public view returns (uint256, uint256) {\n"
               "        return (slots[k % " + K(p, 4, 16) + "], total / 2 + counter / 2);\n"
               "    }\n";
      },
      // Conditional on bool and address.
      [](Prng& p, const std::string& n) {
        return "    function pick" + n + "(bool flag, address who) public pure returns (address) {\n"
               "        return flag ? who : address(uint160(" + K(p, 1, 1000000) + "));\n"
               "    }\n";
      },
      // String hashing.
      [](Prng&, const std::string& n) {
        return "    function name" + n + "(string memory s) public pure returns (bytes32) {\n"
               "        return keccak256(bytes(s));\n"
               "    }\n";
      },
      // Nested loops with continue and break.
      [](Prng& p, const std::string& n) {
        return "    function grid" + n + "(uint8 w, uint8 h) public pure returns (uint256 c) {\n"
               "        for (uint256 x = 0; x < w % 8; x++) {\n"
               "            for (uint256 y = 0; y < h % 8; y++) {\n"
               "                if ((x + y) % " + K(p, 2, 5) + " == 0) {\n"
               "                    continue;\n"
               "                }\n"
               "                c += x * y;\n"
               "            }\n"
               "            if (c > " + K(p, 10, 60) + ") {\n"
               "                break;\n"
               "            }\n"
               "        }\n"
               "    }\n";
      },
      // Struct in storage.
      [](Prng& p, const std::string& n) {
        const std::string m = K(p, 10, 10000);
        return "    function pair" + n + "(uint256 a, uint256 b) public returns (uint256) {\n"
               "        pair = Pair(a % " + m + ", b % " + m + ");\n"
               "        return pair.a + pair.b;\n"
               "    }\n";
      },
  };
  return templates;
}

std::string Preamble(bool import_sibling) {
  std::string text = "// SPDX-License-Identifier: GPL-3.0\npragma solidity >=0.8.0;\n\n";
  if (import_sibling) text += "import \"./unit_0000.sol\";\n\n";
  return text;
}

}  // namespace

std::string GenerateContract(uint64_t seed, size_t index) {
  Prng prng(DeriveSeed(seed, "corpus/" + std::to_string(index)));
  const auto& templates = Templates();
  std::string name = "Unit" + std::to_string(index);
  std::string text;
  const bool with_base = prng.Uniform(4) == 0;
  if (with_base) {
    text += "contract Base" + std::to_string(index) + " {\n"
            "    uint256 internal seeded;\n\n"
            "    constructor() {\n"
            "        seeded = " + K(prng, 1, 1000) + ";\n"
            "    }\n"
            "}\n\n";
  }
  text += "contract " + name + (with_base ? " is Base" + std::to_string(index) : "") + " {\n";
  text +=
      "    struct Pair {\n"
      "        uint256 a;\n"
      "        uint256 b;\n"
      "    }\n\n"
      "    uint256 public total;\n"
      "    uint256 internal counter;\n"
      "    mapping(uint256 => uint256) internal slots;\n"
      "    uint256[] internal items;\n"
      "    Pair internal pair;\n\n"
      "    event Updated(address indexed who, uint256 value);\n"
      "    event Hashed(bytes32 digest);\n";
  const size_t functions = 2 + prng.Uniform(4);
  std::vector<size_t> chosen;
  while (chosen.size() < functions) {
    size_t pick = prng.Uniform(templates.size());
    if (std::find(chosen.begin(), chosen.end(), pick) == chosen.end()) chosen.push_back(pick);
  }
  for (size_t j = 0; j < chosen.size(); ++j) {
    text += "\n" + templates[chosen[j]](prng, std::to_string(j));
  }
  text += "}\n";
  return text;
}

CorpusPlan WriteCorpus(const std::string& dir, uint64_t seed, size_t count) {
  std::filesystem::create_directories(dir);
  CorpusPlan plan;
  for (size_t i = 0; i < count; ++i) {
    const bool unsupported = i % 50 == 49;
    const bool broken = !unsupported && i % 97 == 96;
    std::string body = GenerateContract(seed, i);
    if (broken) {
      const std::string marker = "    uint256 public total;\n";
      body.replace(body.find(marker), marker.size(), "    uint256 public total = \"not a number\";\n");
    }
    char name[32];
    std::snprintf(name, sizeof(name), "unit_%04zu.sol", i);
    WriteFileAtomic(std::filesystem::path(dir) / name, Preamble(unsupported) + body);
    ++plan.files;
    plan.unsupported += unsupported;
    plan.compile_failed += broken;
  }
  return plan;
}

}  // namespace idol::tools
