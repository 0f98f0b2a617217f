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

#include "idol/syntax/edit.h"

#include <algorithm>

namespace idol::syntax {
namespace {

std::vector<const Edit*> Sorted(const EditSet& edits) {
  std::vector<const Edit*> sorted;
  sorted.reserve(edits.size());
  for (const Edit& edit : edits) sorted.push_back(&edit);
  std::sort(sorted.begin(), sorted.end(), [](const Edit* a, const Edit* b) {
    if (a->span.begin != b->span.begin) return a->span.begin < b->span.begin;
    return a->span.end < b->span.end;
  });
  return sorted;
}

}  // namespace

void ValidateEdits(std::string_view source, const EditSet& edits) {
  std::vector<const Edit*> sorted = Sorted(edits);
  for (size_t i = 0; i < sorted.size(); ++i) {
    const Span span = sorted[i]->span;
    if (span.begin > span.end || span.end > source.size()) {
      throw EditConflict("edit span [" + std::to_string(span.begin) + ", " +
                         std::to_string(span.end) + ") out of bounds");
    }
    if (i == 0) continue;
    const Span prev = sorted[i - 1]->span;
    if (prev.end > span.begin) {
      throw EditConflict("overlapping edits at offset " +
                         std::to_string(span.begin));
    }
    if (prev.empty() && span.empty() && prev.begin == span.begin) {
      throw EditConflict("two insertions at offset " +
                         std::to_string(span.begin));
    }
  }
}

std::string ApplyEdits(std::string_view source, const EditSet& edits) {
  ValidateEdits(source, edits);
  std::string out;
  out.reserve(source.size());
  uint32_t cursor = 0;
  for (const Edit* edit : Sorted(edits)) {
    out.append(source.substr(cursor, edit->span.begin - cursor));
    out.append(edit->replacement);
    cursor = edit->span.end;
  }
  out.append(source.substr(cursor));
  return out;
}

}  // namespace idol::syntax
