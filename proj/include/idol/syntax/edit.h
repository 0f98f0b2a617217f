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

#ifndef IDOL_SYNTAX_EDIT_H_
#define IDOL_SYNTAX_EDIT_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "idol/syntax/ast.h"

namespace idol::syntax {

// Replace source[span] with replacement. An empty span is an insertion.
struct Edit {
  Span span;
  std::string replacement;

  friend bool operator==(const Edit&, const Edit&) = default;
};

using EditSet = std::vector<Edit>;

class EditConflict : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws EditConflict, before touching anything, if two spans overlap, two
// insertions share an offset, or a span leaves the source.
void ValidateEdits(std::string_view source, const EditSet& edits);

// The result depends only on the set of edits, not their order. Bytes outside
// every span are copied unchanged.
std::string ApplyEdits(std::string_view source, const EditSet& edits);

}  // namespace idol::syntax

#endif  // IDOL_SYNTAX_EDIT_H_
