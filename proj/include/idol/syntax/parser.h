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

#ifndef IDOL_SYNTAX_PARSER_H_
#define IDOL_SYNTAX_PARSER_H_

#include <string>
#include <variant>
#include <vector>

#include "idol/syntax/ast.h"

namespace idol::syntax {

struct ParseFailure {
  enum class Kind { kSyntax, kUnsupported };
  Kind kind;
  std::string message;
  Span span;
  int line = 0;
  int column = 0;

  std::string Describe() const;
};

using ParseResult = std::variant<Ast, ParseFailure>;

ParseResult Parse(std::string source);

// Parse a fragment as a single statement or expression. The returned Ast's
// root is the statement/expression node itself.
ParseResult ParseStatement(std::string text);
ParseResult ParseExpression(std::string text);

// Splits a file into tokens; exposed for tests and fragment comparison.
std::variant<std::vector<Token>, ParseFailure> Tokenize(const std::string& source);

}  // namespace idol::syntax

#endif  // IDOL_SYNTAX_PARSER_H_
