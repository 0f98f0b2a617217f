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

#include "idol/syntax/parser.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <regex>
#include <unordered_set>

namespace idol::syntax {
namespace {

struct ParseException {
  ParseFailure failure;
};

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool IsIdentChar(char c) {
  return IsIdentStart(c) || std::isdigit(static_cast<unsigned char>(c));
}

std::pair<int, int> LineColumnOf(const std::string& source, uint32_t offset) {
  int line = 1;
  int column = 1;
  for (uint32_t i = 0; i < offset && i < source.size(); ++i) {
    if (source[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

[[noreturn]] void Throw(const std::string& source, ParseFailure::Kind kind,
                        std::string message, Span span) {
  auto [line, column] = LineColumnOf(source, span.begin);
  throw ParseException{ParseFailure{kind, std::move(message), span, line, column}};
}

constexpr std::array<const char*, 26> kMultiCharPunct = {
    ">>>=", ">>=", "<<=", ">>>", "**", "=>", "->", ":=", "==",
    "!=",   "<=",  ">=",  "&&",  "||", "++", "--", "+=", "-=",
    "*=",   "/=",  "%=",  "|=",  "&=", "^=", "<<", ">>"};
constexpr std::string_view kSingleCharPunct = "(){}[];,.:?=+-*/%<>!~&|^@";

std::vector<Token> Lex(const std::string& source) {
  std::vector<Token> tokens;
  const uint32_t n = static_cast<uint32_t>(source.size());
  uint32_t i = 0;
  auto lex_string = [&](uint32_t start, uint32_t quote_at) {
    const char quote = source[quote_at];
    uint32_t j = quote_at + 1;
    while (j < n && source[j] != quote) {
      if (source[j] == '\\') ++j;
      if (j < n && source[j] == '\n') break;
      ++j;
    }
    if (j >= n || source[j] != quote) {
      Throw(source, ParseFailure::Kind::kSyntax, "unterminated string literal",
            Span{start, std::min(j, n)});
    }
    tokens.push_back(Token{TokenKind::kString, Span{start, j + 1}});
    return j + 1;
  };
  while (i < n) {
    char c = source[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && source[i + 1] == '/') {
      while (i < n && source[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && source[i + 1] == '*') {
      size_t close = source.find("*/", i + 2);
      if (close == std::string::npos) {
        Throw(source, ParseFailure::Kind::kSyntax, "unterminated comment",
              Span{i, n});
      }
      i = static_cast<uint32_t>(close) + 2;
      continue;
    }
    if (IsIdentStart(c)) {
      uint32_t j = i;
      while (j < n && IsIdentChar(source[j])) ++j;
      std::string_view word(source.data() + i, j - i);
      if ((word == "hex" || word == "unicode") && j < n &&
          (source[j] == '"' || source[j] == '\'')) {
        i = lex_string(i, j);
        continue;
      }
      tokens.push_back(Token{TokenKind::kIdentifier, Span{i, j}});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < n &&
         std::isdigit(static_cast<unsigned char>(source[i + 1])))) {
      uint32_t j = i;
      if (c == '0' && i + 1 < n && (source[i + 1] == 'x' || source[i + 1] == 'X')) {
        j += 2;
        while (j < n && (std::isxdigit(static_cast<unsigned char>(source[j])) ||
                         source[j] == '_')) {
          ++j;
        }
      } else {
        while (j < n && (std::isdigit(static_cast<unsigned char>(source[j])) ||
                         source[j] == '_')) {
          ++j;
        }
        if (j + 1 < n && source[j] == '.' &&
            std::isdigit(static_cast<unsigned char>(source[j + 1]))) {
          ++j;
          while (j < n && (std::isdigit(static_cast<unsigned char>(source[j])) ||
                           source[j] == '_')) {
            ++j;
          }
        }
        if (j < n && (source[j] == 'e' || source[j] == 'E')) {
          uint32_t k = j + 1;
          if (k < n && source[k] == '-') ++k;
          if (k < n && std::isdigit(static_cast<unsigned char>(source[k]))) {
            j = k;
            while (j < n && std::isdigit(static_cast<unsigned char>(source[j]))) ++j;
          }
        }
      }
      tokens.push_back(Token{TokenKind::kNumber, Span{i, j}});
      i = j;
      continue;
    }
    if (c == '"' || c == '\'') {
      i = lex_string(i, i);
      continue;
    }
    bool matched = false;
    for (const char* punct : kMultiCharPunct) {
      size_t len = std::strlen(punct);
      if (source.compare(i, len, punct) == 0) {
        tokens.push_back(Token{TokenKind::kPunct, Span{i, i + static_cast<uint32_t>(len)}});
        i += static_cast<uint32_t>(len);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (kSingleCharPunct.find(c) != std::string_view::npos) {
      tokens.push_back(Token{TokenKind::kPunct, Span{i, i + 1}});
      ++i;
      continue;
    }
    Throw(source, ParseFailure::Kind::kSyntax,
          std::string("unexpected character '") + c + "'", Span{i, i + 1});
  }
  return tokens;
}

bool IsElementaryTypeName(std::string_view word) {
  static const std::unordered_set<std::string_view> kFixed = {
      "address", "bool", "string", "bytes", "byte", "int", "uint", "fixed",
      "ufixed"};
  if (kFixed.count(word)) return true;
  static const std::regex kSized(
      "(u?int(8|16|24|32|40|48|56|64|72|80|88|96|104|112|120|128|136|144|152|"
      "160|168|176|184|192|200|208|216|224|232|240|248|256))|"
      "(bytes([1-9]|[12][0-9]|3[0-2]))|(u?fixed[0-9]+x[0-9]+)");
  return std::regex_match(word.begin(), word.end(), kSized);
}

bool IsNumberUnit(std::string_view word) {
  static const std::unordered_set<std::string_view> kUnits = {
      "wei",   "gwei",  "ether", "seconds", "minutes",
      "hours", "days",  "weeks", "years",   "szabo", "finney"};
  return kUnits.count(word) > 0;
}

int BinaryPrecedence(std::string_view op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "==" || op == "!=") return 3;
  if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
  if (op == "|") return 5;
  if (op == "^") return 6;
  if (op == "&") return 7;
  if (op == "<<" || op == ">>" || op == ">>>") return 8;
  if (op == "+" || op == "-") return 9;
  if (op == "*" || op == "/" || op == "%") return 10;
  if (op == "**") return 11;
  return 0;
}

bool IsAssignmentOp(std::string_view op) {
  return op == "=" || op == "+=" || op == "-=" || op == "*=" || op == "/=" ||
         op == "%=" || op == "|=" || op == "&=" || op == "^=" || op == "<<=" ||
         op == ">>=" || op == ">>>=";
}

class Parser {
 public:
  Parser(std::shared_ptr<const std::string> source, std::vector<Token> tokens)
      : source_(std::move(source)), tokens_(std::move(tokens)) {}

  NodeId ParseSourceUnit() {
    NodeId unit = NewNode(NodeKind::kSourceUnit, 0);
    while (!AtEnd()) {
      NodeId member;
      if (Is("pragma")) {
        member = ParsePragma();
      } else if (Is("import")) {
        Unsupported("import directives are not supported (single-file units only)");
      } else if (Is("abstract") || Is("contract") || Is("interface") ||
                 Is("library")) {
        member = ParseContract();
      } else {
        member = ParseMember(/*file_level=*/true);
      }
      AddChild(unit, member);
    }
    nodes_[unit].span = Span{0, static_cast<uint32_t>(source_->size())};
    return unit;
  }

  NodeId ParseStatementFragment() {
    NodeId stmt = ParseStatement();
    if (!AtEnd()) Fail("trailing tokens after statement");
    return stmt;
  }

  NodeId ParseExpressionFragment() {
    NodeId expr = ParseExpression();
    if (!AtEnd()) Fail("trailing tokens after expression");
    return expr;
  }

  std::vector<Node> TakeNodes() { return std::move(nodes_); }
  std::vector<Token> TakeTokens() { return std::move(tokens_); }

 private:
  // ---- token helpers ----
  bool AtEnd() const { return pos_ >= tokens_.size(); }

  const Token* PeekToken(size_t k = 0) const {
    return pos_ + k < tokens_.size() ? &tokens_[pos_ + k] : nullptr;
  }

  std::string_view TextAt(size_t k = 0) const {
    const Token* token = PeekToken(k);
    if (!token) return {};
    return std::string_view(*source_).substr(token->span.begin, token->span.size());
  }

  bool Is(std::string_view text, size_t k = 0) const {
    const Token* token = PeekToken(k);
    return token && token->kind != TokenKind::kString &&
           token->kind != TokenKind::kNumber && TextAt(k) == text;
  }

  bool IsKind(TokenKind kind, size_t k = 0) const {
    const Token* token = PeekToken(k);
    return token && token->kind == kind;
  }

  bool IsIdent(size_t k = 0) const { return IsKind(TokenKind::kIdentifier, k); }

  uint32_t CurrentBegin() const {
    return AtEnd() ? static_cast<uint32_t>(source_->size())
                   : tokens_[pos_].span.begin;
  }

  uint32_t PrevEnd() const { return pos_ == 0 ? 0 : tokens_[pos_ - 1].span.end; }

  Span CurrentSpan() const {
    if (AtEnd()) {
      uint32_t n = static_cast<uint32_t>(source_->size());
      return Span{n, n};
    }
    return tokens_[pos_].span;
  }

  [[noreturn]] void Fail(const std::string& message) const {
    std::string found = AtEnd() ? "end of input" : "'" + std::string(TextAt()) + "'";
    Throw(*source_, ParseFailure::Kind::kSyntax, message + ", found " + found,
          CurrentSpan());
  }

  [[noreturn]] void Unsupported(const std::string& message) const {
    Throw(*source_, ParseFailure::Kind::kUnsupported, message, CurrentSpan());
  }

  Token Advance() {
    if (AtEnd()) Fail("unexpected end of input");
    return tokens_[pos_++];
  }

  Token Expect(std::string_view text) {
    if (!Is(text)) Fail("expected '" + std::string(text) + "'");
    return Advance();
  }

  Token ExpectIdent() {
    if (!IsIdent()) Fail("expected identifier");
    return Advance();
  }

  // ---- node helpers ----
  NodeId NewNode(NodeKind kind, uint32_t begin) {
    Node node;
    node.kind = kind;
    node.span = Span{begin, begin};
    nodes_.push_back(std::move(node));
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  NodeId Finish(NodeId id) {
    nodes_[id].span.end = PrevEnd();
    return id;
  }

  void AddChild(NodeId parent, NodeId child) {
    if (child != kNoNode) nodes_[parent].children.push_back(child);
  }

  void SetSlot(NodeId parent, int slot, NodeId child) {
    nodes_[parent].slots[slot] = child;
    AddChild(parent, child);
  }

  // Balanced skip of a '{' ... '}' region starting at the current '{'.
  void SkipBraces() {
    Expect("{");
    int depth = 1;
    while (depth > 0) {
      if (AtEnd()) Fail("unbalanced braces");
      if (Is("{")) ++depth;
      if (Is("}")) --depth;
      Advance();
    }
  }

  void SkipUntilSemicolon() {
    int depth = 0;
    while (!(depth == 0 && Is(";"))) {
      if (AtEnd()) Fail("expected ';'");
      if (Is("(") || Is("{") || Is("[")) ++depth;
      if (Is(")") || Is("}") || Is("]")) --depth;
      Advance();
    }
    Advance();
  }

  // ---- declarations ----
  NodeId ParsePragma() {
    NodeId node = NewNode(NodeKind::kPragma, CurrentBegin());
    Expect("pragma");
    while (!Is(";")) Advance();
    Advance();
    return Finish(node);
  }

  NodeId ParseContract() {
    NodeId node = NewNode(NodeKind::kContract, CurrentBegin());
    if (Is("abstract")) {
      Advance();
      nodes_[node].flag = true;
    }
    std::string_view keyword = Advance().kind == TokenKind::kIdentifier
                                   ? TextOf(tokens_[pos_ - 1])
                                   : std::string_view{};
    if (keyword == "interface") {
      nodes_[node].subkind = static_cast<uint8_t>(ContractKind::kInterface);
    } else if (keyword == "library") {
      nodes_[node].subkind = static_cast<uint8_t>(ContractKind::kLibrary);
    } else if (keyword != "contract") {
      Fail("expected contract, interface or library");
    }
    nodes_[node].name = ExpectIdent().span;
    if (Is("is")) {
      NodeId inheritance = NewNode(NodeKind::kInheritance, CurrentBegin());
      Advance();
      int depth = 0;
      while (!(depth == 0 && Is("{"))) {
        if (AtEnd()) Fail("expected contract body");
        if (Is("(")) ++depth;
        if (Is(")")) --depth;
        Advance();
      }
      SetSlot(node, 0, Finish(inheritance));
    }
    Expect("{");
    while (!Is("}")) {
      if (AtEnd()) Fail("expected '}'");
      AddChild(node, ParseMember(/*file_level=*/false));
    }
    Advance();
    return Finish(node);
  }

  std::string_view TextOf(const Token& token) const {
    return std::string_view(*source_).substr(token.span.begin, token.span.size());
  }

  NodeId ParseMember(bool file_level) {
    if (Is("function") || Is("constructor") || Is("fallback") ||
        Is("receive") || Is("modifier")) {
      // "function" at member level may also start a state variable of
      // function type: function (uint) external f;
      if (Is("function") && Is("(", 1)) return ParseStateVariable();
      return ParseFunction();
    }
    if (Is("struct")) return ParseStruct();
    if (Is("enum")) return ParseEnum();
    if (Is("event") && IsIdent(1)) return ParseEventOrError(NodeKind::kEvent);
    if (Is("error") && IsIdent(1)) return ParseEventOrError(NodeKind::kError);
    if (Is("using")) {
      NodeId node = NewNode(NodeKind::kUsingFor, CurrentBegin());
      SkipUntilSemicolon();
      return Finish(node);
    }
    if (Is("type") && IsIdent(1) && Is("is", 2)) {
      NodeId node = NewNode(NodeKind::kUserDefinedValueType, CurrentBegin());
      SkipUntilSemicolon();
      return Finish(node);
    }
    (void)file_level;
    return ParseStateVariable();
  }

  NodeId ParseStruct() {
    NodeId node = NewNode(NodeKind::kStruct, CurrentBegin());
    Expect("struct");
    nodes_[node].name = ExpectIdent().span;
    Expect("{");
    while (!Is("}")) {
      NodeId member = NewNode(NodeKind::kVariableDeclaration, CurrentBegin());
      SetSlot(member, 0, ParseTypeName());
      nodes_[member].name = ExpectIdent().span;
      Expect(";");
      AddChild(node, Finish(member));
    }
    Advance();
    return Finish(node);
  }

  NodeId ParseEnum() {
    NodeId node = NewNode(NodeKind::kEnum, CurrentBegin());
    Expect("enum");
    nodes_[node].name = ExpectIdent().span;
    Expect("{");
    while (!Is("}")) {
      ExpectIdent();
      if (Is(",")) Advance();
    }
    Advance();
    return Finish(node);
  }

  NodeId ParseEventOrError(NodeKind kind) {
    NodeId node = NewNode(kind, CurrentBegin());
    Advance();
    nodes_[node].name = ExpectIdent().span;
    SetSlot(node, 0, ParseParameterList());
    if (Is("anonymous")) Advance();
    Expect(";");
    return Finish(node);
  }

  NodeId ParseStateVariable() {
    NodeId node = NewNode(NodeKind::kStateVariable, CurrentBegin());
    SetSlot(node, 0, ParseTypeName());
    for (;;) {
      if (Is("public") || Is("private") || Is("internal") || Is("external")) {
        Advance();
      } else if (Is("constant") || Is("immutable") || Is("transient")) {
        if (!Is("transient")) nodes_[node].flag = true;
        Advance();
      } else if (Is("override")) {
        Advance();
        if (Is("(")) SkipParens();
      } else {
        break;
      }
    }
    nodes_[node].name = ExpectIdent().span;
    if (Is("=")) {
      Advance();
      SetSlot(node, 1, ParseExpression());
    }
    Expect(";");
    return Finish(node);
  }

  void SkipParens() {
    Expect("(");
    int depth = 1;
    while (depth > 0) {
      if (AtEnd()) Fail("unbalanced parentheses");
      if (Is("(")) ++depth;
      if (Is(")")) --depth;
      Advance();
    }
  }

  NodeId ParseFunction() {
    NodeId node = NewNode(NodeKind::kFunction, CurrentBegin());
    std::string_view keyword = TextOf(Advance());
    FunctionKind kind = FunctionKind::kFunction;
    if (keyword == "constructor") kind = FunctionKind::kConstructor;
    if (keyword == "fallback") kind = FunctionKind::kFallback;
    if (keyword == "receive") kind = FunctionKind::kReceive;
    if (keyword == "modifier") kind = FunctionKind::kModifier;
    nodes_[node].subkind = static_cast<uint8_t>(kind);
    if ((kind == FunctionKind::kFunction || kind == FunctionKind::kModifier) &&
        IsIdent()) {
      nodes_[node].name = Advance().span;
    }
    if (Is("(")) {
      SetSlot(node, 0, ParseParameterList());
    } else if (kind != FunctionKind::kModifier) {
      Fail("expected parameter list");
    }
    for (;;) {
      if (Is("public")) {
        nodes_[node].visibility = static_cast<uint8_t>(Visibility::kPublic);
      } else if (Is("external")) {
        nodes_[node].visibility = static_cast<uint8_t>(Visibility::kExternal);
      } else if (Is("internal")) {
        nodes_[node].visibility = static_cast<uint8_t>(Visibility::kInternal);
      } else if (Is("private")) {
        nodes_[node].visibility = static_cast<uint8_t>(Visibility::kPrivate);
      } else if (Is("pure")) {
        nodes_[node].mutability = static_cast<uint8_t>(Mutability::kPure);
      } else if (Is("view") || Is("constant")) {
        nodes_[node].mutability = static_cast<uint8_t>(Mutability::kView);
      } else if (Is("payable")) {
        nodes_[node].mutability = static_cast<uint8_t>(Mutability::kPayable);
      } else if (Is("virtual")) {
      } else if (Is("override")) {
        Advance();
        if (Is("(")) SkipParens();
        continue;
      } else if (IsIdent() && !Is("returns")) {
        AddChild(node, ParseModifierInvocation());
        continue;
      } else {
        break;
      }
      Advance();
    }
    if (Is("returns")) {
      Advance();
      SetSlot(node, 1, ParseParameterList());
    }
    if (Is(";")) {
      Advance();
    } else {
      SetSlot(node, 2, ParseBlock());
    }
    return Finish(node);
  }

  NodeId ParseModifierInvocation() {
    NodeId node = NewNode(NodeKind::kModifierInvocation, CurrentBegin());
    Span name = ExpectIdent().span;
    while (Is(".")) {
      Advance();
      name.end = ExpectIdent().span.end;
    }
    nodes_[node].name = name;
    if (Is("(")) {
      Advance();
      while (!Is(")")) {
        AddChild(node, ParseExpression());
        if (!Is(")")) Expect(",");
      }
      Advance();
    }
    return Finish(node);
  }

  NodeId ParseParameterList() {
    NodeId node = NewNode(NodeKind::kParameterList, CurrentBegin());
    Expect("(");
    while (!Is(")")) {
      NodeId param = NewNode(NodeKind::kVariableDeclaration, CurrentBegin());
      SetSlot(param, 0, ParseTypeName());
      ParseDataLocation(param);
      if (Is("indexed")) Advance();
      if (IsIdent()) nodes_[param].name = Advance().span;
      AddChild(node, Finish(param));
      if (!Is(")")) Expect(",");
    }
    Advance();
    return Finish(node);
  }

  void ParseDataLocation(NodeId decl) {
    if (Is("memory")) {
      nodes_[decl].location = static_cast<uint8_t>(DataLocation::kMemory);
    } else if (Is("storage")) {
      nodes_[decl].location = static_cast<uint8_t>(DataLocation::kStorage);
    } else if (Is("calldata")) {
      nodes_[decl].location = static_cast<uint8_t>(DataLocation::kCalldata);
    } else {
      return;
    }
    Advance();
  }

  NodeId ParseTypeName() {
    const uint32_t begin = CurrentBegin();
    NodeId type = NewNode(NodeKind::kTypeName, begin);
    if (Is("mapping")) {
      nodes_[type].subkind = static_cast<uint8_t>(TypeNameKind::kMapping);
      Advance();
      Expect("(");
      SetSlot(type, 0, ParseTypeName());
      if (IsIdent()) Advance();
      Expect("=>");
      SetSlot(type, 1, ParseTypeName());
      if (IsIdent()) Advance();
      Expect(")");
    } else if (Is("function")) {
      nodes_[type].subkind = static_cast<uint8_t>(TypeNameKind::kFunction);
      Advance();
      SkipParens();
      while (Is("internal") || Is("external") || Is("pure") || Is("view") ||
             Is("payable")) {
        Advance();
      }
      if (Is("returns")) {
        Advance();
        SkipParens();
      }
    } else if (IsIdent() && IsElementaryTypeName(TextAt())) {
      nodes_[type].subkind = static_cast<uint8_t>(TypeNameKind::kElementary);
      bool address = Is("address");
      Advance();
      if (address && Is("payable")) Advance();
    } else if (IsIdent()) {
      nodes_[type].subkind = static_cast<uint8_t>(TypeNameKind::kUserDefined);
      Advance();
      while (Is(".") && IsIdent(1)) {
        Advance();
        Advance();
      }
    } else {
      Fail("expected type name");
    }
    Finish(type);
    while (Is("[")) {
      NodeId array = NewNode(NodeKind::kTypeName, begin);
      nodes_[array].subkind = static_cast<uint8_t>(TypeNameKind::kArray);
      SetSlot(array, 0, type);
      Advance();
      if (!Is("]")) SetSlot(array, 1, ParseExpression());
      Expect("]");
      type = Finish(array);
    }
    return type;
  }

  // ---- statements ----
  NodeId ParseBlock() {
    NodeId node = NewNode(NodeKind::kBlock, CurrentBegin());
    Expect("{");
    while (!Is("}")) {
      if (AtEnd()) Fail("expected '}'");
      AddChild(node, ParseStatement());
    }
    Advance();
    return Finish(node);
  }

  NodeId ParseStatement() {
    if (Is("{")) return ParseBlock();
    const uint32_t begin = CurrentBegin();
    if (Is("unchecked") && Is("{", 1)) {
      NodeId node = NewNode(NodeKind::kUncheckedBlock, begin);
      Advance();
      SetSlot(node, 0, ParseBlock());
      return Finish(node);
    }
    if (Is("if")) {
      NodeId node = NewNode(NodeKind::kIf, begin);
      Advance();
      Expect("(");
      SetSlot(node, 0, ParseExpression());
      Expect(")");
      SetSlot(node, 1, ParseStatement());
      if (Is("else")) {
        Advance();
        SetSlot(node, 2, ParseStatement());
      }
      return Finish(node);
    }
    if (Is("while")) {
      NodeId node = NewNode(NodeKind::kWhile, begin);
      Advance();
      Expect("(");
      SetSlot(node, 0, ParseExpression());
      Expect(")");
      SetSlot(node, 1, ParseStatement());
      return Finish(node);
    }
    if (Is("do")) {
      NodeId node = NewNode(NodeKind::kDoWhile, begin);
      Advance();
      SetSlot(node, 0, ParseStatement());
      Expect("while");
      Expect("(");
      SetSlot(node, 1, ParseExpression());
      Expect(")");
      Expect(";");
      return Finish(node);
    }
    if (Is("for")) {
      NodeId node = NewNode(NodeKind::kFor, begin);
      Advance();
      Expect("(");
      if (Is(";")) {
        Advance();
      } else {
        SetSlot(node, 0, ParseSimpleStatement());
      }
      if (!Is(";")) SetSlot(node, 1, ParseExpression());
      Expect(";");
      if (!Is(")")) SetSlot(node, 2, ParseExpression());
      Expect(")");
      SetSlot(node, 3, ParseStatement());
      return Finish(node);
    }
    if (Is("break") || Is("continue")) {
      NodeId node =
          NewNode(Is("break") ? NodeKind::kBreak : NodeKind::kContinue, begin);
      Advance();
      Expect(";");
      return Finish(node);
    }
    if (Is("return")) {
      NodeId node = NewNode(NodeKind::kReturn, begin);
      Advance();
      if (!Is(";")) SetSlot(node, 0, ParseExpression());
      Expect(";");
      return Finish(node);
    }
    if (Is("emit")) {
      NodeId node = NewNode(NodeKind::kEmit, begin);
      Advance();
      SetSlot(node, 0, ParseExpression());
      Expect(";");
      return Finish(node);
    }
    if (Is("revert") && IsIdent(1)) {
      NodeId node = NewNode(NodeKind::kRevert, begin);
      Advance();
      SetSlot(node, 0, ParseExpression());
      Expect(";");
      return Finish(node);
    }
    if (Is("_") && Is(";", 1)) {
      NodeId node = NewNode(NodeKind::kPlaceholder, begin);
      Advance();
      Advance();
      return Finish(node);
    }
    if (Is("assembly")) {
      NodeId node = NewNode(NodeKind::kInlineAssembly, begin);
      Advance();
      if (IsKind(TokenKind::kString)) Advance();
      if (Is("(")) SkipParens();
      SkipBraces();
      return Finish(node);
    }
    if (Is("try")) return ParseTry();
    return ParseSimpleStatement();
  }

  NodeId ParseTry() {
    NodeId node = NewNode(NodeKind::kTry, CurrentBegin());
    Advance();
    auto skip_to_block = [&] {
      int depth = 0;
      while (!(depth == 0 && Is("{") && !(IsIdent(1) && Is(":", 2)))) {
        if (AtEnd()) Fail("expected block in try statement");
        if (Is("(") || Is("[")) ++depth;
        if (Is(")") || Is("]")) --depth;
        if (Is("{")) {
          SkipBraces();
          continue;
        }
        Advance();
      }
      SkipBraces();
    };
    skip_to_block();
    if (!Is("catch")) Fail("expected catch clause");
    while (Is("catch")) {
      Advance();
      skip_to_block();
    }
    return Finish(node);
  }

  // Variable declaration or expression statement, including the ';'.
  NodeId ParseSimpleStatement() {
    if (LooksLikeDeclaration()) {
      const size_t saved_pos = pos_;
      const size_t saved_nodes = nodes_.size();
      try {
        return ParseVariableDeclarationStatement();
      } catch (const ParseException&) {
        pos_ = saved_pos;
        nodes_.resize(saved_nodes);
      }
    }
    NodeId node = NewNode(NodeKind::kExpressionStatement, CurrentBegin());
    SetSlot(node, 0, ParseExpression());
    Expect(";");
    return Finish(node);
  }

  bool LooksLikeDeclaration() const {
    if (Is("(")) return true;
    if (!IsIdent()) return false;
    if (Is("payable") || Is("new") || Is("delete") || Is("type")) return false;
    if (IsElementaryTypeName(TextAt()) && Is("(", 1)) return false;
    return true;
  }

  NodeId ParseVariableDeclarationStatement() {
    NodeId node = NewNode(NodeKind::kVariableDeclarationStatement, CurrentBegin());
    if (Is("(")) {
      nodes_[node].flag = true;
      Advance();
      bool any = false;
      while (!Is(")")) {
        if (Is(",")) {
          Advance();
          continue;
        }
        AddChild(node, ParseLocalDeclaration());
        any = true;
        if (!Is(")")) Expect(",");
      }
      Advance();
      if (!any) Fail("empty tuple declaration");
      Expect("=");
      SetSlot(node, 0, ParseExpression());
    } else {
      AddChild(node, ParseLocalDeclaration());
      if (Is("=")) {
        Advance();
        SetSlot(node, 0, ParseExpression());
      }
    }
    Expect(";");
    return Finish(node);
  }

  NodeId ParseLocalDeclaration() {
    NodeId decl = NewNode(NodeKind::kVariableDeclaration, CurrentBegin());
    SetSlot(decl, 0, ParseTypeName());
    ParseDataLocation(decl);
    nodes_[decl].name = ExpectIdent().span;
    return Finish(decl);
  }

  // ---- expressions ----
  NodeId ParseExpression() { return ParseAssignment(); }

  NodeId ParseAssignment() {
    const uint32_t begin = CurrentBegin();
    NodeId left = ParseConditional();
    if (!AtEnd() && tokens_[pos_].kind == TokenKind::kPunct &&
        IsAssignmentOp(TextAt())) {
      NodeId node = NewNode(NodeKind::kAssignment, begin);
      nodes_[node].op = Advance().span;
      SetSlot(node, 0, left);
      SetSlot(node, 1, ParseAssignment());
      return Finish(node);
    }
    return left;
  }

  NodeId ParseConditional() {
    const uint32_t begin = CurrentBegin();
    NodeId condition = ParseBinary(1);
    if (!Is("?")) return condition;
    NodeId node = NewNode(NodeKind::kConditional, begin);
    Advance();
    SetSlot(node, 0, condition);
    SetSlot(node, 1, ParseAssignment());
    Expect(":");
    SetSlot(node, 2, ParseAssignment());
    return Finish(node);
  }

  NodeId ParseBinary(int min_precedence) {
    const uint32_t begin = CurrentBegin();
    NodeId left = ParseUnary();
    for (;;) {
      if (AtEnd() || tokens_[pos_].kind != TokenKind::kPunct) break;
      std::string_view op = TextAt();
      int precedence = BinaryPrecedence(op);
      if (precedence == 0 || precedence < min_precedence) break;
      NodeId node = NewNode(NodeKind::kBinaryOp, begin);
      nodes_[node].op = Advance().span;
      SetSlot(node, 0, left);
      // "**" is right associative; everything else associates left.
      SetSlot(node, 1, ParseBinary(op == "**" ? precedence : precedence + 1));
      left = Finish(node);
    }
    return left;
  }

  NodeId ParseUnary() {
    const uint32_t begin = CurrentBegin();
    if (Is("!") || Is("~") || Is("-") || Is("++") || Is("--") || Is("delete")) {
      NodeId node = NewNode(NodeKind::kUnaryOp, begin);
      nodes_[node].op = Advance().span;
      nodes_[node].flag = true;
      SetSlot(node, 0, ParseUnary());
      return Finish(node);
    }
    return ParsePostfix(ParsePrimary());
  }

  bool AtCallOptions() const {
    return Is("{") && IsIdent(1) && Is(":", 2);
  }

  NodeId ParsePostfix(NodeId expr) {
    const uint32_t begin = nodes_[expr].span.begin;
    for (;;) {
      if (Is("++") || Is("--")) {
        NodeId node = NewNode(NodeKind::kUnaryOp, begin);
        nodes_[node].op = Advance().span;
        SetSlot(node, 0, expr);
        expr = Finish(node);
      } else if (Is(".")) {
        NodeId node = NewNode(NodeKind::kMemberAccess, begin);
        Advance();
        SetSlot(node, 0, expr);
        nodes_[node].name = ExpectIdent().span;
        expr = Finish(node);
      } else if (Is("[")) {
        Advance();
        NodeId start = kNoNode;
        if (!Is(":") && !Is("]")) start = ParseExpression();
        if (Is(":")) {
          NodeId node = NewNode(NodeKind::kIndexRange, begin);
          Advance();
          SetSlot(node, 0, expr);
          SetSlot(node, 1, start);
          if (!Is("]")) SetSlot(node, 2, ParseExpression());
          Expect("]");
          expr = Finish(node);
        } else {
          NodeId node = NewNode(NodeKind::kIndexAccess, begin);
          Expect("]");
          SetSlot(node, 0, expr);
          SetSlot(node, 1, start);
          expr = Finish(node);
        }
      } else if (Is("(")) {
        NodeId node = NewNode(NodeKind::kFunctionCall, begin);
        SetSlot(node, 0, expr);
        Advance();
        if (Is("{")) {
          nodes_[node].flag = true;
          ParseNamedArguments(node);
        } else {
          while (!Is(")")) {
            AddChild(node, ParseExpression());
            if (!Is(")")) Expect(",");
          }
        }
        Expect(")");
        expr = Finish(node);
      } else if (AtCallOptions()) {
        NodeId node = NewNode(NodeKind::kCallOptions, begin);
        SetSlot(node, 0, expr);
        ParseNamedArguments(node);
        expr = Finish(node);
      } else {
        return expr;
      }
    }
  }

  void ParseNamedArguments(NodeId owner) {
    Expect("{");
    while (!Is("}")) {
      NodeId argument = NewNode(NodeKind::kNamedArgument, CurrentBegin());
      nodes_[argument].name = ExpectIdent().span;
      Expect(":");
      SetSlot(argument, 0, ParseExpression());
      AddChild(owner, Finish(argument));
      if (!Is("}")) Expect(",");
    }
    Advance();
  }

  NodeId ParsePrimary() {
    const uint32_t begin = CurrentBegin();
    if (IsKind(TokenKind::kNumber)) {
      NodeId node = NewNode(NodeKind::kNumberLiteral, begin);
      Advance();
      if (IsIdent() && IsNumberUnit(TextAt())) {
        Advance();
        nodes_[node].flag = true;
      }
      return Finish(node);
    }
    if (IsKind(TokenKind::kString)) {
      NodeId node = NewNode(NodeKind::kStringLiteral, begin);
      while (IsKind(TokenKind::kString)) Advance();
      return Finish(node);
    }
    if (Is("true") || Is("false")) {
      NodeId node = NewNode(NodeKind::kBoolLiteral, begin);
      Advance();
      return Finish(node);
    }
    if (Is("(")) {
      NodeId node = NewNode(NodeKind::kTuple, begin);
      Advance();
      while (!Is(")")) {
        if (Is(",")) {
          nodes_[node].flag = true;
          Advance();
          continue;
        }
        AddChild(node, ParseExpression());
        if (!Is(")")) {
          Expect(",");
          nodes_[node].flag = true;
        }
      }
      Advance();
      return Finish(node);
    }
    if (Is("[")) {
      NodeId node = NewNode(NodeKind::kInlineArray, begin);
      Advance();
      while (!Is("]")) {
        AddChild(node, ParseExpression());
        if (!Is("]")) Expect(",");
      }
      Advance();
      return Finish(node);
    }
    if (Is("new")) {
      NodeId node = NewNode(NodeKind::kNew, begin);
      Advance();
      SetSlot(node, 0, ParseTypeName());
      return Finish(node);
    }
    if (IsIdent()) {
      if (Is("payable") || IsElementaryTypeName(TextAt())) {
        NodeId node = NewNode(NodeKind::kElementaryTypeExpression, begin);
        bool address = Is("address");
        Advance();
        if (address && Is("payable")) Advance();
        return Finish(node);
      }
      NodeId node = NewNode(NodeKind::kIdentifier, begin);
      nodes_[node].name = Advance().span;
      return Finish(node);
    }
    Fail("expected expression");
  }

  std::shared_ptr<const std::string> source_;
  std::vector<Token> tokens_;
  std::vector<Node> nodes_;
  size_t pos_ = 0;
};

template <typename Entry>
ParseResult RunParser(std::string text, Entry entry) {
  auto source = std::make_shared<const std::string>(std::move(text));
  try {
    std::vector<Token> tokens = Lex(*source);
    Parser parser(source, std::move(tokens));
    NodeId root = entry(parser);
    std::vector<Node> nodes = parser.TakeNodes();
    return Ast(source, parser.TakeTokens(), std::move(nodes), root);
  } catch (const ParseException& e) {
    return e.failure;
  }
}

}  // namespace

std::string ParseFailure::Describe() const {
  return std::string(kind == Kind::kUnsupported ? "unsupported" : "syntax error") +
         " at " + std::to_string(line) + ":" + std::to_string(column) + ": " +
         message;
}

ParseResult Parse(std::string source) {
  return RunParser(std::move(source),
                   [](Parser& parser) { return parser.ParseSourceUnit(); });
}

ParseResult ParseStatement(std::string text) {
  return RunParser(std::move(text),
                   [](Parser& parser) { return parser.ParseStatementFragment(); });
}

ParseResult ParseExpression(std::string text) {
  return RunParser(std::move(text),
                   [](Parser& parser) { return parser.ParseExpressionFragment(); });
}

std::variant<std::vector<Token>, ParseFailure> Tokenize(const std::string& source) {
  try {
    return Lex(source);
  } catch (const ParseException& e) {
    return e.failure;
  }
}

}  // namespace idol::syntax
