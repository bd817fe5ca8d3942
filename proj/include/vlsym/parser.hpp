#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vlsym/ast.hpp"
#include "vlsym/diagnostic.hpp"

namespace vlsym {

enum class TokenKind { Identifier, IntLiteral, DecimalLiteral, Keyword, Punct };

struct Token {
  TokenKind kind = TokenKind::Punct;
  std::string lexeme;
  std::uint32_t line = 1;
  std::uint32_t col = 1;
};

/// Either the whole token stream or the first lexical error.
using TokenizeResult = std::variant<std::vector<Token>, Diagnostic>;

TokenizeResult tokenize(std::string_view source, const std::string& file_name = "<input>");

struct ParseResult {
  Program program;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return diagnostics.empty(); }
};

/// Parses and links the files into one program. Syntax errors and duplicate
/// definitions across files are reported; semantic checks are validate()'s.
ParseResult parse(std::vector<SourceFile> files);
ParseResult parse_source(std::string text, std::string name = "<input>");
/// parse() followed by validate() when parsing succeeded.
ParseResult parse_and_validate(std::vector<SourceFile> files);

}  // namespace vlsym
