#include <array>
#include <cctype>
#include <cstdio>

#include "vlsym/parser.hpp"

namespace vlsym {
namespace {

constexpr std::array kKeywords = {
    "func", "input", "var",    "if",        "else",   "while", "for",  "return",
    "assert", "assume", "choose_int", "equals", "len", "print", "int", "real",
};

constexpr std::array kTwoCharPuncts = {"<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=", "++", "--"};
constexpr std::string_view kOneCharPuncts = "(){}[],;=+-*/<>!:";

bool is_keyword(std::string_view word) {
  for (const char* k : kKeywords) {
    if (word == k) return true;
  }
  return false;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

TokenizeResult tokenize(std::string_view src, const std::string& file_name) {
  std::vector<Token> tokens;
  std::uint32_t line = 1, col = 1;
  std::size_t i = 0;

  auto error = [&](std::string message, std::uint32_t l, std::uint32_t c, std::uint32_t width = 1) {
    return Diagnostic{Severity::Error, std::move(message), file_name, l, c, c + width - 1};
  };
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      const auto start_line = line, start_col = col;
      advance(2);
      bool closed = false;
      while (i < src.size()) {
        if (src[i] == '*' && i + 1 < src.size() && src[i + 1] == '/') {
          advance(2);
          closed = true;
          break;
        }
        advance(1);
      }
      if (!closed) return error("unterminated block comment", start_line, start_col, 2);
      continue;
    }

    Token tok;
    tok.line = line;
    tok.col = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      tok.lexeme = std::string(src.substr(i, j - i));
      tok.kind = is_keyword(tok.lexeme) ? TokenKind::Keyword : TokenKind::Identifier;
      advance(j - i);
      tokens.push_back(std::move(tok));
      continue;
    }
    if (digit(c)) {
      std::size_t j = i;
      while (j < src.size() && digit(src[j])) ++j;
      tok.kind = TokenKind::IntLiteral;
      if (j < src.size() && src[j] == '.') {
        if (j + 1 >= src.size() || !digit(src[j + 1])) {
          return error("malformed decimal literal: expected a digit after '.'", line,
                       col + static_cast<std::uint32_t>(j - i));
        }
        ++j;
        while (j < src.size() && digit(src[j])) ++j;
        tok.kind = TokenKind::DecimalLiteral;
      }
      tok.lexeme = std::string(src.substr(i, j - i));
      advance(j - i);
      tokens.push_back(std::move(tok));
      continue;
    }
    bool matched = false;
    if (i + 1 < src.size()) {
      const std::string_view two = src.substr(i, 2);
      for (const char* p : kTwoCharPuncts) {
        if (two == p) {
          tok.kind = TokenKind::Punct;
          tok.lexeme = std::string(two);
          advance(2);
          tokens.push_back(std::move(tok));
          matched = true;
          break;
        }
      }
    }
    if (matched) continue;
    if (kOneCharPuncts.find(c) != std::string_view::npos) {
      tok.kind = TokenKind::Punct;
      tok.lexeme = std::string(1, c);
      advance(1);
      tokens.push_back(std::move(tok));
      continue;
    }
    if (static_cast<unsigned char>(c) >= 0x20 && static_cast<unsigned char>(c) < 0x7f) {
      return error(std::string("unexpected character '") + c + "'", line, col);
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "0x%02x", static_cast<unsigned char>(c));
    return error(std::string("unexpected byte ") + buf, line, col);
  }
  return tokens;
}

}  // namespace vlsym
