#pragma once

#include <cstdint>
#include <string>

namespace vlsym {

struct SourcePos {
  std::uint32_t line = 1;  // 1-based
  std::uint32_t col = 1;   // 1-based

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
  friend auto operator<=>(const SourcePos&, const SourcePos&) = default;
};

/// Inclusive range of characters in one source file.
struct SourceSpan {
  std::uint32_t file = 0;
  SourcePos begin;
  SourcePos end;

  bool contains(const SourceSpan& inner) const {
    return file == inner.file && begin <= inner.begin && inner.end <= end;
  }
  static SourceSpan cover(const SourceSpan& a, const SourceSpan& b) { return {a.file, a.begin, b.end}; }
};

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  std::string file;
  std::uint32_t line = 1;
  std::uint32_t col_begin = 1;
  std::uint32_t col_end = 1;  // inclusive, >= col_begin

  /// `file:line:col-col: error: message`
  std::string render() const;
  /// `file:line:col-col`
  std::string location() const;
};

}  // namespace vlsym
