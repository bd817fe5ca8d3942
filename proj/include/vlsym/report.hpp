#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vlsym/engine.hpp"

namespace vlsym {

struct RenderOptions {
  /// Violation blocks shown in full; the rest are only counted.
  std::size_t max_violations = 10;
};

std::string render_witness(const Witness& w, const SymbolNamer& namer);
std::string render_trail(const ChoiceTrail& trail);
std::string render_violation(const Violation& v, std::size_t number, const SymbolNamer& namer);

/// The verify report. Only the line starting with `   time` depends on the
/// machine or on the worker count.
std::string render_report(const Report& report, const SymbolNamer& namer, const RenderOptions& options = {});

/// One line summary per category with violations, for standard error.
std::string render_summary(const Report& report);

std::string render_trace(const Trace& trace, const SymbolNamer& namer);

/// `name=value` pairs, sorted by name: `M_B=4 N=2`.
std::string render_overrides(const std::map<std::string, Integer>& overrides);

struct TrailFile {
  ChoiceTrail trail;
  /// From the `# inputs:` header, when present.
  std::optional<std::map<std::string, Integer>> inputs;
};

std::string write_trail_file(const ChoiceTrail& trail, const std::vector<std::string>& files,
                             const std::map<std::string, Integer>& overrides, const std::string& note = "");
/// Throws std::runtime_error naming the offending line.
TrailFile read_trail_file(const std::string& text);

/// Parses `NAME=VALUE` of an `-input` flag.
std::optional<std::pair<std::string, Integer>> parse_override(const std::string& text);

}  // namespace vlsym
