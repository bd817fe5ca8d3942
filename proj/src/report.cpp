#include "vlsym/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace vlsym {

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

std::optional<Integer> parse_integer(const std::string& s) {
  std::size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') return std::nullopt;
  }
  Integer v;
  if (v.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) return std::nullopt;
  return v;
}

}  // namespace

std::optional<std::pair<std::string, Integer>> parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) return std::nullopt;
  std::string name = text.substr(0, eq);
  if (!is_identifier(name)) return std::nullopt;
  auto value = parse_integer(text.substr(eq + 1));
  if (!value) return std::nullopt;
  return std::pair{std::move(name), std::move(*value)};
}

std::string render_overrides(const std::map<std::string, Integer>& overrides) {
  std::string out;
  for (const auto& [name, value] : overrides) {
    if (!out.empty()) out += ' ';
    out += name + "=" + value.get_str();
  }
  return out;
}

std::string render_witness(const Witness& w, const SymbolNamer& namer) {
  std::string out;
  for (const auto& [sym, value] : w) {
    if (!out.empty()) out += ", ";
    out += namer(sym) + " = " + to_string(value);
  }
  return out;
}

std::string render_trail(const ChoiceTrail& trail) {
  std::string out;
  for (const auto& d : trail) {
    if (!out.empty()) out += "; ";
    out += to_string(d);
  }
  return out.empty() ? "(empty)" : out;
}

std::string render_violation(const Violation& v, std::size_t number, const SymbolNamer& namer) {
  std::ostringstream os;
  os << "Violation " << number << " encountered at depth " << v.depth << ":\n";
  os << "(property: " << to_string(v.category) << ", certainty: " << to_string(v.certainty) << ") at\n";
  os << v.location << " | " << v.source << "\n";
  os << "  in function " << v.function << ": " << v.message << "\n";
  if (v.witness) os << "  witness: " << (v.witness->empty() ? "(any input)" : render_witness(*v.witness, namer)) << "\n";
  os << "  trail: " << render_trail(v.trail) << "\n";
  return os.str();
}

std::string render_report(const Report& report, const SymbolNamer& namer, const RenderOptions& options) {
  std::ostringstream os;
  const std::size_t shown = std::min(options.max_violations, report.violations.size());
  for (std::size_t i = 0; i < shown; ++i) os << render_violation(report.violations[i], i, namer) << "\n";
  if (shown < report.violations.size()) {
    os << "(" << report.violations.size() - shown << " more violation(s) not shown)\n\n";
  }

  os << "=== Source files ===\n";
  for (const auto& f : report.files) os << f << "\n";
  os << "\n=== Command ===\n" << report.command << "\n";

  const SearchStats& s = report.stats;
  char time[64];
  std::snprintf(time, sizeof time, "%.2f", s.seconds);
  os << "\n=== Stats ===\n";
  os << "   time (s)            : " << time << " (workers: " << s.workers << ")\n";
  os << "   states              : " << s.states << "\n";
  os << "   terminal paths      : " << s.terminal << "\n";
  os << "   pruned branches     : " << s.pruned << "\n";
  os << "   empty choices       : " << s.dead_ends << "\n";
  os << "   solver calls        : " << s.solver_calls << "\n";
  os << "   max trail depth     : " << s.max_depth << "\n";
  os << "   depth-limited paths : " << s.depth_limited << "\n";
  os << "   violations          : " << report.violations.size() << "\n";

  os << "\n=== Result ===\n";
  if (report.clean()) {
    os << "The standard properties hold for all executions.\n";
  } else if (report.violations.empty()) {
    os << "The search did not complete; no violation was found on the paths explored.\n";
  } else {
    os << "The program MAY NOT be correct.\n";
  }
  if (s.stopped) os << "Search stopped at the first violation.\n";
  const std::size_t budget = report.count(Category::EnumBudget);
  if (budget > 0) os << "Enumeration budget exceeded on " << budget << " path(s).\n";
  if (s.depth_limited > 0) os << "Depth limit reached on " << s.depth_limited << " path(s).\n";
  os << "\n";
  for (Category c : kReportedCategories) {
    const std::size_t n = report.count(c);
    os << report.mark(c) << " " << to_string(c);
    if (n > 0) os << " (" << n << ")";
    os << "\n";
  }
  os << "\nAll errors marked with '+' are absent on all executions.\n";
  return os.str();
}

std::string render_summary(const Report& report) {
  std::ostringstream os;
  if (!report.violations.empty()) {
    os << report.violations.size() << " violation(s) found\n";
    for (Category c : {Category::AssertionViolation, Category::OutOfBounds, Category::DivisionByZero,
                       Category::ReadUndefined, Category::WriteToInput, Category::EnumBudget}) {
      const std::size_t n = report.count(c);
      if (n == 0) continue;
      const auto it = std::find_if(report.violations.begin(), report.violations.end(),
                                   [&](const Violation& v) { return v.category == c; });
      os << "  " << to_string(c) << ": " << n << " (first at " << it->location << ", "
         << to_string(it->certainty) << ")\n";
    }
  }
  if (!report.complete()) os << "search incomplete\n";
  return os.str();
}

std::string render_trace(const Trace& trace, const SymbolNamer& namer) {
  std::ostringstream os;
  os << "=== Trace ===\n";
  for (const auto& step : trace.steps) {
    os << step.location << " | " << step.source << "\n";
    if (!step.snapshot.empty()) os << "      " << step.snapshot << "\n";
  }
  os << "\n=== Output ===\n";
  for (const auto& line : trace.output) os << line << "\n";
  os << "\n=== Outcome ===\n";
  if (trace.violation) {
    os << render_violation(*trace.violation, 0, namer);
  } else {
    os << "main returned after " << trace.final_state.steps + 1 << " step(s)\n";
  }
  os << "trail: " << render_trail(trace.trail) << "\n";
  return os.str();
}

std::string write_trail_file(const ChoiceTrail& trail, const std::vector<std::string>& files,
                             const std::map<std::string, Integer>& overrides, const std::string& note) {
  std::ostringstream os;
  os << "# vlsym trail\n# files:";
  for (const auto& f : files) os << " " << f;
  os << "\n# inputs: " << render_overrides(overrides) << "\n";
  if (!note.empty()) os << "# " << note << "\n";
  for (const auto& d : trail) os << to_string(d) << "\n";
  return os.str();
}

TrailFile read_trail_file(const std::string& text) {
  TrailFile tf;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const std::string body = line.substr(first + 1);
      const std::string key = " inputs:";
      if (body.compare(0, key.size(), key) == 0) {
        std::map<std::string, Integer> inputs;
        std::istringstream words(body.substr(key.size()));
        std::string w;
        while (words >> w) {
          auto ov = parse_override(w);
          if (!ov) throw std::runtime_error("line " + std::to_string(number) + ": malformed input '" + w + "'");
          inputs[ov->first] = ov->second;
        }
        tf.inputs = std::move(inputs);
      }
      continue;
    }
    auto d = parse_decision(line);
    if (!d) throw std::runtime_error("line " + std::to_string(number) + ": malformed decision '" + line + "'");
    tf.trail.push_back(std::move(*d));
  }
  return tf;
}

}  // namespace vlsym
