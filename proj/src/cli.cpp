#include "vlsym/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "vlsym/engine.hpp"
#include "vlsym/parser.hpp"
#include "vlsym/report.hpp"

namespace vlsym {

namespace {

namespace fs = std::filesystem;

struct UsageError {
  std::string message;
};

struct Options {
  std::vector<std::string> files;
  std::map<std::string, Integer> overrides;
  std::uint64_t max_depth = 1'000'000;
  std::uint64_t budget = 1'000'000;
  unsigned workers = 1;
  bool first = false;
  std::uint64_t seed = 0x5eedULL;
  std::string emit_trails;
  std::string corpus_dir;
  std::string trail;
  std::size_t show = 10;
};

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Reads the source files; names stay as given on the command line.
std::vector<SourceFile> load_files(const Options& opt) {
  std::vector<SourceFile> files;
  for (const auto& name : opt.files) {
    std::optional<std::string> text = read_file(name);
    if (!text && !opt.corpus_dir.empty()) text = read_file(fs::path(opt.corpus_dir) / name);
    if (!text) throw UsageError{"cannot read '" + name + "'"};
    files.push_back({name, std::move(*text)});
  }
  return files;
}

SearchConfig make_config(const Options& opt) {
  SearchConfig cfg;
  cfg.overrides = opt.overrides;
  cfg.max_depth = opt.max_depth;
  cfg.budget = opt.budget;
  cfg.workers = opt.workers;
  cfg.stop_at_first = opt.first;
  cfg.seed = opt.seed;
  return cfg;
}

/// The command as typed, without the worker count.
std::string echo_command(const std::vector<std::string>& args) {
  std::string out = "vlsym";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--workers") {
      ++i;
      continue;
    }
    if (args[i].rfind("--workers=", 0) == 0) continue;
    out += " " + args[i];
  }
  return out;
}

int verify(const Options& opt, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ParseResult parsed = parse_and_validate(load_files(opt));
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics) err << d.render() << "\n";
    return kExitUsage;
  }
  Engine engine(parsed.program, make_config(opt));
  Report report = engine.explore();
  report.command = echo_command(args);
  RenderOptions ro;
  ro.max_violations = opt.show;
  out << render_report(report, engine.namer(), ro);
  if (!report.clean()) err << render_summary(report);

  if (!opt.emit_trails.empty()) {
    fs::create_directories(opt.emit_trails);
    auto emit = [&](const std::string& name, const ChoiceTrail& trail, const std::string& note) {
      std::ofstream f(fs::path(opt.emit_trails) / name);
      f << write_trail_file(trail, opt.files, opt.overrides, note);
      if (!f) throw UsageError{"cannot write trail file '" + name + "'"};
    };
    for (std::size_t i = 0; i < report.violations.size(); ++i) {
      const Violation& v = report.violations[i];
      emit("violation_" + std::to_string(i) + ".trail", v.trail,
           std::string(to_string(v.category)) + " at " + v.location);
    }
    if (report.first_terminal) emit("terminal.trail", *report.first_terminal, "first terminal path");
  }
  return report.clean() ? kExitClean : kExitViolation;
}

int replay(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto text = read_file(opt.trail);
  if (!text) throw UsageError{"cannot read trail file '" + opt.trail + "'"};
  TrailFile tf;
  try {
    tf = read_trail_file(*text);
  } catch (const std::runtime_error& e) {
    throw UsageError{opt.trail + ": " + e.what()};
  }
  if (tf.inputs && *tf.inputs != opt.overrides) {
    err << "vlsym: trail was recorded with inputs '" << render_overrides(*tf.inputs) << "' but replay uses '"
        << render_overrides(opt.overrides) << "'\n";
    return kExitUsage;
  }
  ParseResult parsed = parse_and_validate(load_files(opt));
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics) err << d.render() << "\n";
    return kExitUsage;
  }
  Engine engine(parsed.program, make_config(opt));
  Trace trace;
  try {
    trace = engine.replay(tf.trail);
  } catch (const ReplayMismatch& e) {
    err << "vlsym: trail does not match the program: " << e.what() << "\n";
    return kExitUsage;
  }
  out << render_trace(trace, engine.namer());
  return trace.violation ? kExitViolation : kExitClean;
}

int run(const Options& opt, std::ostream& out, std::ostream& err) {
  ChoiceTrail prefix;
  if (!opt.trail.empty()) {
    const auto text = read_file(opt.trail);
    if (!text) throw UsageError{"cannot read trail file '" + opt.trail + "'"};
    try {
      prefix = read_trail_file(*text).trail;
    } catch (const std::runtime_error& e) {
      throw UsageError{opt.trail + ": " + e.what()};
    }
  }
  ParseResult parsed = parse_and_validate(load_files(opt));
  if (!parsed.ok()) {
    for (const auto& d : parsed.diagnostics) err << d.render() << "\n";
    return kExitUsage;
  }
  Engine engine(parsed.program, make_config(opt), Engine::Mode::Concrete);
  Trace trace;
  try {
    trace = engine.run(prefix);
  } catch (const ReplayMismatch& e) {
    err << "vlsym: " << e.what() << "\n";
    return kExitUsage;
  }
  out << "=== Output ===\n";
  for (const auto& line : trace.output) out << line << "\n";
  out << "\n=== Inputs ===\n" << render_witness(trace.inputs, engine.namer()) << "\n";
  out << "\n=== Outcome ===\n";
  if (trace.violation) {
    out << render_violation(*trace.violation, 0, engine.namer());
    err << to_string(trace.violation->category) << " at " << trace.violation->location << "\n";
  } else {
    out << "main returned\n";
  }
  out << "trail: " << render_trail(trace.trail) << "\n";
  return trace.violation ? kExitViolation : kExitClean;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  // `-input<NAME>=<k>` does not fit CLI11's option syntax; take it out first.
  std::vector<std::string> rest;
  for (const auto& a : args) {
    if (a.rfind("-input", 0) == 0 && a.rfind("--", 0) != 0) {
      auto ov = parse_override(a.substr(6));
      if (!ov) {
        err << "vlsym: malformed override '" << a << "' (expected -input<NAME>=<integer>)\n";
        return kExitUsage;
      }
      opt.overrides[ov->first] = ov->second;
      continue;
    }
    rest.push_back(a);
  }

  CLI::App app{"Symbolic execution of VL programs", "vlsym"};
  app.require_subcommand(1);
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("files", opt.files, "VL source files, linked in order")->required();
    cmd->add_option("--max-depth", opt.max_depth, "maximum statements executed per path");
    cmd->add_option("--budget", opt.budget, "maximum integer assignments enumerated per query");
    cmd->add_option("--seed", opt.seed, "seed for sampling and random choices");
    cmd->add_option("--corpus-dir", opt.corpus_dir, "directory searched for files not found as given");
  };
  CLI::App* verify_cmd = app.add_subcommand("verify", "explore every path and report violations");
  add_common(verify_cmd);
  verify_cmd->add_option("--workers", opt.workers, "parallel workers")->check(CLI::Range(1u, 256u));
  verify_cmd->add_flag("--first", opt.first, "stop at the first violation");
  verify_cmd->add_option("--emit-trails", opt.emit_trails, "write a trail file per violation into DIR");
  verify_cmd->add_option("--show", opt.show, "violations shown in full");
  CLI::App* replay_cmd = app.add_subcommand("replay", "re-execute the path recorded in a trail file");
  add_common(replay_cmd);
  replay_cmd->add_option("--trail", opt.trail, "trail file")->required();
  CLI::App* run_cmd = app.add_subcommand("run", "execute one random concrete path");
  add_common(run_cmd);
  run_cmd->add_option("--trail", opt.trail, "trail file whose decisions are taken first");

  std::vector<std::string> reversed(rest.rbegin(), rest.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitClean;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitClean;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (verify_cmd->parsed()) return verify(opt, args, out, err);
    if (replay_cmd->parsed()) return replay(opt, out, err);
    return run(opt, out, err);
  } catch (const UsageError& e) {
    err << "vlsym: " << e.message << "\n";
  } catch (const EngineError& e) {
    err << "vlsym: " << e.what() << "\n";
  } catch (const fs::filesystem_error& e) {
    err << "vlsym: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace vlsym
