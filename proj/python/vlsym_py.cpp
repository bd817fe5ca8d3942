#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vlsym/cli.hpp"
#include "vlsym/corpus.hpp"
#include "vlsym/engine.hpp"
#include "vlsym/parser.hpp"
#include "vlsym/report.hpp"

namespace py = pybind11;
using namespace vlsym;

namespace {

using Sources = std::vector<std::pair<std::string, std::string>>;

std::vector<SourceFile> to_files(const Sources& sources) {
  std::vector<SourceFile> files;
  for (const auto& [name, text] : sources) files.push_back({name, text});
  return files;
}

/// Parses and validates; raises ValueError carrying every diagnostic.
Program checked(const Sources& sources) {
  ParseResult r = parse_and_validate(to_files(sources));
  if (!r.ok()) {
    std::string msg;
    for (const auto& d : r.diagnostics) msg += d.render() + "\n";
    throw py::value_error(msg);
  }
  return std::move(r.program);
}

SearchConfig make_config(const std::map<std::string, long long>& inputs, std::uint64_t seed) {
  SearchConfig cfg;
  for (const auto& [name, v] : inputs) cfg.overrides[name] = Integer(std::to_string(v));
  cfg.seed = seed;
  return cfg;
}

ChoiceTrail to_trail(const std::vector<std::string>& lines) {
  ChoiceTrail t;
  for (const auto& l : lines) {
    auto d = parse_decision(l);
    if (!d) throw py::value_error("malformed decision '" + l + "'");
    t.push_back(*d);
  }
  return t;
}

std::vector<std::string> from_trail(const ChoiceTrail& t) {
  std::vector<std::string> out;
  for (const auto& d : t) out.push_back(to_string(d));
  return out;
}

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(r.get_str());
}

py::dict witness_dict(const Witness& w, const Engine& e) {
  py::dict d;
  for (const auto& [sym, v] : w) d[py::str(e.symbol_name(sym))] = fraction(v);
  return d;
}

py::dict violation_dict(const Violation& v, const Engine& e) {
  py::dict d;
  d["category"] = to_string(v.category);
  d["certainty"] = to_string(v.certainty);
  d["location"] = v.location;
  d["source"] = v.source;
  d["function"] = v.function;
  d["message"] = v.message;
  d["trail"] = from_trail(v.trail);
  d["witness"] = v.witness ? py::object(witness_dict(*v.witness, e)) : py::object(py::none());
  return d;
}

py::dict trace_dict(const Trace& t, const Engine& e) {
  py::dict d;
  d["output"] = t.output;
  d["trail"] = from_trail(t.trail);
  d["violation"] = t.violation ? py::object(violation_dict(*t.violation, e)) : py::object(py::none());
  d["inputs"] = witness_dict(t.inputs, e);
  return d;
}

std::vector<Rational> rationals(const py::sequence& seq) {
  std::vector<Rational> out;
  for (const auto& x : seq) out.emplace_back(py::str(x).cast<std::string>());
  return out;
}

py::list fractions(const std::vector<Rational>& v) {
  py::list out;
  for (const auto& r : v) out.append(fraction(r));
  return out;
}

}  // namespace

PYBIND11_MODULE(vlsym, m) {
  m.doc() = "Symbolic execution of VL programs";
  m.attr("CORPUS_DIR") = VLSYM_CORPUS_DIR;
  m.attr("CLEAN_CORPUS") = kCleanCorpus;
  m.attr("SWAP_BUG_CORPUS") = kSwapBugCorpus;
  m.attr("COLMAX_BUG_CORPUS") = kColmaxBugCorpus;

  m.def("load", [](const std::string& dir, const std::vector<std::string>& names) {
    Sources out;
    for (auto& f : load_corpus(dir, names)) out.emplace_back(f.name, f.text);
    return out;
  }, py::arg("dir"), py::arg("names"), "Reads source files as (name, text) pairs.");

  m.def("check", [](const Sources& sources) {
    std::vector<std::string> out;
    for (const auto& d : parse_and_validate(to_files(sources)).diagnostics) out.push_back(d.render());
    return out;
  }, py::arg("sources"), "Diagnostics of parsing and validation; empty when the program is well formed.");

  m.def("pretty_print", [](const Sources& sources) { return pretty_print(checked(sources)); },
        py::arg("sources"));

  m.def("verify", [](const Sources& sources, const std::map<std::string, long long>& inputs, unsigned workers,
                     bool first, std::uint64_t max_depth, std::uint64_t seed) {
    Program p = checked(sources);
    SearchConfig cfg = make_config(inputs, seed);
    cfg.workers = workers;
    cfg.stop_at_first = first;
    cfg.max_depth = max_depth;
    Engine e(p, cfg);
    Report r;
    {
      py::gil_scoped_release release;
      r = e.explore();
    }
    py::dict d;
    d["terminal"] = r.stats.terminal;
    d["states"] = r.stats.states;
    d["clean"] = r.clean();
    d["complete"] = r.complete();
    py::list vs;
    for (const auto& v : r.violations) vs.append(violation_dict(v, e));
    d["violations"] = vs;
    d["report"] = render_report(r, e.namer());
    return d;
  }, py::arg("sources"), py::arg("inputs") = std::map<std::string, long long>{}, py::arg("workers") = 1u,
     py::arg("first") = false, py::arg("max_depth") = 1'000'000ULL, py::arg("seed") = 0x5eedULL);

  m.def("replay", [](const Sources& sources, const std::vector<std::string>& trail,
                     const std::map<std::string, long long>& inputs) {
    Program p = checked(sources);
    Engine e(p, make_config(inputs, 0x5eedULL));
    try {
      return trace_dict(e.replay(to_trail(trail)), e);
    } catch (const ReplayMismatch& err) {
      throw py::value_error(err.what());
    }
  }, py::arg("sources"), py::arg("trail"), py::arg("inputs") = std::map<std::string, long long>{});

  m.def("run", [](const Sources& sources, std::uint64_t seed, const std::vector<std::string>& trail,
                  const std::map<std::string, long long>& inputs) {
    Program p = checked(sources);
    Engine e(p, make_config(inputs, seed), Engine::Mode::Concrete);
    try {
      return trace_dict(e.run(to_trail(trail)), e);
    } catch (const ReplayMismatch& err) {
      throw py::value_error(err.what());
    }
  }, py::arg("sources"), py::arg("seed") = 0x5eedULL, py::arg("trail") = std::vector<std::string>{},
     py::arg("inputs") = std::map<std::string, long long>{});

  m.def("enumerate_skeletons", [](std::uint32_t rows, std::uint32_t cols) {
    std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> out;
    for (const auto& s : enumerate_skeletons(rows, cols)) out.emplace_back(s.row_ptr, s.col_ind);
    return out;
  }, py::arg("rows"), py::arg("cols"), "(row_ptr, col_ind) of every CRS structure of the given shape.");

  m.def("crs_matvec", [](const py::sequence& val, const std::vector<std::uint32_t>& col_ind,
                         const std::vector<std::uint32_t>& row_ptr, std::uint32_t rows, std::uint32_t cols,
                         const py::sequence& v) {
    CrsMatrixNative a{rows, cols, rationals(val), col_ind, row_ptr};
    if (!well_formed(skeleton_of(a)) || a.val.size() != a.col_ind.size()) throw py::value_error("malformed CRS matrix");
    auto x = rationals(v);
    if (x.size() != cols) throw py::value_error("vector length differs from the column count");
    return fractions(crs_matvec_native(a, x));
  }, py::arg("val"), py::arg("col_ind"), py::arg("row_ptr"), py::arg("rows"), py::arg("cols"), py::arg("v"));

  m.def("dense_matvec", [](const py::sequence& data, std::uint32_t n, std::uint32_t m_, const py::sequence& v) {
    DenseMatrixNative d{n, m_, rationals(data)};
    auto x = rationals(v);
    if (d.data.size() != static_cast<std::size_t>(n) * m_ || x.size() != m_) throw py::value_error("shape mismatch");
    return fractions(dense_matvec_native(d, x));
  }, py::arg("data"), py::arg("n"), py::arg("m"), py::arg("v"));

  m.def("main", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = run_cli(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command line front end; returns (exit code, stdout, stderr).");
}
