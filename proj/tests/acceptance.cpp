// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "vlsym/cli.hpp"
#include "vlsym/report.hpp"

using namespace vlsym;
using namespace testing;

namespace {

constexpr double kCleanTimeLimitSeconds = 60.0;
constexpr int kRunsPerSkeleton = 3;
constexpr int kSolverCases = 10'000;
constexpr int kAgreementPoints = 64;
constexpr double kFuzzSeconds = 60.0;

// Input indices of the driver: N_B, M_B, N, M, V, A.
constexpr std::uint32_t kN = 2, kM = 3, kV = 4, kA = 5;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

Rational at(const Witness& w, SymConst s) {
  auto it = w.find(s);
  return it == w.end() ? Rational(0) : it->second;
}

std::string without_time(const std::string& report) {
  std::string out, line;
  std::istringstream in(report);
  while (std::getline(in, line)) {
    if (line.rfind("   time", 0) != 0) out += line + "\n";
  }
  return out;
}

Outcome clean_corpus() {
  Outcome o;
  Report r = explore(load_program(kCleanCorpus), SearchConfig{});
  o.require(r.stats.terminal == 682, "terminal paths " + std::to_string(r.stats.terminal));
  o.require(r.violations.empty(), std::to_string(r.violations.size()) + " violations");
  o.require(r.clean(), "report is not clean");
  o.require(r.stats.seconds < kCleanTimeLimitSeconds, "took " + std::to_string(r.stats.seconds) + " s");
  o.detail = o.pass ? "682 paths, 0 violations, " + std::to_string(r.stats.seconds) + " s" : o.detail;
  return o;
}

Outcome wider_bound() {
  Outcome o;
  SearchConfig cfg;
  cfg.overrides["M_B"] = 4;
  Report r = explore(load_program(kCleanCorpus), cfg);
  o.require(r.stats.terminal == 5050, "terminal paths " + std::to_string(r.stats.terminal));
  o.require(r.clean(), std::to_string(r.violations.size()) + " violations");
  if (o.pass) o.detail = "5050 paths, 0 violations";
  return o;
}

Outcome swap_mutant() {
  Outcome o;
  Program p = load_program(kSwapBugCorpus);
  Engine e(p, SearchConfig{});
  Report r = e.explore();
  o.require(!r.violations.empty(), "no violation found");
  if (!o.pass) return o;
  const Violation& v = r.violations.front();
  o.require(v.category == Category::AssertionViolation, std::string("category ") + to_string(v.category));
  o.require(v.certainty == Certainty::Proveable, "certainty MAYBE");
  o.require(v.witness.has_value(), "no witness");
  if (!o.pass) return o;

  // The witness, pushed through the reference product, disagrees with what
  // the kernel computed on the same path.
  const Witness& w = *v.witness;
  const auto n = static_cast<std::uint32_t>(at(w, {kN, 0}).get_num().get_ui());
  const auto m = static_cast<std::uint32_t>(at(w, {kM, 0}).get_num().get_ui());
  Trace t = e.replay(v.trail);
  Skeleton s = skeleton_in(e, t.final_state, n, m);
  o.require(well_formed(s), "path builds a malformed matrix");
  if (!o.pass) return o;
  std::vector<Rational> vals, vec, actual;
  for (std::uint32_t k = 0; k < s.nonzeros(); ++k) vals.push_back(at(w, {kA, k}));
  for (std::uint32_t k = 0; k < m; ++k) vec.push_back(at(w, {kV, k}));
  const auto expected = dense_matvec_native(crs_to_dense_native(with_values(s, vals)), vec);
  Witness full = w;
  for (std::uint32_t k = 0; k < 16; ++k) {
    full.emplace(SymConst{kA, k}, 0);
    full.emplace(SymConst{kV, k}, 0);
  }
  for (const auto& poly : real_array(e, t.final_state, "actual")) actual.push_back(eval_poly(poly, full));
  o.require(actual != expected, "witness does not separate actual from expected");

  // The smallest counterexample: one row, one column, one stored entry.
  Skeleton minimal{1, 1, {0, 1}, {0}};
  o.require(v.trail == driver_trail(minimal), "first violation is not at n=m=1 with one entry: " + render_trail(v.trail));
  if (o.pass) {
    o.detail = std::to_string(r.violations.size()) + " violations, first with witness " + render_witness(w, e.namer());
  }
  return o;
}

Outcome colmax_mutant() {
  Outcome o;
  Report r = explore(load_program(kColmaxBugCorpus), SearchConfig{});
  o.require(!r.violations.empty(), "no violation found");
  if (!o.pass) return o;
  const Violation& v = r.violations.front();
  o.require(v.category == Category::OutOfBounds, std::string("category ") + to_string(v.category));
  o.require(v.source == "v[j]", "located at '" + v.source + "'");
  o.require(v.location.rfind("sparse.vl:", 0) == 0, "located in " + v.location);
  o.require(r.count(Category::OutOfBounds) == r.violations.size(), "other categories reported");
  if (o.pass) o.detail = "OUT_OF_BOUNDS at " + v.location + " " + v.source;
  return o;
}

Outcome concrete_runs() {
  Outcome o;
  Program p = load_program(kCleanCorpus);
  std::size_t runs = 0;
  for (std::uint32_t n = 1; n <= 3 && o.pass; ++n) {
    for (std::uint32_t m = 1; m <= 3 && o.pass; ++m) {
      for (const auto& s : enumerate_skeletons(n, m)) {
        for (int k = 0; k < kRunsPerSkeleton; ++k) {
          SearchConfig cfg;
          cfg.seed = 1000 * runs + 17;
          Engine e(p, cfg, Engine::Mode::Concrete);
          Trace t = e.run(driver_trail(s));
          ++runs;
          o.require(!t.violation, "violation on " + render_trail(t.trail));
          if (!o.pass) return o;
          std::vector<Rational> vals, vec, actual, expected;
          for (std::uint32_t i = 0; i < s.nonzeros(); ++i) vals.push_back(at(t.inputs, {kA, i}));
          for (std::uint32_t j = 0; j < m; ++j) vec.push_back(at(t.inputs, {kV, j}));
          for (const auto& q : real_array(e, t.final_state, "actual")) actual.push_back(q.constant_term());
          for (const auto& q : real_array(e, t.final_state, "expected")) expected.push_back(q.constant_term());
          const auto crs = with_values(s, vals);
          o.require(actual == crs_matvec_native(crs, vec), "kernel differs from native on " + render_trail(t.trail));
          o.require(expected == dense_matvec_native(crs_to_dense_native(crs), vec),
                    "reference differs from native on " + render_trail(t.trail));
          if (!o.pass) return o;
        }
      }
    }
  }
  o.require(runs == 682 * kRunsPerSkeleton, "ran " + std::to_string(runs));
  if (o.pass) o.detail = std::to_string(runs) + " runs match the native kernels";
  return o;
}

Outcome solver_properties() {
  Outcome o;
  std::mt19937_64 rng(2024);
  int sat = 0;
  for (int i = 0; i < kSolverCases && o.pass; ++i) {
    PathCondition pc = random_pc(rng, std::uniform_int_distribution<int>(0, 5)(rng));
    Verdict v = pc_sat(pc);
    if (!v.sat()) continue;
    ++sat;
    for (const auto& a : pc.atoms()) o.require(holds(a, v.witness), "witness fails " + render(a));
  }
  const auto pool = symbol_pool();
  for (int i = 0; i < kSolverCases && o.pass; ++i) {
    Poly a = random_poly(rng, pool), b = random_poly(rng, pool), c = random_poly(rng, pool);
    o.require(a + b == b + a && a * b == b * a, "commutativity");
    o.require((a + b) + c == a + (b + c) && (a * b) * c == a * (b * c), "associativity");
    o.require(a * (b + c) == a * b + a * c, "distributivity");
    o.require((a - a).is_zero() && a * Poly(Rational(1)) == a && a + Poly() == a, "identities");
  }
  int zero_cases = 0, nonzero_cases = 0;
  for (int i = 0; i < kSolverCases && o.pass; ++i) {
    Poly a = random_poly(rng, pool), b = random_poly(rng, pool);
    // Half the pairs are equal functions written differently.
    const bool same = i % 2 == 0;
    Poly lhs = same ? (a + b) * (a - b) : a;
    Poly rhs = same ? a * a - b * b : b;
    const bool zero = (lhs - rhs).is_zero();
    bool agree = true;
    for (int k = 0; k < kAgreementPoints && agree; ++k) {
      auto point = random_point(rng, pool);
      agree = eval_poly(lhs, point) == eval_poly(rhs, point);
    }
    o.require(zero == agree, "zero test disagrees with evaluation");
    (zero ? zero_cases : nonzero_cases)++;
  }
  o.require(zero_cases > 0 && nonzero_cases > 0, "one direction untested");
  if (o.pass) {
    o.detail = std::to_string(sat) + " witnesses checked, ring axioms and zero test on " +
               std::to_string(kSolverCases) + " cases each";
  }
  return o;
}

Outcome worker_independence() {
  Outcome o;
  for (const auto* set : {&kCleanCorpus, &kSwapBugCorpus, &kColmaxBugCorpus}) {
    std::string reports[2];
    int codes[2];
    const char* workers[2] = {"1", "4"};
    for (int i = 0; i < 2; ++i) {
      std::vector<std::string> args{"verify", "--workers", workers[i], "--corpus-dir", corpus_dir()};
      args.insert(args.end(), set->begin(), set->end());
      std::ostringstream out, err;
      codes[i] = run_cli(args, out, err);
      reports[i] = out.str();
    }
    o.require(codes[0] == codes[1], "exit codes differ for " + set->back());
    o.require(without_time(reports[0]) == without_time(reports[1]), "reports differ for " + set->back());
  }
  if (o.pass) o.detail = "reports identical apart from the time line";
  return o;
}

Outcome parser_robustness() {
  Outcome o;
  for (const auto* set : {&kCleanCorpus, &kSwapBugCorpus, &kColmaxBugCorpus}) {
    ParseResult r = parse(load_corpus(corpus_dir(), *set));
    o.require(r.ok(), "corpus does not parse");
    if (!o.pass) return o;
    ParseResult again = parse_source(pretty_print(r.program));
    o.require(again.ok() && structurally_equal(r.program, again.program), "round trip changes " + set->back());
  }
  std::mt19937_64 rng(7);
  const std::string tokens[] = {"func", "main", "(", ")", "{", "}", "var", "int", "real", "x", "=", "1", ";",
                                "while", "if", "else", "[", "]", "input", "assume", "choose_int", "+", "<",
                                "&&", "2.5", ",", "for", "return", ":", "len", "equals", "/*", "//", "\n"};
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t inputs = 0;
  while (o.pass && std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < kFuzzSeconds) {
    std::string src;
    const int n = std::uniform_int_distribution<int>(0, 200)(rng);
    const bool bytes = inputs % 2 == 0;
    for (int k = 0; k < n; ++k) {
      if (bytes) {
        src += static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
      } else {
        src += tokens[std::uniform_int_distribution<std::size_t>(0, std::size(tokens) - 1)(rng)];
        src += ' ';
      }
    }
    try {
      std::vector<SourceFile> files{{"fuzz.vl", src}};
      ParseResult r = parse_and_validate(std::move(files));
      if (r.ok()) {
        ParseResult again = parse_source(pretty_print(r.program));
        o.require(again.ok() && structurally_equal(r.program, again.program), "round trip fails on fuzzed input");
      }
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    ++inputs;
  }
  if (o.pass) o.detail = std::to_string(inputs) + " fuzzed inputs, corpus round trip holds";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"clean corpus: 682 paths, no violation, under 60 s", clean_corpus},
      {"M_B=4: 5050 paths, no violation", wider_bound},
      {"swap mutant: proveable assertion violation with separating witness", swap_mutant},
      {"colmax mutant: out of bounds at v[j]", colmax_mutant},
      {"concrete runs match the native kernels", concrete_runs},
      {"solver: witnesses, ring axioms, zero test", solver_properties},
      {"reports independent of the worker count", worker_independence},
      {"parser: fuzzing and pretty-print round trip", parser_robustness},
  };
  int failed = 0, number = 0;
  for (const auto& [name, check] : criteria) {
    ++number;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << number << "] " << name << " (" << o.detail << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
