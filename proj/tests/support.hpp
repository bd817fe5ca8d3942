// Helpers shared by the unit tests and the acceptance suite: random
// generators, an independent polynomial evaluator, and the decision trail
// the bundled driver takes for a given matrix skeleton.
#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "vlsym/corpus.hpp"
#include "vlsym/engine.hpp"
#include "vlsym/parser.hpp"
#include "vlsym/solver.hpp"

namespace testing {

using namespace vlsym;

inline Rational random_rational(std::mt19937_64& rng, long range = 9, long max_den = 7) {
  std::uniform_int_distribution<long> num(-range, range), den(1, max_den);
  return make_rational(Integer(num(rng)), Integer(den(rng)));
}

inline Rational random_nonzero_rational(std::mt19937_64& rng) {
  Rational r;
  do r = random_rational(rng); while (r == 0);
  return r;
}

/// A polynomial kept as an unsimplified list of terms.
struct RawTerm {
  Rational coeff;
  std::vector<SymConst> factors;
};
using RawPoly = std::vector<RawTerm>;

inline std::vector<SymConst> symbol_pool(std::uint32_t inputs = 3, std::uint32_t cells = 2) {
  std::vector<SymConst> pool;
  for (std::uint32_t i = 0; i < inputs; ++i) {
    for (std::uint32_t k = 0; k < cells; ++k) pool.push_back(SymConst{i, k});
  }
  return pool;
}

inline RawPoly random_raw(std::mt19937_64& rng, const std::vector<SymConst>& pool, int max_terms = 5,
                          int max_degree = 3) {
  RawPoly p;
  const int terms = std::uniform_int_distribution<int>(0, max_terms)(rng);
  for (int t = 0; t < terms; ++t) {
    RawTerm term{random_rational(rng), {}};
    const int deg = std::uniform_int_distribution<int>(0, max_degree)(rng);
    for (int d = 0; d < deg; ++d) {
      term.factors.push_back(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
    }
    p.push_back(std::move(term));
  }
  return p;
}

inline Poly build(const RawPoly& raw) {
  Poly out;
  for (const auto& t : raw) {
    Poly term(t.coeff);
    for (const auto& s : t.factors) term = term * Poly::symbol(s);
    out += term;
  }
  return out;
}

/// Direct evaluation of the unsimplified term list.
inline Rational naive_eval(const RawPoly& raw, const std::map<SymConst, Rational>& point) {
  Rational sum = 0;
  for (const auto& t : raw) {
    Rational prod = t.coeff;
    for (const auto& s : t.factors) prod *= point.at(s);
    sum += prod;
  }
  return sum;
}

inline Poly random_poly(std::mt19937_64& rng, const std::vector<SymConst>& pool, int max_terms = 5,
                        int max_degree = 3) {
  return build(random_raw(rng, pool, max_terms, max_degree));
}

inline std::map<SymConst, Rational> random_point(std::mt19937_64& rng, const std::vector<SymConst>& pool) {
  std::map<SymConst, Rational> point;
  for (const auto& s : pool) point[s] = random_rational(rng, 1000, 97);
  return point;
}

inline Poly sym(std::uint32_t input, std::uint32_t index = 0) { return Poly::symbol(SymConst{input, index}); }
inline Poly num(long n) { return Poly(Rational(n)); }

inline Atom int_atom(Poly lhs, Rel rel, Poly rhs) { return make_atom(lhs - rhs, rel, Sort::Int); }
inline Atom real_atom(Poly lhs, Rel rel, Poly rhs) { return make_atom(lhs - rhs, rel, Sort::Real); }

// Random conjunctions over two bounded ints and three reals.
inline PathCondition random_pc(std::mt19937_64& rng, int atoms) {
  const std::vector<SymConst> ints{{0, 0}, {1, 0}};
  const std::vector<SymConst> reals{{2, 0}, {2, 1}, {2, 2}};
  PathCondition pc;
  for (const auto& s : ints) {
    pc.add(int_atom(num(std::uniform_int_distribution<long>(-3, 0)(rng)), Rel::Le, Poly::symbol(s)));
    pc.add(int_atom(Poly::symbol(s), Rel::Le, num(std::uniform_int_distribution<long>(0, 3)(rng))));
  }
  const Rel rels[] = {Rel::Lt, Rel::Le, Rel::Eq, Rel::Ne};
  for (int i = 0; i < atoms; ++i) {
    const Rel rel = rels[std::uniform_int_distribution<int>(0, 3)(rng)];
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
      Poly p = num(std::uniform_int_distribution<long>(-3, 3)(rng));
      for (const auto& s : ints) p += num(std::uniform_int_distribution<long>(-2, 2)(rng)) * Poly::symbol(s);
      pc.add(make_atom(p, rel, Sort::Int));
    } else {
      pc.add(make_atom(random_poly(rng, reals, 3, 2), rel, Sort::Real));
    }
  }
  return pc;
}

/// Decision trail of the bundled driver for one skeleton: M and N are fixed
/// first (M's extent is needed first), then one choose_int per row for the
/// row length, then one per stored column inside strict_inc.
inline ChoiceTrail driver_trail(const Skeleton& s, std::uint32_t n_bound = 3, std::uint32_t m_bound = 3) {
  ChoiceTrail t;
  auto z = [&](const std::string& name, std::uint32_t value, std::uint32_t bound) {
    Decision d;
    d.kind = Decision::Kind::Concretize;
    d.name = name;
    d.value = value;
    d.fanout = bound;
    t.push_back(d);
  };
  auto c = [&](std::uint64_t index, std::uint64_t fanout) {
    Decision d;
    d.kind = Decision::Kind::Choose;
    d.index = index;
    d.fanout = fanout;
    t.push_back(d);
  };
  z("M", s.cols, m_bound);
  z("N", s.rows, n_bound);
  for (std::uint32_t i = 0; i < s.rows; ++i) c(s.row_ptr[i + 1] - s.row_ptr[i], s.cols + 1);
  for (std::uint32_t i = 0; i < s.rows; ++i) {
    const long len = s.row_ptr[i + 1] - s.row_ptr[i];
    const long max = static_cast<long>(s.cols) - 1;
    for (long k = 0; k < len; ++k) {
      const long a = k == 0 ? 0 : static_cast<long>(s.col_ind[s.row_ptr[i] + k - 1]) + 1;
      const long b = max - len + k + 1;
      c(static_cast<std::uint64_t>(s.col_ind[s.row_ptr[i] + k] - a), static_cast<std::uint64_t>(b - a + 1));
    }
  }
  return t;
}

inline std::string corpus_dir() { return VLSYM_CORPUS_DIR; }

/// Parses and validates bundled corpus files; aborts the test on failure.
inline Program load_program(const std::vector<std::string>& names) {
  ParseResult r = parse_and_validate(load_corpus(corpus_dir(), names));
  if (!r.ok()) throw std::runtime_error("corpus does not validate: " + r.diagnostics.front().render());
  return std::move(r.program);
}

inline Program program_from(const std::string& text, const std::string& name = "test.vl") {
  std::vector<SourceFile> files{{name, text}};
  ParseResult r = parse_and_validate(std::move(files));
  if (!r.ok()) throw std::runtime_error("test program does not validate: " + r.diagnostics.front().render());
  return std::move(r.program);
}

/// Values of a local real array as polynomials.
inline std::vector<Poly> real_array(const Engine& engine, const ExecState& st, const std::string& name) {
  std::vector<Poly> out;
  auto v = engine.lookup_local(st, name);
  if (!v) throw std::runtime_error("no local '" + name + "'");
  const ArrayObject& arr = st.array(std::get<ArrayRef>(*v));
  for (const auto& cell : arr.cells) {
    if (auto* r = std::get_if<RealVal>(&cell)) {
      out.push_back(r->poly);
    } else {
      throw std::runtime_error("'" + name + "' holds a non-real cell");
    }
  }
  return out;
}

/// Skeleton built by the driver on the path that ended in `st`.
inline Skeleton skeleton_in(const Engine& engine, const ExecState& st, std::uint32_t rows, std::uint32_t cols) {
  Skeleton s{rows, cols, {}, {}};
  auto ints = [&](const std::string& name) {
    std::vector<std::uint32_t> out;
    const ArrayObject& arr = st.array(std::get<ArrayRef>(*engine.lookup_local(st, name)));
    for (const auto& cell : arr.cells) out.push_back(static_cast<std::uint32_t>(std::get<Integer>(cell).get_ui()));
    return out;
  };
  s.row_ptr = ints("row_ptr");
  s.col_ind = ints("col_ind");
  return s;
}

}  // namespace testing
