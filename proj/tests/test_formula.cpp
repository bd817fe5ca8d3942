#include <doctest.h>

#include "support.hpp"
#include "vlsym/formula.hpp"

using namespace vlsym;
using namespace testing;

namespace {

Poly N() { return sym(0); }
Poly M() { return sym(1); }
Poly X() { return sym(2, 0); }
Poly Y() { return sym(2, 1); }

}  // namespace

TEST_CASE("integer atoms normalize equivalent spellings") {
  CHECK(int_atom(N(), Rel::Lt, num(3)) == int_atom(N(), Rel::Le, num(2)));
  CHECK(int_atom(num(2) * N(), Rel::Le, num(4)) == int_atom(N(), Rel::Le, num(2)));
  // 2N <= 5 tightens to N <= 2 over the integers.
  CHECK(int_atom(num(2) * N(), Rel::Le, num(5)) == int_atom(N(), Rel::Le, num(2)));
  CHECK(int_atom(N(), Rel::Eq, M()) == int_atom(M(), Rel::Eq, N()));
  CHECK(int_atom(N(), Rel::Ne, num(1)) == int_atom(num(1), Rel::Ne, N()));
  // 2N == 3 has no integer solution.
  CHECK(constant_truth(int_atom(num(2) * N(), Rel::Eq, num(3))) == std::optional<bool>(false));
}

TEST_CASE("real atoms normalize by scaling") {
  CHECK(real_atom(num(2) * X(), Rel::Eq, num(1)) == real_atom(X(), Rel::Eq, Poly(make_rational(Integer(1), Integer(2)))));
  CHECK(real_atom(num(3) * X(), Rel::Lt, Y()) == real_atom(X(), Rel::Lt, Poly(make_rational(Integer(1), Integer(3))) * Y()));
  CHECK(real_atom(X(), Rel::Lt, num(1)) != real_atom(X(), Rel::Le, num(1)));
}

TEST_CASE("constant atoms") {
  CHECK(constant_truth(int_atom(num(1), Rel::Le, num(2))) == std::optional<bool>(true));
  CHECK(constant_truth(real_atom(num(1), Rel::Eq, num(2))) == std::optional<bool>(false));
  CHECK_FALSE(constant_truth(int_atom(N(), Rel::Le, num(2))));
  CHECK(Formula::of(int_atom(num(1), Rel::Le, num(2))).is_true());
}

TEST_CASE("negation flips truth at every point") {
  std::mt19937_64 rng(1);
  const std::vector<SymConst> pool{{0, 0}, {1, 0}};
  for (int i = 0; i < 500; ++i) {
    Poly p = random_poly(rng, pool, 3, 2);
    for (Rel rel : {Rel::Lt, Rel::Le, Rel::Eq, Rel::Ne}) {
      for (Sort sort : {Sort::Int, Sort::Real}) {
        if (sort == Sort::Int) {
          // Integer atoms need integer coefficients to mean the same thing.
          Poly q;
          for (const auto& [mono, c] : p.terms()) {
            Poly t(Rational(c.get_num()));
            for (const auto& [s, e] : mono.factors()) {
              for (std::uint32_t k = 0; k < e; ++k) t = t * Poly::symbol(s);
            }
            q += t;
          }
          p = q;
        }
        Atom a = make_atom(p, rel, sort);
        std::map<SymConst, Rational> point;
        for (const auto& s : pool) {
          point[s] = sort == Sort::Int ? Rational(std::uniform_int_distribution<long>(-5, 5)(rng))
                                       : random_rational(rng);
        }
        CHECK(holds(a, point) != holds(negate(a), point));
        CHECK(negate(negate(a)) == a);
        // Normalization preserves meaning.
        Rational v = eval_poly(p, point);
        const bool direct = rel == Rel::Lt ? v < 0 : rel == Rel::Le ? v <= 0 : rel == Rel::Eq ? v == 0 : v != 0;
        CHECK(holds(a, point) == direct);
      }
    }
  }
}

TEST_CASE("formula folding and structure") {
  Atom a = int_atom(N(), Rel::Le, num(2));
  Atom b = int_atom(M(), Rel::Le, num(2));
  Formula t = Formula::constant(true), f = Formula::constant(false);
  CHECK(Formula::conj(t, Formula::of(a)).kind() == Formula::Kind::Atom);
  CHECK(Formula::conj(f, Formula::of(a)).is_false());
  CHECK(Formula::disj(t, Formula::of(a)).is_true());
  Formula ab = Formula::conj(Formula::of(a), Formula::of(b));
  REQUIRE(ab.as_conjunction());
  CHECK(ab.as_conjunction()->size() == 2);
  CHECK_FALSE(Formula::disj(Formula::of(a), Formula::of(b)).as_conjunction());
  Formula n = negate(ab);
  CHECK(n.kind() == Formula::Kind::Or);
  CHECK(n.atoms() == std::vector<Atom>{negate(a), negate(b)});
  CHECK(ab.symbols(Sort::Int).size() == 2);
  CHECK(ab.symbols(Sort::Real).empty());
}

TEST_CASE("three-valued evaluation") {
  Atom a = int_atom(N(), Rel::Le, num(2));
  Atom b = int_atom(M(), Rel::Le, num(2));
  Formula ab = Formula::disj(Formula::of(a), Formula::of(b));
  CHECK(evaluate(ab, {{SymConst{0, 0}, 1}}) == std::optional<bool>(true));
  CHECK_FALSE(evaluate(ab, {{SymConst{0, 0}, 5}}));
  CHECK(evaluate(ab, {{SymConst{0, 0}, 5}, {SymConst{1, 0}, 5}}) == std::optional<bool>(false));
}

TEST_CASE("dnf") {
  std::vector<Atom> atoms;
  for (int i = 0; i < 4; ++i) atoms.push_back(int_atom(sym(i), Rel::Le, num(0)));
  // (a0 | a1) & (a2 | a3)
  Formula f = Formula::conj(Formula::disj(Formula::of(atoms[0]), Formula::of(atoms[1])),
                            Formula::disj(Formula::of(atoms[2]), Formula::of(atoms[3])));
  auto dnf = to_dnf(f);
  REQUIRE(dnf);
  CHECK(dnf->size() == 4);
  for (const auto& clause : *dnf) CHECK(clause.size() == 2);
  CHECK_FALSE(to_dnf(f, 3));
  CHECK(to_dnf(Formula::constant(false))->empty());
  auto t = to_dnf(Formula::constant(true));
  REQUIRE(t);
  CHECK(t->size() == 1);
  CHECK(t->front().empty());
}
