#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vlsym/poly.hpp"

namespace vlsym {

enum class Rel { Lt, Le, Eq, Ne };
enum class Sort { Int, Real };

/// `poly rel 0`. Built through make_atom, which normalizes so that
/// syntactically different spellings of one constraint compare equal:
///  - integer atoms have integer coefficients with no common factor, and
///    `<` is rewritten to `<=` by shifting the constant;
///  - real atoms are scaled so the leading coefficient is 1 (`==`, `!=`) or
///    +-1 (`<`, `<=`).
struct Atom {
  Poly poly;
  Rel rel = Rel::Eq;
  Sort sort = Sort::Real;

  friend bool operator==(const Atom&, const Atom&) = default;
};

Atom make_atom(Poly poly, Rel rel, Sort sort);
Atom negate(const Atom& atom);
/// Truth value of an atom with a constant polynomial.
std::optional<bool> constant_truth(const Atom& atom);
bool holds(const Atom& atom, const std::map<SymConst, Rational>& point);
bool atom_less(const Atom& a, const Atom& b);
std::string render(const Atom& atom, const SymbolNamer& namer = default_symbol_name);

/// Boolean combination of atoms in negation normal form.
class Formula {
 public:
  enum class Kind { True, False, Atom, And, Or };

  static Formula constant(bool value);
  /// Folds atoms with a constant polynomial into True/False.
  static Formula of(Atom atom);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);

  Kind kind() const { return kind_; }
  bool is_true() const { return kind_ == Kind::True; }
  bool is_false() const { return kind_ == Kind::False; }
  bool is_constant() const { return is_true() || is_false(); }
  const Atom& atom() const { return children_atom_.front(); }
  const std::vector<Formula>& children() const { return children_; }

  /// Atoms in left-to-right order.
  std::vector<Atom> atoms() const;
  /// The atoms, when the formula is a plain conjunction of atoms.
  std::optional<std::vector<Atom>> as_conjunction() const;
  std::vector<SymConst> symbols(Sort sort) const;

  std::string render(const SymbolNamer& namer = default_symbol_name) const;

 private:
  Kind kind_ = Kind::True;
  std::vector<Atom> children_atom_;  // one element when kind_ == Atom
  std::vector<Formula> children_;
};

Formula negate(const Formula& f);
/// Three-valued evaluation; nullopt when a symbol is unassigned.
std::optional<bool> evaluate(const Formula& f, const std::map<SymConst, Rational>& point);
/// Disjunctive normal form, or nullopt when it would exceed `limit` clauses.
std::optional<std::vector<std::vector<Atom>>> to_dnf(const Formula& f, std::size_t limit = 4096);

}  // namespace vlsym
