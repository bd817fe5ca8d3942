#include "vlsym/formula.hpp"

#include <algorithm>

namespace vlsym {
namespace {

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Integer atom: clear denominators, then divide out the content of the
// non-constant part, tightening the constant where the relation allows.
Atom normalize_int(Poly poly, Rel rel) {
  if (rel == Rel::Lt) {
    // p < 0  <=>  p + 1 <= 0 over the integers (after clearing denominators).
    Integer lcm = 1;
    for (const auto& [mono, c] : poly.terms()) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
    }
    poly.scale(Rational(lcm));
    poly += Poly(Rational(1));
    rel = Rel::Le;
  }
  Integer lcm = 1;
  for (const auto& [mono, c] : poly.terms()) {
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  poly.scale(Rational(lcm));
  if (poly.is_constant()) return Atom{std::move(poly), rel, Sort::Int};

  Integer content = 0;
  for (const auto& [mono, c] : poly.terms()) {
    if (mono.is_one()) continue;
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_num_mpz_t());
  }
  Integer constant = poly.constant_term().get_num();
  Poly rest = poly - Poly(Rational(constant));
  rest.scale(Rational(1, 1) / Rational(content));
  if ((rel == Rel::Eq || rel == Rel::Ne) && rest.leading_coefficient() < 0) {
    rest = -rest;
    constant = -constant;
  }
  switch (rel) {
    case Rel::Le: {
      // content * rest + constant <= 0  <=>  rest <= floor(-constant / content)
      Integer bound = floor_div(-constant, content);
      return Atom{rest - Poly(Rational(bound)), Rel::Le, Sort::Int};
    }
    case Rel::Eq:
    case Rel::Ne: {
      if (constant % content != 0) {
        // Never equal: the atom is constant.
        return Atom{Poly(Rational(1)), rel, Sort::Int};
      }
      return Atom{rest + Poly(Rational(constant / content)), rel, Sort::Int};
    }
    case Rel::Lt:
      break;
  }
  return Atom{std::move(poly), rel, Sort::Int};
}

Atom normalize_real(Poly poly, Rel rel) {
  if (poly.is_constant()) return Atom{std::move(poly), rel, Sort::Real};
  Rational lead = poly.leading_coefficient();
  if (rel == Rel::Lt || rel == Rel::Le) lead = abs(lead);
  Rational inv = 1;
  inv /= lead;
  poly.scale(inv);
  return Atom{std::move(poly), rel, Sort::Real};
}

const char* rel_text(Rel rel) {
  switch (rel) {
    case Rel::Lt:
      return "<";
    case Rel::Le:
      return "<=";
    case Rel::Eq:
      return "==";
    case Rel::Ne:
      return "!=";
  }
  return "?";
}

bool compare_rational(const Rational& v, Rel rel) {
  switch (rel) {
    case Rel::Lt:
      return v < 0;
    case Rel::Le:
      return v <= 0;
    case Rel::Eq:
      return v == 0;
    case Rel::Ne:
      return v != 0;
  }
  return false;
}

}  // namespace

Atom make_atom(Poly poly, Rel rel, Sort sort) {
  return sort == Sort::Int ? normalize_int(std::move(poly), rel)
                           : normalize_real(std::move(poly), rel);
}

Atom negate(const Atom& atom) {
  switch (atom.rel) {
    case Rel::Lt:
      return make_atom(-atom.poly, Rel::Le, atom.sort);
    case Rel::Le:
      return make_atom(-atom.poly, Rel::Lt, atom.sort);
    case Rel::Eq:
      return make_atom(atom.poly, Rel::Ne, atom.sort);
    case Rel::Ne:
      return make_atom(atom.poly, Rel::Eq, atom.sort);
  }
  return atom;
}

std::optional<bool> constant_truth(const Atom& atom) {
  auto c = atom.poly.constant_value();
  if (!c) return std::nullopt;
  return compare_rational(*c, atom.rel);
}

bool holds(const Atom& atom, const std::map<SymConst, Rational>& point) {
  return compare_rational(eval_poly(atom.poly, point), atom.rel);
}

bool atom_less(const Atom& a, const Atom& b) {
  if (a.sort != b.sort) return a.sort < b.sort;
  if (a.rel != b.rel) return a.rel < b.rel;
  return a.poly.terms() < b.poly.terms();
}

std::string render(const Atom& atom, const SymbolNamer& namer) {
  return atom.poly.render(namer) + " " + rel_text(atom.rel) + " 0";
}

// ----------------------------------------------------------------- Formula

Formula Formula::constant(bool value) {
  Formula f;
  f.kind_ = value ? Kind::True : Kind::False;
  return f;
}

Formula Formula::of(Atom atom) {
  if (auto t = constant_truth(atom)) return constant(*t);
  Formula f;
  f.kind_ = Kind::Atom;
  f.children_atom_.push_back(std::move(atom));
  return f;
}

Formula Formula::conj(Formula a, Formula b) {
  if (a.is_false() || b.is_false()) return constant(false);
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  Formula f;
  f.kind_ = Kind::And;
  for (Formula* part : {&a, &b}) {
    if (part->kind_ == Kind::And) {
      for (auto& c : part->children_) f.children_.push_back(std::move(c));
    } else {
      f.children_.push_back(std::move(*part));
    }
  }
  return f;
}

Formula Formula::disj(Formula a, Formula b) {
  if (a.is_true() || b.is_true()) return constant(true);
  if (a.is_false()) return b;
  if (b.is_false()) return a;
  Formula f;
  f.kind_ = Kind::Or;
  for (Formula* part : {&a, &b}) {
    if (part->kind_ == Kind::Or) {
      for (auto& c : part->children_) f.children_.push_back(std::move(c));
    } else {
      f.children_.push_back(std::move(*part));
    }
  }
  return f;
}

std::vector<Atom> Formula::atoms() const {
  std::vector<Atom> out;
  if (kind_ == Kind::Atom) out.push_back(atom());
  for (const auto& c : children_) {
    auto sub = c.atoms();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::optional<std::vector<Atom>> Formula::as_conjunction() const {
  switch (kind_) {
    case Kind::True:
      return std::vector<Atom>{};
    case Kind::Atom:
      return std::vector<Atom>{atom()};
    case Kind::And: {
      std::vector<Atom> out;
      for (const auto& c : children_) {
        if (c.kind_ != Kind::Atom) return std::nullopt;
        out.push_back(c.atom());
      }
      return out;
    }
    default:
      return std::nullopt;
  }
}

std::vector<SymConst> Formula::symbols(Sort sort) const {
  std::vector<SymConst> out;
  for (const auto& a : atoms()) {
    if (a.sort != sort) continue;
    auto s = a.poly.symbols();
    out.insert(out.end(), s.begin(), s.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string Formula::render(const SymbolNamer& namer) const {
  switch (kind_) {
    case Kind::True:
      return "true";
    case Kind::False:
      return "false";
    case Kind::Atom:
      return vlsym::render(atom(), namer);
    case Kind::And:
    case Kind::Or: {
      std::string out = "(";
      for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) out += kind_ == Kind::And ? " && " : " || ";
        out += children_[i].render(namer);
      }
      return out + ")";
    }
  }
  return "?";
}

Formula negate(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return Formula::constant(false);
    case Formula::Kind::False:
      return Formula::constant(true);
    case Formula::Kind::Atom:
      return Formula::of(negate(f.atom()));
    case Formula::Kind::And: {
      Formula out = Formula::constant(false);
      for (const auto& c : f.children()) out = Formula::disj(std::move(out), negate(c));
      return out;
    }
    case Formula::Kind::Or: {
      Formula out = Formula::constant(true);
      for (const auto& c : f.children()) out = Formula::conj(std::move(out), negate(c));
      return out;
    }
  }
  return f;
}

std::optional<bool> evaluate(const Formula& f, const std::map<SymConst, Rational>& point) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Atom:
      try {
        return holds(f.atom(), point);
      } catch (const MissingAssignment&) {
        return std::nullopt;
      }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      const bool is_and = f.kind() == Formula::Kind::And;
      bool unknown = false;
      for (const auto& c : f.children()) {
        auto v = evaluate(c, point);
        if (!v) {
          unknown = true;
        } else if (*v != is_and) {
          return !is_and;
        }
      }
      if (unknown) return std::nullopt;
      return is_and;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<std::vector<Atom>>> to_dnf(const Formula& f, std::size_t limit) {
  using Clauses = std::vector<std::vector<Atom>>;
  switch (f.kind()) {
    case Formula::Kind::True:
      return Clauses{{}};
    case Formula::Kind::False:
      return Clauses{};
    case Formula::Kind::Atom:
      return Clauses{{f.atom()}};
    case Formula::Kind::Or: {
      Clauses out;
      for (const auto& c : f.children()) {
        auto sub = to_dnf(c, limit);
        if (!sub) return std::nullopt;
        out.insert(out.end(), sub->begin(), sub->end());
        if (out.size() > limit) return std::nullopt;
      }
      return out;
    }
    case Formula::Kind::And: {
      Clauses out{{}};
      for (const auto& c : f.children()) {
        auto sub = to_dnf(c, limit);
        if (!sub) return std::nullopt;
        if (out.size() * sub->size() > limit) return std::nullopt;
        Clauses next;
        for (const auto& left : out) {
          for (const auto& right : *sub) {
            auto merged = left;
            merged.insert(merged.end(), right.begin(), right.end());
            next.push_back(std::move(merged));
          }
        }
        out = std::move(next);
      }
      return out;
    }
  }
  return std::nullopt;
}

}  // namespace vlsym
