#include "vlsym/poly.hpp"

#include <algorithm>
#include <sstream>

namespace vlsym {

Rational make_rational(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Integer& value) { return value.get_str(); }

std::string to_string(const Rational& value) { return value.get_str(); }

std::string default_symbol_name(const SymConst& sym) {
  return "X_" + std::to_string(sym.input) + "[" + std::to_string(sym.index) + "]";
}

Rational pow(const Rational& base, std::uint32_t exponent) {
  Rational result = 1;
  for (std::uint32_t i = 0; i < exponent; ++i) result *= base;
  return result;
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(SymConst sym, std::uint32_t exponent) {
  if (exponent > 0) factors_.emplace_back(sym, exponent);
}

std::uint32_t Monomial::degree() const {
  std::uint32_t d = 0;
  for (const auto& [sym, e] : factors_) d += e;
  return d;
}

std::uint32_t Monomial::degree_in(const SymConst& sym) const {
  for (const auto& [s, e] : factors_) {
    if (s == sym) return e;
  }
  return 0;
}

Monomial Monomial::without(const SymConst& sym) const {
  Monomial out;
  for (const auto& f : factors_) {
    if (f.first != sym) out.factors_.push_back(f);
  }
  return out;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors_.reserve(a.factors_.size() + b.factors_.size());
  auto i = a.factors_.begin();
  auto j = b.factors_.begin();
  while (i != a.factors_.end() || j != b.factors_.end()) {
    if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
      out.factors_.push_back(*i++);
    } else if (i == a.factors_.end() || j->first < i->first) {
      out.factors_.push_back(*j++);
    } else {
      out.factors_.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return out;
}

bool operator<(const Monomial& a, const Monomial& b) {
  const auto da = a.degree();
  const auto db = b.degree();
  if (da != db) return da < db;
  return a.factors_ < b.factors_;
}

// -------------------------------------------------------------------- Poly

Poly::Poly(const Rational& constant) {
  if (constant != 0) terms_.emplace(Monomial{}, constant);
}

Poly Poly::symbol(SymConst sym) {
  Poly p;
  p.terms_.emplace(Monomial(sym), Rational(1));
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

std::optional<Rational> Poly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (is_constant()) return terms_.begin()->second;
  return std::nullopt;
}

Rational Poly::constant_term() const {
  if (!terms_.empty() && terms_.begin()->first.is_one()) return terms_.begin()->second;
  return 0;
}

std::uint32_t Poly::degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

std::vector<SymConst> Poly::symbols() const {
  std::vector<SymConst> out;
  for (const auto& [mono, coeff] : terms_) {
    for (const auto& [sym, e] : mono.factors()) out.push_back(sym);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Poly::mentions(const SymConst& sym) const {
  for (const auto& [mono, coeff] : terms_) {
    if (mono.degree_in(sym) > 0) return true;
  }
  return false;
}

void Poly::add_term(const Monomial& mono, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(mono, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [mono, coeff] : out.terms_) coeff = -coeff;
  return out;
}

Poly& Poly::operator+=(const Poly& other) {
  for (const auto& [mono, coeff] : other.terms_) add_term(mono, coeff);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  for (const auto& [mono, coeff] : other.terms_) add_term(mono, -coeff);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  }
  return out;
}

Poly& Poly::operator*=(const Poly& other) {
  *this = *this * other;
  return *this;
}

Poly& Poly::scale(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [mono, coeff] : terms_) coeff *= factor;
  return *this;
}

Poly Poly::substitute(const SymConst& sym, const Poly& replacement) const {
  Poly out;
  std::vector<Poly> powers{Poly(Rational(1))};
  for (const auto& [mono, coeff] : terms_) {
    const auto e = mono.degree_in(sym);
    if (e == 0) {
      out.add_term(mono, coeff);
      continue;
    }
    while (powers.size() <= e) powers.push_back(powers.back() * replacement);
    Poly rest;
    rest.terms_.emplace(mono.without(sym), coeff);
    out += rest * powers[e];
  }
  return out;
}

Poly Poly::substitute(const std::map<SymConst, Rational>& values) const {
  Poly out;
  for (const auto& [mono, coeff] : terms_) {
    Monomial kept;
    Rational c = coeff;
    for (const auto& [sym, e] : mono.factors()) {
      auto it = values.find(sym);
      if (it == values.end()) {
        kept = kept * Monomial(sym, e);
      } else {
        c *= pow(it->second, e);
      }
    }
    out.add_term(kept, c);
  }
  return out;
}

std::string Poly::render(const SymbolNamer& namer) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [mono, coeff] = *it;
    Rational mag = abs(coeff);
    if (first) {
      if (coeff < 0) os << "-";
    } else {
      os << (coeff < 0 ? " - " : " + ");
    }
    first = false;
    if (mono.is_one()) {
      os << to_string(mag);
      continue;
    }
    if (mag != 1) os << to_string(mag) << "*";
    bool first_factor = true;
    for (const auto& [sym, e] : mono.factors()) {
      if (!first_factor) os << "*";
      first_factor = false;
      os << namer(sym);
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

Poly poly_arith(PolyOp op, const Poly& a, const Poly& b) {
  switch (op) {
    case PolyOp::Add:
      return a + b;
    case PolyOp::Sub:
      return a - b;
    case PolyOp::Mul:
      return a * b;
    case PolyOp::Neg:
      return -a;
  }
  return {};
}

DivResult poly_div(const Poly& a, const Poly& b) {
  if (b.is_zero()) return {DivStatus::DivisionByZero, {}};
  auto c = b.constant_value();
  if (!c) return {DivStatus::NonConstantDivisor, {}};
  Poly q = a;
  q.scale(1 / *c);
  return {DivStatus::Ok, std::move(q)};
}

Rational eval_poly(const Poly& p, const std::map<SymConst, Rational>& point) {
  Rational sum = 0;
  for (const auto& [mono, coeff] : p.terms()) {
    Rational term = coeff;
    for (const auto& [sym, e] : mono.factors()) {
      auto it = point.find(sym);
      if (it == point.end()) throw MissingAssignment{sym};
      term *= pow(it->second, e);
    }
    sum += term;
  }
  return sum;
}

}  // namespace vlsym
