#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vlsym {

using Integer = mpz_class;
/// Exact rational. GMP keeps it canonical: den > 0 and gcd(|num|, den) = 1.
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);
std::string to_string(const Integer& value);
std::string to_string(const Rational& value);

/// A symbolic constant is identified by the input that introduced it and the
/// flat index of the cell inside that input (0 for scalar inputs). The id is
/// fixed by declaration order, never by the order paths are explored in.
struct SymConst {
  std::uint32_t input = 0;
  std::uint32_t index = 0;

  auto operator<=>(const SymConst&) const = default;
};

/// Maps a SymConst to its printed name, e.g. `X_A[2]` or `X_N`.
using SymbolNamer = std::function<std::string(const SymConst&)>;
std::string default_symbol_name(const SymConst& sym);

/// Product of symbolic constants with positive exponents, sorted by symbol.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(SymConst sym, std::uint32_t exponent = 1);

  const std::vector<std::pair<SymConst, std::uint32_t>>& factors() const { return factors_; }
  std::uint32_t degree() const;
  std::uint32_t degree_in(const SymConst& sym) const;
  bool is_one() const { return factors_.empty(); }

  /// Removes every power of `sym`.
  Monomial without(const SymConst& sym) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) = default;
  /// Graded lexicographic: total degree first, then factor lists.
  friend bool operator<(const Monomial& a, const Monomial& b);

 private:
  std::vector<std::pair<SymConst, std::uint32_t>> factors_;
};

enum class DivStatus { Ok, DivisionByZero, NonConstantDivisor };

/// Canonical multivariate polynomial with rational coefficients. Zero
/// coefficients are never stored, so two polynomials denote the same
/// function iff their term maps are identical.
class Poly {
 public:
  using Terms = std::map<Monomial, Rational>;

  Poly() = default;
  Poly(const Rational& constant);  // NOLINT(google-explicit-constructor)
  static Poly constant(const Rational& value) { return Poly(value); }
  static Poly symbol(SymConst sym);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Value of the polynomial when it is constant.
  std::optional<Rational> constant_value() const;
  /// Coefficient of the monomial `1`.
  Rational constant_term() const;
  std::uint32_t degree() const;
  std::vector<SymConst> symbols() const;
  bool mentions(const SymConst& sym) const;
  /// Highest term under the graded order; undefined for the zero polynomial.
  const Rational& leading_coefficient() const { return terms_.rbegin()->second; }

  Poly operator-() const;
  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Poly& other);
  Poly& scale(const Rational& factor);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  /// Replaces `sym` with `replacement` everywhere.
  Poly substitute(const SymConst& sym, const Poly& replacement) const;
  /// Replaces each mapped symbol with its value; unmapped symbols stay.
  Poly substitute(const std::map<SymConst, Rational>& values) const;

  std::string render(const SymbolNamer& namer = default_symbol_name) const;

 private:
  void add_term(const Monomial& mono, const Rational& coeff);

  Terms terms_;
};

enum class PolyOp { Add, Sub, Mul, Neg };

/// Ring operation on two polynomials; `b` is ignored for Neg.
Poly poly_arith(PolyOp op, const Poly& a, const Poly& b);

struct DivResult {
  DivStatus status = DivStatus::Ok;
  Poly quotient;
};

/// Division is only representable by a nonzero constant divisor.
DivResult poly_div(const Poly& a, const Poly& b);

/// Thrown by eval_poly when the point lacks a symbol the polynomial uses.
struct MissingAssignment {
  SymConst sym;
};

Rational eval_poly(const Poly& p, const std::map<SymConst, Rational>& point);

Rational pow(const Rational& base, std::uint32_t exponent);

}  // namespace vlsym
