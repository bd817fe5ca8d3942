#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vlsym/formula.hpp"

namespace vlsym {

/// Inclusive integer bounds; a missing side is unbounded.
struct Interval {
  std::optional<Integer> lo;
  std::optional<Integer> hi;

  bool finite() const { return lo.has_value() && hi.has_value(); }
  bool empty() const { return finite() && *lo > *hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Conjunction of atoms accumulated along one path, plus the integer bounds
/// box implied by its single-variable integer atoms.
class PathCondition {
 public:
  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }

  /// Appends an atom. Duplicates and constant-true atoms are dropped; a
  /// constant-false atom marks the condition as contradictory.
  void add(const Atom& atom);
  bool contains(const Atom& atom) const;
  bool trivially_false() const { return contradictory_; }

  const std::map<SymConst, Interval>& box() const { return box_; }
  std::optional<Interval> bounds(const SymConst& sym) const;
  /// Integer symbols whose box has collapsed to a single value.
  const std::map<SymConst, Rational>& pinned() const { return pinned_; }

  std::string render(const SymbolNamer& namer = default_symbol_name) const;

 private:
  void rebuild_box();

  std::vector<Atom> atoms_;
  std::map<SymConst, Interval> box_;
  std::map<SymConst, Rational> pinned_;
  bool contradictory_ = false;
};

using Witness = std::map<SymConst, Rational>;

enum class VerdictKind { Valid, Sat, Unsat, Unknown };

/// Sat carries a witness that has been checked against every atom by exact
/// evaluation before being returned.
struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  Witness witness;

  bool valid() const { return kind == VerdictKind::Valid; }
  bool sat() const { return kind == VerdictKind::Sat; }
  bool unsat() const { return kind == VerdictKind::Unsat; }
  bool unknown() const { return kind == VerdictKind::Unknown; }
};

const char* to_string(VerdictKind kind);

struct SolverOptions {
  std::uint64_t seed = 0x5eedULL;
  /// Maximum number of integer assignments enumerated per query.
  std::uint64_t budget = 1'000'000;
  int trials = 64;
};

/// The integer part of a query cannot be enumerated: a symbol has no finite
/// bounds, or the box is larger than the budget.
class EnumerationBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Verdict pc_sat(const PathCondition& pc, const SolverOptions& options = {});
/// Satisfiability of `pc` conjoined with `extra`.
Verdict pc_sat(const PathCondition& pc, std::span<const Atom> extra,
               const SolverOptions& options = {});

/// Valid when pc and the negated claim are jointly unsatisfiable; Sat
/// carries a countermodel for the claim.
Verdict pc_implies(const PathCondition& pc, const Atom& claim, const SolverOptions& options = {});
Verdict pc_implies(const PathCondition& pc, const Formula& claim,
                   const SolverOptions& options = {});

/// Values `sym` takes across all integer models of `pc`, ascending.
std::vector<Integer> feasible_values(const PathCondition& pc, const SymConst& sym,
                                     const SolverOptions& options = {});

/// Every integer model of the integer atoms of `pc` over `symbols` (which
/// must all be bounded), in lexicographic order.
std::vector<std::map<SymConst, Integer>> integer_models(const PathCondition& pc,
                                                        std::span<const SymConst> symbols,
                                                        const SolverOptions& options = {});

}  // namespace vlsym
