#include "vlsym/solver.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace vlsym {
namespace {

Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer ceil_of(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

// c*s + d for a linear single-symbol polynomial.
struct LinearForm {
  SymConst sym;
  Rational c;
  Rational d;
};

std::optional<LinearForm> single_linear(const Poly& p) {
  if (p.degree() != 1) return std::nullopt;
  auto syms = p.symbols();
  if (syms.size() != 1) return std::nullopt;
  LinearForm out{syms.front(), 0, p.constant_term()};
  for (const auto& [mono, coeff] : p.terms()) {
    if (!mono.is_one()) out.c = coeff;
  }
  return out;
}

bool tighten_lo(Interval& iv, const Integer& v) {
  if (!iv.lo || *iv.lo < v) {
    iv.lo = v;
    return true;
  }
  return false;
}

bool tighten_hi(Interval& iv, const Integer& v) {
  if (!iv.hi || *iv.hi > v) {
    iv.hi = v;
    return true;
  }
  return false;
}

std::vector<SymConst> symbols_of(const std::vector<Atom>& atoms, Sort sort) {
  std::vector<SymConst> out;
  for (const auto& a : atoms) {
    if (a.sort != sort) continue;
    auto s = a.poly.symbols();
    out.insert(out.end(), s.begin(), s.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Calls `visit` on each point of the box over `symbols` (first symbol most
// significant) until it returns false.
template <class Visit>
void enumerate_box(const PathCondition& pc, std::span<const SymConst> symbols,
                   const SolverOptions& options, Visit&& visit) {
  std::vector<Integer> lo, hi;
  Integer total = 1;
  for (const auto& sym : symbols) {
    auto b = pc.bounds(sym);
    if (!b || !b->finite()) {
      throw EnumerationBudgetExceeded("symbolic integer " + default_symbol_name(sym) +
                                      " has no finite bounds");
    }
    if (b->empty()) return;
    lo.push_back(*b->lo);
    hi.push_back(*b->hi);
    total *= Integer(*b->hi - *b->lo + 1);
  }
  if (total > Integer(std::to_string(options.budget))) {
    throw EnumerationBudgetExceeded("integer enumeration needs " + total.get_str() +
                                    " assignments, budget is " +
                                    std::to_string(options.budget));
  }
  std::vector<Integer> cur = lo;
  while (true) {
    if (!visit(cur)) return;
    std::size_t k = cur.size();
    while (k > 0) {
      --k;
      if (cur[k] < hi[k]) {
        cur[k] += 1;
        break;
      }
      cur[k] = lo[k];
      if (k == 0) return;
    }
    if (cur.empty()) return;
  }
}

enum class RealStatus { Sat, Unsat, Unknown };

struct RealResult {
  RealStatus status = RealStatus::Unknown;
  Witness witness;
};

unsigned sign_mask(Rel rel) {
  // bit 0: negative, bit 1: zero, bit 2: positive
  switch (rel) {
    case Rel::Lt:
      return 0b001;
    case Rel::Le:
      return 0b011;
    case Rel::Eq:
      return 0b010;
    case Rel::Ne:
      return 0b101;
  }
  return 0b111;
}

unsigned flip_mask(unsigned m) { return (m & 0b010) | ((m & 1) << 2) | ((m >> 2) & 1); }

// Atoms over the same polynomial (up to scaling) restrict its sign; an
// empty intersection refutes the conjunction.
/// Empty intersection of the bounds that atoms linear in a single symbol
/// put on that symbol.
bool linear_bounds_conflict(const std::vector<Atom>& atoms) {
  struct Range {
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    std::vector<Rational> excluded;
  };
  std::map<SymConst, Range> ranges;
  for (const auto& a : atoms) {
    if (a.poly.degree() != 1) continue;
    const auto syms = a.poly.symbols();
    if (syms.size() != 1) continue;
    const Rational c = a.poly.leading_coefficient();
    const Rational bound = -a.poly.constant_term() / c;
    Range& r = ranges[syms.front()];
    if (a.rel == Rel::Ne) {
      r.excluded.push_back(bound);
      continue;
    }
    if (a.rel == Rel::Eq) continue;
    const bool strict = a.rel == Rel::Lt;
    // c*x + d < 0 bounds x from above when c > 0.
    if (c > 0) {
      if (!r.hi || bound < *r.hi || (bound == *r.hi && strict)) {
        r.hi = bound;
        r.hi_strict = strict;
      }
    } else {
      if (!r.lo || bound > *r.lo || (bound == *r.lo && strict)) {
        r.lo = bound;
        r.lo_strict = strict;
      }
    }
  }
  for (const auto& [sym, r] : ranges) {
    if (!r.lo || !r.hi) continue;
    if (*r.lo > *r.hi) return true;
    if (*r.lo == *r.hi) {
      if (r.lo_strict || r.hi_strict) return true;
      if (std::find(r.excluded.begin(), r.excluded.end(), *r.lo) != r.excluded.end()) return true;
    }
  }
  return false;
}

bool sign_conflict(const std::vector<Atom>& atoms) {
  std::map<Poly::Terms, unsigned> allowed;
  for (const auto& a : atoms) {
    Poly p = a.poly;
    Rational lead = p.leading_coefficient();
    unsigned mask = sign_mask(a.rel);
    if (lead < 0) mask = flip_mask(mask);
    Rational inv = 1;
    inv /= lead;
    p.scale(inv);
    auto [it, inserted] = allowed.try_emplace(p.terms(), 0b111);
    it->second &= mask;
    if (it->second == 0) return true;
  }
  return linear_bounds_conflict(atoms);
}

Rational sample_value(int trial, std::size_t position, std::mt19937_64& rng) {
  switch (trial) {
    case 0:
      return 1;
    case 1:
      return -1;
    case 2:
      return 0;
    case 3:
      return Rational(static_cast<long>(position) + 1);
    case 4:
      return -Rational(static_cast<long>(position) + 1);
    default: {
      std::uniform_int_distribution<long> num(-20, 20);
      std::uniform_int_distribution<long> den(1, 12);
      return make_rational(Integer(num(rng)), Integer(den(rng)));
    }
  }
}

RealResult solve_reals(const std::vector<Atom>& original, const SolverOptions& options) {
  std::vector<Atom> atoms;
  for (const auto& a : original) {
    if (auto t = constant_truth(a)) {
      if (!*t) return {RealStatus::Unsat, {}};
      continue;
    }
    atoms.push_back(a);
  }
  if (atoms.empty()) return {RealStatus::Sat, {}};

  // Eliminate symbols that occur linearly with a constant coefficient in
  // some equality.
  std::vector<std::pair<SymConst, Poly>> eliminated;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < atoms.size() && !progress; ++i) {
      if (atoms[i].rel != Rel::Eq) continue;
      const Poly& p = atoms[i].poly;
      for (const auto& sym : p.symbols()) {
        std::optional<Rational> coeff;
        bool linear_only = true;
        for (const auto& [mono, c] : p.terms()) {
          auto e = mono.degree_in(sym);
          if (e == 0) continue;
          if (e == 1 && mono.degree() == 1) {
            coeff = c;
          } else {
            linear_only = false;
          }
        }
        if (!linear_only || !coeff) continue;
        Poly rest = p - Poly::symbol(sym) * Poly(*coeff);
        Rational factor = -1;
        factor /= *coeff;
        Poly value = rest;
        value.scale(factor);
        eliminated.emplace_back(sym, value);
        std::vector<Atom> next;
        for (std::size_t j = 0; j < atoms.size(); ++j) {
          if (j == i) continue;
          Atom a = make_atom(atoms[j].poly.substitute(sym, value), atoms[j].rel, Sort::Real);
          if (auto t = constant_truth(a)) {
            if (!*t) return {RealStatus::Unsat, {}};
            continue;
          }
          next.push_back(std::move(a));
        }
        atoms = std::move(next);
        progress = true;
        break;
      }
    }
  }

  if (sign_conflict(atoms)) return {RealStatus::Unsat, {}};

  // Symbols of dropped atoms still need a value for the final check.
  std::vector<SymConst> free_syms = symbols_of(original, Sort::Real);
  std::sort(free_syms.begin(), free_syms.end());
  free_syms.erase(std::unique(free_syms.begin(), free_syms.end()), free_syms.end());
  std::vector<SymConst> elim_syms;
  for (const auto& e : eliminated) elim_syms.push_back(e.first);
  std::erase_if(free_syms, [&](const SymConst& s) {
    return std::find(elim_syms.begin(), elim_syms.end(), s) != elim_syms.end();
  });

  std::mt19937_64 rng(options.seed);
  for (int trial = 0; trial < options.trials; ++trial) {
    Witness point;
    for (std::size_t k = 0; k < free_syms.size(); ++k) {
      point[free_syms[k]] = sample_value(trial, k, rng);
    }
    bool ok = true;
    for (const auto& a : atoms) {
      if (!holds(a, point)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (auto it = eliminated.rbegin(); it != eliminated.rend(); ++it) {
      point[it->first] = eval_poly(it->second, point);
    }
    bool verified = true;
    for (const auto& a : original) {
      if (!holds(a, point)) {
        verified = false;
        break;
      }
    }
    if (verified) return {RealStatus::Sat, std::move(point)};
  }
  return {RealStatus::Unknown, {}};
}

Verdict solve(const PathCondition& pc, const SolverOptions& options) {
  if (pc.trivially_false()) return {VerdictKind::Unsat, {}};
  std::vector<Atom> ints, reals;
  for (const auto& a : pc.atoms()) (a.sort == Sort::Int ? ints : reals).push_back(a);

  Witness witness;
  if (!ints.empty()) {
    auto syms = symbols_of(ints, Sort::Int);
    bool found = false;
    enumerate_box(pc, syms, options, [&](const std::vector<Integer>& values) {
      Witness point;
      for (std::size_t k = 0; k < syms.size(); ++k) point[syms[k]] = Rational(values[k]);
      for (const auto& a : ints) {
        if (!holds(a, point)) return true;
      }
      witness = std::move(point);
      found = true;
      return false;
    });
    if (!found) return {VerdictKind::Unsat, {}};
  }
  auto real = solve_reals(reals, options);
  if (real.status == RealStatus::Unsat) return {VerdictKind::Unsat, {}};
  if (real.status == RealStatus::Unknown) return {VerdictKind::Unknown, {}};
  witness.merge(real.witness);
  return {VerdictKind::Sat, std::move(witness)};
}

}  // namespace

const char* to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Valid:
      return "VALID";
    case VerdictKind::Sat:
      return "SAT";
    case VerdictKind::Unsat:
      return "UNSAT";
    case VerdictKind::Unknown:
      return "UNKNOWN";
  }
  return "?";
}

// ------------------------------------------------------------ PathCondition

void PathCondition::add(const Atom& atom) {
  if (auto t = constant_truth(atom)) {
    if (!*t) {
      atoms_.push_back(atom);
      contradictory_ = true;
    }
    return;
  }
  if (contains(atom)) return;
  atoms_.push_back(atom);
  if (atom.sort == Sort::Int) rebuild_box();
}

bool PathCondition::contains(const Atom& atom) const {
  return std::find(atoms_.begin(), atoms_.end(), atom) != atoms_.end();
}

std::optional<Interval> PathCondition::bounds(const SymConst& sym) const {
  auto it = box_.find(sym);
  if (it == box_.end()) return std::nullopt;
  return it->second;
}

void PathCondition::rebuild_box() {
  box_.clear();
  pinned_.clear();
  // Disequalities only shave endpoints, so a few passes reach the fixpoint
  // for the boxes that matter in practice.
  for (int pass = 0; pass < 8; ++pass) {
    bool changed = false;
    for (const auto& a : atoms_) {
      if (a.sort != Sort::Int) continue;
      auto lin = single_linear(a.poly);
      if (!lin) continue;
      Rational root = -lin->d;
      root /= lin->c;
      Interval& iv = box_[lin->sym];
      switch (a.rel) {
        case Rel::Le:
          changed |= lin->c > 0 ? tighten_hi(iv, floor_of(root)) : tighten_lo(iv, ceil_of(root));
          break;
        case Rel::Lt:
          changed |= lin->c > 0 ? tighten_hi(iv, ceil_of(root) - 1)
                                : tighten_lo(iv, floor_of(root) + 1);
          break;
        case Rel::Eq:
          if (root.get_den() != 1) {
            contradictory_ = true;
            break;
          }
          changed |= tighten_lo(iv, root.get_num());
          changed |= tighten_hi(iv, root.get_num());
          break;
        case Rel::Ne:
          if (root.get_den() != 1) break;
          if (iv.lo && *iv.lo == root.get_num()) changed |= tighten_lo(iv, *iv.lo + 1);
          if (iv.hi && *iv.hi == root.get_num()) changed |= tighten_hi(iv, *iv.hi - 1);
          break;
      }
    }
    if (!changed) break;
  }
  for (const auto& [sym, iv] : box_) {
    if (iv.empty()) contradictory_ = true;
    if (iv.finite() && *iv.lo == *iv.hi) pinned_[sym] = Rational(*iv.lo);
  }
}

std::string PathCondition::render(const SymbolNamer& namer) const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    os << (i ? ", " : "") << vlsym::render(atoms_[i], namer);
  }
  os << "}";
  return os.str();
}

// ------------------------------------------------------------------ queries

Verdict pc_sat(const PathCondition& pc, const SolverOptions& options) {
  return solve(pc, options);
}

Verdict pc_sat(const PathCondition& pc, std::span<const Atom> extra,
               const SolverOptions& options) {
  if (extra.empty()) return solve(pc, options);
  PathCondition combined = pc;
  for (const auto& a : extra) combined.add(a);
  return solve(combined, options);
}

Verdict pc_implies(const PathCondition& pc, const Atom& claim, const SolverOptions& options) {
  return pc_implies(pc, Formula::of(claim), options);
}

Verdict pc_implies(const PathCondition& pc, const Formula& claim, const SolverOptions& options) {
  if (claim.is_true()) return {VerdictKind::Valid, {}};
  auto clauses = to_dnf(negate(claim));
  if (!clauses) return {VerdictKind::Unknown, {}};
  bool unknown = false;
  for (const auto& clause : *clauses) {
    Verdict v = pc_sat(pc, clause, options);
    if (v.unknown()) {
      unknown = true;
      continue;
    }
    if (!v.sat()) continue;
    // Symbols of the claim outside this clause are unconstrained.
    for (Sort sort : {Sort::Int, Sort::Real}) {
      for (const auto& sym : claim.symbols(sort)) v.witness.try_emplace(sym, 0);
    }
    bool verified = evaluate(claim, v.witness) == std::optional<bool>(false);
    for (const auto& a : pc.atoms()) verified = verified && holds(a, v.witness);
    if (!verified) {
      unknown = true;
      continue;
    }
    return v;
  }
  if (unknown) return {VerdictKind::Unknown, {}};
  return {VerdictKind::Valid, {}};
}

std::vector<std::map<SymConst, Integer>> integer_models(const PathCondition& pc,
                                                        std::span<const SymConst> symbols,
                                                        const SolverOptions& options) {
  std::vector<Atom> ints;
  for (const auto& a : pc.atoms()) {
    if (a.sort == Sort::Int) ints.push_back(a);
  }
  std::vector<SymConst> syms(symbols.begin(), symbols.end());
  for (const auto& s : symbols_of(ints, Sort::Int)) {
    if (std::find(syms.begin(), syms.end(), s) == syms.end()) syms.push_back(s);
  }
  std::vector<std::map<SymConst, Integer>> out;
  if (pc.trivially_false()) return out;
  enumerate_box(pc, syms, options, [&](const std::vector<Integer>& values) {
    Witness point;
    for (std::size_t k = 0; k < syms.size(); ++k) point[syms[k]] = Rational(values[k]);
    for (const auto& a : ints) {
      if (!holds(a, point)) return true;
    }
    std::map<SymConst, Integer> model;
    for (const auto& s : symbols) model[s] = point[s].get_num();
    if (out.empty() || out.back() != model) out.push_back(std::move(model));
    return true;
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Integer> feasible_values(const PathCondition& pc, const SymConst& sym,
                                     const SolverOptions& options) {
  const SymConst syms[] = {sym};
  std::vector<Integer> out;
  for (auto& model : integer_models(pc, syms, options)) out.push_back(model[sym]);
  return out;
}

}  // namespace vlsym
