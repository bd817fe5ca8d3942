#include "vlsym/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

namespace vlsym {

// ---------------------------------------------------------------- decisions

bool operator==(const Decision& a, const Decision& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Decision::Kind::Choose:
      return a.index == b.index && a.fanout == b.fanout;
    case Decision::Kind::Branch:
      return a.index == b.index;
    case Decision::Kind::Concretize:
      return a.name == b.name && a.value == b.value && a.fanout == b.fanout;
  }
  return false;
}

bool operator<(const Decision& a, const Decision& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  switch (a.kind) {
    case Decision::Kind::Choose:
      return std::tie(a.index, a.fanout) < std::tie(b.index, b.fanout);
    case Decision::Kind::Branch:
      return a.index < b.index;
    case Decision::Kind::Concretize:
      if (a.name != b.name) return a.name < b.name;
      if (a.value != b.value) return a.value < b.value;
      return a.fanout < b.fanout;
  }
  return false;
}

std::string to_string(const Decision& d) {
  switch (d.kind) {
    case Decision::Kind::Choose:
      return "C " + std::to_string(d.index) + "/" + std::to_string(d.fanout);
    case Decision::Kind::Branch:
      return d.index == 0 ? "B t" : "B e";
    case Decision::Kind::Concretize:
      return "Z " + d.name + "=" + d.value.get_str() + "/" + std::to_string(d.fanout);
  }
  return "?";
}

namespace {

std::optional<std::uint64_t> parse_u64(const std::string& s) {
  if (s.empty() || s.size() > 19) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<Decision> parse_decision(const std::string& raw) {
  const std::string line = trim(raw);
  if (line.size() < 3 || line[1] != ' ') return std::nullopt;
  const std::string rest = trim(line.substr(2));
  Decision d;
  switch (line[0]) {
    case 'B':
      d.kind = Decision::Kind::Branch;
      if (rest == "t") return d;
      if (rest == "e") {
        d.index = 1;
        return d;
      }
      return std::nullopt;
    case 'C': {
      d.kind = Decision::Kind::Choose;
      const auto slash = rest.find('/');
      if (slash == std::string::npos) return std::nullopt;
      auto i = parse_u64(rest.substr(0, slash));
      auto k = parse_u64(rest.substr(slash + 1));
      if (!i || !k || *i >= *k) return std::nullopt;
      d.index = *i;
      d.fanout = *k;
      return d;
    }
    case 'Z': {
      d.kind = Decision::Kind::Concretize;
      const auto eq = rest.find('=');
      const auto slash = rest.rfind('/');
      if (eq == std::string::npos || slash == std::string::npos || slash < eq || eq == 0) return std::nullopt;
      d.name = rest.substr(0, eq);
      auto k = parse_u64(rest.substr(slash + 1));
      if (!k) return std::nullopt;
      d.fanout = *k;
      const std::string v = rest.substr(eq + 1, slash - eq - 1);
      if (v.empty() || d.value.set_str(v, 10) != 0) return std::nullopt;
      return d;
    }
    default:
      return std::nullopt;
  }
}

bool trail_less(const ChoiceTrail& a, const ChoiceTrail& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// --------------------------------------------------------------- violations

const char* to_string(Category c) {
  switch (c) {
    case Category::AssertionViolation: return "ASSERTION_VIOLATION";
    case Category::OutOfBounds: return "OUT_OF_BOUNDS";
    case Category::DivisionByZero: return "DIVISION_BY_ZERO";
    case Category::ReadUndefined: return "READ_UNDEFINED";
    case Category::WriteToInput: return "WRITE_TO_INPUT";
    case Category::EnumBudget: return "ENUM_BUDGET";
  }
  return "?";
}

const char* to_string(Certainty c) { return c == Certainty::Proveable ? "PROVEABLE" : "MAYBE"; }

std::size_t Report::count(Category c) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.category == c; }));
}

bool Report::complete() const {
  return !stats.stopped && stats.depth_limited == 0 && count(Category::EnumBudget) == 0;
}

char Report::mark(Category c) const {
  if (count(c) > 0) return '-';
  return complete() ? '+' : ' ';
}

bool Report::clean() const {
  return std::all_of(std::begin(kReportedCategories), std::end(kReportedCategories),
                     [&](Category c) { return mark(c) == '+'; });
}

ArrayObject& ExecState::mutable_array(ArrayRef ref) {
  auto& slot = heap.at(ref.id);
  if (slot.use_count() > 1) slot = std::make_shared<ArrayObject>(*slot);
  return const_cast<ArrayObject&>(*slot);
}

// ---------------------------------------------------------------- lowering

enum class Op { Decl, Assign, Choose, Call, Return, Jump, Branch, Assert, Assume, Print };

struct Instr {
  Op op = Op::Return;
  const Stmt* stmt = nullptr;  // null for the implicit return at the end of a function
  std::uint32_t target = 0;    // Jump, Branch (when false)
  bool loop = false;           // Branch guarding a while loop
};

struct LocalInfo {
  std::string name;
  Type type = Type::Error;
};

struct CompiledFunction {
  const FunctionDef* def = nullptr;
  std::vector<Instr> code;
  std::vector<LocalInfo> locals;  // by slot
};

class CompiledProgram {
 public:
  explicit CompiledProgram(const Program& program) {
    for (const auto& f : program.functions) {
      CompiledFunction cf;
      cf.def = &f;
      cf.locals.resize(f.num_slots);
      for (std::size_t i = 0; i < f.params.size() && i < cf.locals.size(); ++i) {
        cf.locals[i] = {f.params[i].name, f.params[i].type};
      }
      if (f.body) lower(*f.body, cf);
      cf.code.push_back({Op::Return, nullptr, 0, false});
      functions.push_back(std::move(cf));
    }
    auto it = std::find_if(program.functions.begin(), program.functions.end(),
                           [&](const FunctionDef& f) { return f.name == program.entry; });
    if (it == program.functions.end()) throw EngineError("no '" + program.entry + "' function");
    entry = static_cast<std::uint32_t>(it - program.functions.begin());
  }

  std::vector<CompiledFunction> functions;
  std::uint32_t entry = 0;

 private:
  static std::uint32_t here(const CompiledFunction& cf) { return static_cast<std::uint32_t>(cf.code.size()); }

  void lower(const Stmt& s, CompiledFunction& cf) {
    auto emit = [&](Op op, std::uint32_t target = 0, bool loop = false) {
      cf.code.push_back({op, &s, target, loop});
      return here(cf) - 1;
    };
    switch (s.kind) {
      case StmtKind::VarDecl:
        if (s.slot < cf.locals.size()) cf.locals[s.slot] = {s.name, s.decl_type};
        emit(Op::Decl);
        break;
      case StmtKind::Assign: emit(Op::Assign); break;
      case StmtKind::Choose: emit(Op::Choose); break;
      case StmtKind::Call: emit(Op::Call); break;
      case StmtKind::Return: emit(Op::Return); break;
      case StmtKind::Assert: emit(Op::Assert); break;
      case StmtKind::Assume: emit(Op::Assume); break;
      case StmtKind::Print: emit(Op::Print); break;
      case StmtKind::Block:
        for (const auto& c : s.body) lower(*c, cf);
        break;
      case StmtKind::If: {
        const auto branch = emit(Op::Branch);
        lower(*s.then_branch, cf);
        if (s.else_branch) {
          const auto jump = emit(Op::Jump);
          cf.code[branch].target = here(cf);
          lower(*s.else_branch, cf);
          cf.code[jump].target = here(cf);
        } else {
          cf.code[branch].target = here(cf);
        }
        break;
      }
      case StmtKind::While: {
        const auto top = here(cf);
        const auto branch = emit(Op::Branch, 0, true);
        lower(*s.then_branch, cf);
        emit(Op::Jump, top);
        cf.code[branch].target = here(cf);
        break;
      }
    }
  }
};

// ------------------------------------------------------------- interpreter

namespace {

struct NeedConcretize {
  SymConst sym;
};
struct NeedCase {
  Atom atom;
};
struct Fault {
  Category category;
  std::string message;
  SourceSpan span;
  std::optional<Verdict> verdict;  // decided certainty, when already known
};
struct Pruned {};
struct ChooseFork {
  Integer count;
};

Integer floor_int(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Poly poly_of(const Value& v) {
  if (auto* i = std::get_if<Integer>(&v)) return Poly(Rational(*i));
  if (auto* s = std::get_if<IntSym>(&v)) return s->poly;
  if (auto* r = std::get_if<RealVal>(&v)) return r->poly;
  return Poly();
}

}  // namespace

/// Executes one instruction on a working copy of a state.
class Interp {
 public:
  Interp(Engine& engine, ExecState& state)
      : engine_(engine), code_(*engine.code_), st_(state) {}

  /// Runs the instruction at the top frame's cursor. Returns true when main
  /// has returned.
  bool exec() {
    Frame& fr = st_.stack.back();
    const CompiledFunction& cf = code_.functions[fr.function];
    const Instr& in = cf.code[fr.ip];
    switch (in.op) {
      case Op::Decl: exec_decl(*in.stmt); break;
      case Op::Assign: {
        Value v = eval(*in.stmt->value);
        const Place p = resolve(*in.stmt->target);
        write(p, std::move(v));
        advance();
        break;
      }
      case Op::Choose: {
        const Integer k = concrete(eval(*in.stmt->value), in.stmt->value->span);
        resolve(*in.stmt->target);
        throw ChooseFork{k};
      }
      case Op::Call: exec_call(*in.stmt); break;
      case Op::Return: return exec_return(in.stmt);
      case Op::Jump: fr.ip = in.target; break;
      case Op::Branch: {
        const bool taken = in.loop ? decide_guard(*in.stmt->value) : decide(*in.stmt->value);
        st_.stack.back().ip = taken ? fr.ip + 1 : in.target;
        normalize();
        break;
      }
      case Op::Assert: exec_assert(*in.stmt); break;
      case Op::Assume: exec_assume(*in.stmt); break;
      case Op::Print: exec_print(*in.stmt); break;
    }
    return false;
  }

  /// Writes choose_int's value into its target.
  void finish_choose(const Integer& value) {
    const Stmt& s = *current_instr().stmt;
    write(resolve(*s.target), Value(value));
    advance();
  }

  void normalize() {
    Frame& fr = st_.stack.back();
    const auto& code = code_.functions[fr.function].code;
    while (code[fr.ip].op == Op::Jump) fr.ip = code[fr.ip].target;
  }

  const Instr& current_instr() const {
    const Frame& fr = st_.stack.back();
    return code_.functions[fr.function].code[fr.ip];
  }

  // ----------------------------------------------------------- values

  Value make_int(Poly p) const {
    if (!st_.pc.pinned().empty() && !p.is_constant()) p = p.substitute(st_.pc.pinned());
    if (auto c = p.constant_value()) return Value(c->get_num());
    return Value(IntSym{std::move(p)});
  }

  /// Value of an int at a strict position.
  Integer concrete(const Value& v, const SourceSpan& span) const {
    if (auto* i = std::get_if<Integer>(&v)) return *i;
    if (auto* s = std::get_if<IntSym>(&v)) {
      Value n = make_int(s->poly);
      if (auto* i = std::get_if<Integer>(&n)) return *i;
      throw NeedConcretize{std::get<IntSym>(n).poly.symbols().front()};
    }
    throw Fault{Category::ReadUndefined, "use of an undefined value", span, std::nullopt};
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit: return Value(e.int_value);
      case ExprKind::RealLit: return Value(RealVal{Poly(e.real_value)});
      case ExprKind::Var: {
        Value v = read_var(e.ref);
        if (std::holds_alternative<Undefined>(v)) {
          throw Fault{Category::ReadUndefined, "read of uninitialized '" + e.text + "'", e.span, std::nullopt};
        }
        if (auto* s = std::get_if<IntSym>(&v)) return make_int(s->poly);
        return v;
      }
      case ExprKind::Index: {
        const ArrayRef ref = std::get<ArrayRef>(read_var(e.ref));
        const Integer idx = concrete(eval(*e.args[0]), e.args[0]->span);
        const ArrayObject& arr = st_.array(ref);
        const std::size_t at = check_index(arr, idx, e.span, e.text);
        const Value& cell = arr.cells[at];
        if (std::holds_alternative<Undefined>(cell)) {
          throw Fault{Category::ReadUndefined,
                      "read of uninitialized element " + idx.get_str() + " of '" + e.text + "'", e.span,
                      std::nullopt};
        }
        if (auto* s = std::get_if<IntSym>(&cell)) return make_int(s->poly);
        return cell;
      }
      case ExprKind::Len: {
        const ArrayRef ref = std::get<ArrayRef>(eval(*e.args[0]));
        return Value(extent_of(st_.array(ref), e.span));
      }
      case ExprKind::Unary: {
        Value x = eval(*e.args[0]);
        if (std::holds_alternative<RealVal>(x)) return Value(RealVal{-poly_of(x)});
        return make_int(-poly_of(x));
      }
      case ExprKind::Binary: return eval_arith(e);
      case ExprKind::Equals: break;
    }
    throw EngineError("boolean expression used as a value");
  }

  Value eval_arith(const Expr& e) {
    Value a = eval(*e.args[0]);
    Value b = eval(*e.args[1]);
    const bool real = std::holds_alternative<RealVal>(a);
    const Poly pa = poly_of(a), pb = poly_of(b);
    Poly r;
    switch (e.binary_op) {
      case BinaryOp::Add: r = poly_arith(PolyOp::Add, pa, pb); break;
      case BinaryOp::Sub: r = poly_arith(PolyOp::Sub, pa, pb); break;
      case BinaryOp::Mul: r = poly_arith(PolyOp::Mul, pa, pb); break;
      case BinaryOp::Div: {
        DivResult d = poly_div(pa, pb);
        if (d.status == DivStatus::DivisionByZero) {
          throw Fault{Category::DivisionByZero, "division by zero", e.span, std::nullopt};
        }
        if (d.status == DivStatus::NonConstantDivisor) {
          const Atom nonzero = make_atom(pb, Rel::Ne, Sort::Real);
          Verdict v = engine_.implies(st_.pc, Formula::of(nonzero));
          if (v.valid()) v.kind = VerdictKind::Unknown;
          throw Fault{Category::DivisionByZero,
                      v.sat() ? "divisor " + pb.render(engine_.namer()) + " can be zero"
                              : "cannot establish that divisor " + pb.render(engine_.namer()) +
                                    " is nonzero and representable",
                      e.span, v};
        }
        r = std::move(d.quotient);
        break;
      }
      default: throw EngineError("not an arithmetic operator");
    }
    if (real) return Value(RealVal{std::move(r)});
    return make_int(std::move(r));
  }

  // ---------------------------------------------------------- booleans

  Formula simplify(const Atom& atom) const {
    Atom a = atom;
    if (a.sort == Sort::Int && !st_.pc.pinned().empty()) {
      a = make_atom(a.poly.substitute(st_.pc.pinned()), a.rel, a.sort);
    }
    if (auto t = constant_truth(a)) return Formula::constant(*t);
    if (st_.pc.contains(a)) return Formula::constant(true);
    if (st_.pc.contains(negate(a))) return Formula::constant(false);
    return Formula::of(a);
  }

  Formula compare(const Expr& e) {
    Value a = eval(*e.args[0]);
    Value b = eval(*e.args[1]);
    const Sort sort = std::holds_alternative<RealVal>(a) ? Sort::Real : Sort::Int;
    const Poly pa = poly_of(a), pb = poly_of(b);
    switch (e.binary_op) {
      case BinaryOp::Lt: return simplify(make_atom(pa - pb, Rel::Lt, sort));
      case BinaryOp::Le: return simplify(make_atom(pa - pb, Rel::Le, sort));
      case BinaryOp::Gt: return simplify(make_atom(pb - pa, Rel::Lt, sort));
      case BinaryOp::Ge: return simplify(make_atom(pb - pa, Rel::Le, sort));
      case BinaryOp::Eq: return simplify(make_atom(pa - pb, Rel::Eq, sort));
      case BinaryOp::Ne: return simplify(make_atom(pa - pb, Rel::Ne, sort));
      default: throw EngineError("not a comparison");
    }
  }

  Formula eval_bool(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Unary: return negate(eval_bool(*e.args[0]));
      case ExprKind::Equals: return eval_equals(e);
      case ExprKind::Binary:
        if (e.binary_op == BinaryOp::And || e.binary_op == BinaryOp::Or) {
          const bool is_and = e.binary_op == BinaryOp::And;
          Formula lhs = eval_bool(*e.args[0]);
          if (combine_) {
            Formula rhs = eval_bool(*e.args[1]);
            return is_and ? Formula::conj(std::move(lhs), std::move(rhs))
                          : Formula::disj(std::move(lhs), std::move(rhs));
          }
          if (lhs.is_constant()) {
            if (lhs.is_true() != is_and) return lhs;
            return eval_bool(*e.args[1]);
          }
          // The right operand only runs under one outcome of the left.
          throw NeedCase{lhs.atoms().front()};
        }
        return compare(e);
      default: throw EngineError("value used as a condition");
    }
  }

  Formula eval_equals(const Expr& e) {
    const ArrayObject& a = st_.array(std::get<ArrayRef>(eval(*e.args[0])));
    const ArrayObject& b = st_.array(std::get<ArrayRef>(eval(*e.args[1])));
    const Integer na = extent_of(a, e.span), nb = extent_of(b, e.span);
    if (na != nb) return Formula::constant(false);
    const Sort sort = a.element == Type::Real ? Sort::Real : Sort::Int;
    Formula all = Formula::constant(true);
    const auto n = na.get_ui();
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto* arr : {&a, &b}) {
        if (std::holds_alternative<Undefined>(arr->cells[i])) {
          throw Fault{Category::ReadUndefined,
                      "equals reads uninitialized element " + std::to_string(i) + " of '" + arr->name + "'",
                      e.span, std::nullopt};
        }
      }
      all = Formula::conj(std::move(all),
                          simplify(make_atom(poly_of(a.cells[i]) - poly_of(b.cells[i]), Rel::Eq, sort)));
    }
    return all;
  }

  /// An if condition: undecided atoms become case splits.
  bool decide(const Expr& cond) {
    Formula f = eval_bool(cond);
    if (f.is_constant()) return f.is_true();
    throw NeedCase{f.atoms().front()};
  }

  /// A loop guard: undecided int guards are concretized.
  bool decide_guard(const Expr& cond) {
    Formula f = eval_bool(cond);
    if (f.is_constant()) return f.is_true();
    if (engine_.implies(st_.pc, f).valid()) return true;
    if (engine_.implies(st_.pc, negate(f)).valid()) return false;
    const auto ints = f.symbols(Sort::Int);
    if (!ints.empty()) throw NeedConcretize{ints.front()};
    throw NeedCase{f.atoms().front()};
  }

  // ------------------------------------------------------------ storage

  struct Place {
    bool is_cell = false;
    VarRef ref;
    ArrayRef array;
    std::size_t index = 0;
    SourceSpan span;
    std::string name;
  };

  Value read_var(const VarRef& ref) const {
    if (ref.scope == VarRef::Scope::Input) return st_.inputs.at(ref.index);
    return st_.stack.back().slots.at(ref.index);
  }

  Place resolve(const LValue& lv) {
    Place p;
    p.ref = lv.ref;
    p.span = lv.span;
    p.name = lv.name;
    if (!lv.index) return p;
    p.is_cell = true;
    p.array = std::get<ArrayRef>(read_var(lv.ref));
    const Integer idx = concrete(eval(*lv.index), lv.index->span);
    p.index = check_index(st_.array(p.array), idx, lv.span, lv.name);
    return p;
  }

  void write(const Place& p, Value v) {
    if (p.is_cell) {
      if (st_.array(p.array).read_only) {
        throw Fault{Category::WriteToInput, "write to input array '" + st_.array(p.array).name + "'", p.span,
                    std::nullopt};
      }
      st_.mutable_array(p.array).cells[p.index] = std::move(v);
      return;
    }
    if (p.ref.scope == VarRef::Scope::Input) {
      throw Fault{Category::WriteToInput, "write to input '" + p.name + "'", p.span, std::nullopt};
    }
    st_.stack.back().slots.at(p.ref.index) = std::move(v);
  }

  Integer extent_of(const ArrayObject& arr, const SourceSpan& span) const { return concrete(arr.extent, span); }

  std::size_t check_index(const ArrayObject& arr, const Integer& idx, const SourceSpan& span,
                          const std::string& name) const {
    const Integer n = extent_of(arr, span);
    if (idx < 0 || idx >= n) {
      throw Fault{Category::OutOfBounds,
                  "index " + idx.get_str() + " out of bounds for '" + name + "' of length " + n.get_str(), span,
                  std::nullopt};
    }
    if (!idx.fits_ulong_p() || idx.get_ui() >= arr.cells.size()) {
      throw EngineError("array storage smaller than its extent");
    }
    return idx.get_ui();
  }

  ArrayRef allocate(ArrayObject obj) {
    st_.heap.push_back(std::make_shared<const ArrayObject>(std::move(obj)));
    return ArrayRef{static_cast<std::uint32_t>(st_.heap.size() - 1)};
  }

  // --------------------------------------------------------- statements

  void advance() {
    ++st_.stack.back().ip;
    normalize();
  }

  void exec_decl(const Stmt& s) {
    Value v;
    if (s.extent) {
      const Integer n = concrete(eval(*s.extent), s.extent->span);
      if (n < 0) {
        throw Fault{Category::OutOfBounds, "negative extent " + n.get_str() + " for '" + s.name + "'",
                    s.extent->span, std::nullopt};
      }
      if (n > 100'000'000) throw EngineError("array '" + s.name + "' is too large");
      ArrayObject obj;
      obj.name = s.name;
      obj.element = element_type(s.decl_type);
      obj.extent = Value(n);
      obj.cells.assign(n.get_ui(), Value(Undefined{}));
      v = Value(allocate(std::move(obj)));
    } else if (s.value) {
      v = eval(*s.value);
    }
    st_.stack.back().slots.at(s.slot) = std::move(v);
    advance();
  }

  void exec_call(const Stmt& s) {
    const CompiledFunction& callee = code_.functions.at(s.callee_index);
    Frame f;
    f.function = s.callee_index;
    f.slots.assign(callee.def->num_slots, Value(Undefined{}));
    for (std::size_t i = 0; i < s.args.size(); ++i) f.slots[i] = eval(*s.args[i]);
    st_.stack.push_back(std::move(f));
    normalize();
  }

  bool exec_return(const Stmt* s) {
    Value result;
    if (s && s->value) result = eval(*s->value);
    st_.stack.pop_back();
    if (st_.stack.empty()) return true;
    const Stmt& call = *current_instr().stmt;
    if (call.target) write(resolve(*call.target), std::move(result));
    advance();
    return false;
  }

  void exec_assert(const Stmt& s) {
    Formula f = eval_bool(*s.value);
    if (f.is_true()) {
      advance();
      return;
    }
    Verdict v = f.is_false() ? engine_.sat(st_.pc) : engine_.implies(st_.pc, f);
    if (v.valid()) {
      advance();
      return;
    }
    if (v.unsat()) throw Pruned{};
    throw Fault{Category::AssertionViolation, "assertion may be violated", s.span, v};
  }

  void exec_assume(const Stmt& s) {
    Formula f = eval_bool(*s.value);
    if (f.is_false()) throw Pruned{};
    if (!f.is_true()) {
      auto atoms = f.as_conjunction();
      if (!atoms) throw NeedCase{f.atoms().front()};
      for (const auto& a : *atoms) st_.pc.add(a);
      if (st_.pc.trivially_false() || engine_.sat(st_.pc).unsat()) throw Pruned{};
    }
    advance();
  }

  void exec_print(const Stmt& s) {
    if (engine_.output_) {
      std::string line;
      for (const auto& a : s.args) {
        if (!line.empty()) line += ' ';
        Value v;
        if (a->kind == ExprKind::Var) {
          line += a->text + ": ";
          v = read_var(a->ref);
          if (auto* sym = std::get_if<IntSym>(&v)) v = make_int(sym->poly);
        } else {
          v = eval(*a);
        }
        line += engine_.render(v, st_);
      }
      engine_.output_->push_back(std::move(line));
    }
    advance();
  }

 public:
  /// Combine both operands of && and || instead of splitting cases.
  bool combine_ = false;

 private:
  Engine& engine_;
  const CompiledProgram& code_;
  ExecState& st_;
};

// ------------------------------------------------------------------ engine

Engine::Engine(const Program& program, SearchConfig config, Mode mode)
    : program_(program),
      config_(std::move(config)),
      mode_(mode),
      code_(std::make_shared<const CompiledProgram>(program)),
      rng_(config_.seed) {
  solver_.seed = config_.seed;
  solver_.budget = config_.budget;
  for (const auto& [name, value] : config_.overrides) {
    auto idx = program_.find_input(name);
    if (!idx) throw EngineError("unknown input '" + name + "'");
    if (program_.inputs[*idx].type != Type::Int) throw EngineError("input '" + name + "' is not an int");
  }
}

Engine::~Engine() = default;

std::string Engine::symbol_name(const SymConst& sym) const {
  if (sym.input >= program_.inputs.size()) return default_symbol_name(sym);
  const InputDecl& in = program_.inputs[sym.input];
  if (in.type == Type::Int) return "X_" + in.name;
  return "X_" + in.name + "[" + std::to_string(sym.index) + "]";
}

SymbolNamer Engine::namer() const {
  return [this](const SymConst& s) { return symbol_name(s); };
}

Verdict Engine::sat(const PathCondition& pc) {
  ++solver_calls_;
  return pc_sat(pc, solver_);
}

Verdict Engine::implies(const PathCondition& pc, const Formula& claim) {
  ++solver_calls_;
  return pc_implies(pc, claim, solver_);
}

SourceSpan Engine::current_span(const ExecState& state) const {
  const Frame& fr = state.stack.back();
  const CompiledFunction& cf = code_->functions[fr.function];
  const Instr& in = cf.code[fr.ip];
  if (!in.stmt) return SourceSpan{cf.def->span.file, cf.def->span.end, cf.def->span.end};
  if (in.op == Op::Branch) return in.stmt->value->span;
  return in.stmt->span;
}

std::string Engine::render(const Value& v, const ExecState& state) const {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Undefined>) {
          return "undef";
        } else if constexpr (std::is_same_v<T, Integer>) {
          return x.get_str();
        } else if constexpr (std::is_same_v<T, IntSym> || std::is_same_v<T, RealVal>) {
          return x.poly.render(namer());
        } else {
          const ArrayObject& arr = state.array(x);
          std::size_t n = arr.cells.size();
          Poly extent = poly_of(arr.extent).substitute(state.pc.pinned());
          if (auto c = extent.constant_value(); c && *c >= 0 && *c < n) n = c->get_num().get_ui();
          std::string out = "[ ";
          for (std::size_t i = 0; i < n; ++i) out += render(arr.cells[i], state) + " ";
          return out + "]";
        }
      },
      v);
}

std::string Engine::snapshot(const ExecState& state) const {
  if (state.stack.empty()) return "";
  const Frame& fr = state.stack.back();
  const CompiledFunction& cf = code_->functions[fr.function];
  std::string out;
  for (std::size_t i = 0; i < fr.slots.size(); ++i) {
    if (std::holds_alternative<Undefined>(fr.slots[i]) || i >= cf.locals.size()) continue;
    if (!out.empty()) out += ' ';
    out += cf.locals[i].name + ": " + render(fr.slots[i], state);
  }
  return out;
}

std::optional<Value> Engine::lookup_local(const ExecState& state, const std::string& name) const {
  if (state.stack.empty()) return std::nullopt;
  const Frame& fr = state.stack.back();
  const CompiledFunction& cf = code_->functions[fr.function];
  for (std::size_t i = 0; i < cf.locals.size() && i < fr.slots.size(); ++i) {
    if (cf.locals[i].name == name) return fr.slots[i];
  }
  return std::nullopt;
}

ExecState Engine::init_state() {
  ExecState st;
  st.inputs.assign(program_.inputs.size(), Value(Undefined{}));
  st.stack.emplace_back();  // globals only read inputs
  Interp in(*this, st);
  in.combine_ = true;
  for (const auto& g : program_.globals) {
    if (g.kind == GlobalItem::Kind::Assume) {
      const GlobalAssume& a = program_.assumes[g.index];
      Formula f;
      try {
        f = in.eval_bool(*a.cond);
      } catch (const NeedCase&) {
        throw EngineError("global assumption must be a conjunction of comparisons");
      } catch (const Fault& fault) {
        throw EngineError("global assumption cannot be evaluated: " + fault.message);
      }
      if (f.is_false()) {
        st.pc.add(make_atom(Poly(Rational(1)), Rel::Eq, Sort::Int));
        continue;
      }
      if (f.is_true()) continue;
      auto atoms = f.as_conjunction();
      if (!atoms) throw EngineError("global assumption must be a conjunction of comparisons");
      for (const auto& at : *atoms) st.pc.add(at);
      continue;
    }
    const std::uint32_t idx = static_cast<std::uint32_t>(g.index);
    const InputDecl& d = program_.inputs[idx];
    if (d.type == Type::Int) {
      auto ov = config_.overrides.find(d.name);
      if (ov != config_.overrides.end()) {
        st.inputs[idx] = Value(ov->second);
      } else if (d.default_value) {
        st.inputs[idx] = Value(*d.default_value);
      } else {
        st.inputs[idx] = Value(IntSym{Poly::symbol(SymConst{idx, 0})});
      }
      continue;
    }
    Value extent;
    try {
      extent = in.eval(*d.extent);
    } catch (...) {
      throw EngineError("extent of input '" + d.name + "' cannot be evaluated");
    }
    Integer physical;
    if (auto* n = std::get_if<Integer>(&extent)) {
      physical = *n;
    } else {
      const Poly p = std::get<IntSym>(extent).poly;
      const auto syms = p.symbols();
      std::vector<std::map<SymConst, Integer>> models;
      try {
        models = integer_models(st.pc, syms, solver_);
      } catch (const EnumerationBudgetExceeded&) {
        throw EngineError("extent of input '" + d.name + "' depends on an unbounded input");
      }
      physical = 0;
      for (const auto& m : models) {
        std::map<SymConst, Rational> point;
        for (const auto& [s, v] : m) point[s] = Rational(v);
        const Integer e = floor_int(eval_poly(p, point));
        if (e > physical) physical = e;
      }
    }
    if (physical < 0) physical = 0;
    if (physical > 10'000'000) throw EngineError("input '" + d.name + "' is too large");
    ArrayObject obj;
    obj.name = d.name;
    obj.element = Type::Real;
    obj.extent = extent;
    obj.read_only = true;
    const auto cells = physical.get_ui();
    obj.cells.reserve(cells);
    for (std::uint32_t k = 0; k < cells; ++k) {
      if (mode_ == Mode::Concrete) {
        std::uniform_int_distribution<long> num(-20, 20), den(1, 12);
        const long a = num(rng_), b = den(rng_);
        obj.cells.push_back(Value(RealVal{Poly(make_rational(Integer(a), Integer(b)))}));
      } else {
        obj.cells.push_back(Value(RealVal{Poly::symbol(SymConst{idx, k})}));
      }
    }
    st.inputs[idx] = Value(in.allocate(std::move(obj)));
  }
  st.stack.clear();
  Frame main;
  main.function = code_->entry;
  main.slots.assign(code_->functions[code_->entry].def->num_slots, Value(Undefined{}));
  st.stack.push_back(std::move(main));
  Interp(*this, st).normalize();
  return st;
}

namespace {

Decision branch_decision(bool then_side) {
  Decision d;
  d.kind = Decision::Kind::Branch;
  d.index = then_side ? 0 : 1;
  return d;
}

}  // namespace

StepResult Engine::step(const ExecState& state) {
  StepResult r;
  auto violation = [&](Category cat, const std::string& msg, const SourceSpan& span,
                       std::optional<Verdict> verdict, const ExecState& at) {
    if (!verdict) {
      try {
        verdict = sat(at.pc);
      } catch (const EnumerationBudgetExceeded&) {
        verdict = Verdict{};
      }
    }
    Violation v;
    v.category = cat;
    v.message = msg;
    v.span = span;
    const Diagnostic diag = program_.diagnostic(Severity::Error, msg, span);
    v.location = diag.location();
    v.source = program_.snippet(span);
    if (!at.stack.empty()) v.function = code_->functions[at.stack.back().function].def->name;
    v.trail = at.trail;
    v.depth = at.trail.size();
    if (verdict->sat()) {
      v.certainty = Certainty::Proveable;
      v.witness = verdict->witness;
    } else {
      v.certainty = Certainty::Maybe;
    }
    r.kind = StepResult::Kind::Violation;
    r.violation = std::move(v);
  };

  auto concretize = [&](const SymConst& sym) {
    std::vector<Integer> values;
    try {
      values = feasible_values(state.pc, sym, solver_);
    } catch (const EnumerationBudgetExceeded& e) {
      const SourceSpan span = current_span(state);
      violation(Category::EnumBudget, std::string("cannot enumerate ") + symbol_name(sym) + ": " + e.what(), span,
                Verdict{}, state);
      return;
    }
    for (const auto& val : values) {
      ExecState s = state;
      s.pc.add(make_atom(Poly::symbol(sym) - Poly(Rational(val)), Rel::Eq, Sort::Int));
      if (sym.input < s.inputs.size() && std::holds_alternative<IntSym>(s.inputs[sym.input])) {
        s.inputs[sym.input] = Value(val);
      }
      Decision d;
      d.kind = Decision::Kind::Concretize;
      d.name = program_.inputs.at(sym.input).name;
      d.value = val;
      d.fanout = values.size();
      s.trail.push_back(std::move(d));
      r.successors.push_back(std::move(s));
    }
    if (values.empty()) ++r.pruned;
  };

  if (config_.eager_concretize) {
    for (std::uint32_t i = 0; i < state.inputs.size(); ++i) {
      if (auto* s = std::get_if<IntSym>(&state.inputs[i])) {
        if (!s->poly.substitute(state.pc.pinned()).is_constant()) {
          concretize(s->poly.symbols().front());
          return r;
        }
      }
    }
  }

  ExecState work = state;
  Interp in(*this, work);
  try {
    const bool done = in.exec();
    ++work.steps;
    if (done) {
      r.kind = StepResult::Kind::Terminal;
      return r;
    }
    r.successors.push_back(std::move(work));
  } catch (const ChooseFork& fork) {
    if (fork.count <= 0) {
      ++r.dead_ends;
      return r;
    }
    if (fork.count > 1'000'000) {
      violation(Category::EnumBudget, "choose_int over " + fork.count.get_str() + " values", current_span(state),
                Verdict{}, state);
      return r;
    }
    const auto k = fork.count.get_ui();
    for (std::uint64_t i = 0; i < k; ++i) {
      ExecState s = state;
      Decision d;
      d.kind = Decision::Kind::Choose;
      d.index = i;
      d.fanout = k;
      s.trail.push_back(d);
      Interp(*this, s).finish_choose(Integer(static_cast<unsigned long>(i)));
      ++s.steps;
      r.successors.push_back(std::move(s));
    }
  } catch (const NeedCase& need) {
    for (bool then_side : {true, false}) {
      ExecState s = state;
      s.pc.add(then_side ? need.atom : negate(need.atom));
      bool feasible = !s.pc.trivially_false();
      if (feasible) {
        try {
          feasible = !sat(s.pc).unsat();
        } catch (const EnumerationBudgetExceeded& e) {
          violation(Category::EnumBudget, std::string("cannot decide branch: ") + e.what(), current_span(state),
                    Verdict{}, state);
          r.successors.clear();
          return r;
        }
      }
      if (!feasible) {
        ++r.pruned;
        continue;
      }
      s.trail.push_back(branch_decision(then_side));
      r.successors.push_back(std::move(s));
    }
  } catch (const NeedConcretize& need) {
    concretize(need.sym);
  } catch (const Pruned&) {
    ++r.pruned;
  } catch (const Fault& fault) {
    violation(fault.category, fault.message, fault.span, fault.verdict, state);
  } catch (const EnumerationBudgetExceeded& e) {
    violation(Category::EnumBudget, e.what(), current_span(state), Verdict{}, state);
  }
  return r;
}

// --------------------------------------------------------------- searching

namespace {

struct Partial {
  SearchStats stats;
  std::vector<Violation> violations;
  std::optional<ChoiceTrail> first_terminal;
  std::vector<ChoiceTrail> terminals;
  bool stop = false;

  void merge(Partial&& o) {
    stats.states += o.stats.states;
    stats.terminal += o.stats.terminal;
    stats.pruned += o.stats.pruned;
    stats.dead_ends += o.stats.dead_ends;
    stats.solver_calls += o.stats.solver_calls;
    stats.depth_limited += o.stats.depth_limited;
    stats.max_depth = std::max(stats.max_depth, o.stats.max_depth);
    for (auto& v : o.violations) violations.push_back(std::move(v));
    if (o.first_terminal && (!first_terminal || trail_less(*o.first_terminal, *first_terminal))) {
      first_terminal = std::move(o.first_terminal);
    }
    for (auto& t : o.terminals) terminals.push_back(std::move(t));
  }
};

/// Accounts for one step of `s`; returns the successors to explore.
std::vector<ExecState> visit(Engine& engine, const ExecState& s, Partial& out) {
  const SearchConfig& cfg = engine.config();
  out.stats.max_depth = std::max<std::uint64_t>(out.stats.max_depth, s.trail.size());
  if (s.steps >= cfg.max_depth) {
    ++out.stats.depth_limited;
    return {};
  }
  StepResult r = engine.step(s);
  ++out.stats.states;
  out.stats.pruned += r.pruned;
  out.stats.dead_ends += r.dead_ends;
  switch (r.kind) {
    case StepResult::Kind::Terminal:
      ++out.stats.terminal;
      if (!out.first_terminal || trail_less(s.trail, *out.first_terminal)) out.first_terminal = s.trail;
      if (cfg.collect_terminal_trails) out.terminals.push_back(s.trail);
      return {};
    case StepResult::Kind::Violation:
      out.violations.push_back(std::move(*r.violation));
      if (cfg.stop_at_first) out.stop = true;
      return {};
    case StepResult::Kind::Continue:
      break;
  }
  return std::move(r.successors);
}

void dfs(Engine& engine, ExecState root, Partial& out) {
  std::vector<ExecState> stack;
  stack.push_back(std::move(root));
  while (!stack.empty() && !out.stop) {
    ExecState s = std::move(stack.back());
    stack.pop_back();
    auto next = visit(engine, s, out);
    for (auto it = next.rbegin(); it != next.rend(); ++it) stack.push_back(std::move(*it));
  }
}

}  // namespace

Report Engine::explore() {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t calls_before = solver_calls_;
  Partial total;
  const unsigned workers = std::max(1u, config_.workers);

  if (workers == 1 || config_.stop_at_first) {
    dfs(*this, init_state(), total);
    total.stats.solver_calls = solver_calls_ - calls_before;
  } else {
    // Expand the root into an ordered frontier, then hand out subtrees.
    std::vector<ExecState> frontier;
    frontier.push_back(init_state());
    const std::size_t target = static_cast<std::size_t>(workers) * 16;
    for (int round = 0; round < 100'000 && !frontier.empty() && frontier.size() < target; ++round) {
      std::vector<ExecState> next;
      for (const auto& s : frontier) {
        for (auto& n : visit(*this, s, total)) next.push_back(std::move(n));
      }
      frontier = std::move(next);
    }
    total.stats.solver_calls = solver_calls_ - calls_before;

    std::vector<Partial> parts(frontier.size());
    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
      Engine local(program_, config_, mode_);
      for (;;) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= frontier.size()) break;
        const std::uint64_t before = local.solver_calls_;
        dfs(local, std::move(frontier[i]), parts[i]);
        parts[i].stats.solver_calls = local.solver_calls_ - before;
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    for (auto& p : parts) total.merge(std::move(p));
  }

  Report rep;
  for (const auto& f : program_.files) rep.files.push_back(f.name);
  rep.stats = total.stats;
  rep.stats.workers = workers;
  rep.stats.stopped = total.stop;
  rep.violations = std::move(total.violations);
  std::stable_sort(rep.violations.begin(), rep.violations.end(),
                   [](const Violation& a, const Violation& b) { return trail_less(a.trail, b.trail); });
  rep.first_terminal = std::move(total.first_terminal);
  rep.terminal_trails = std::move(total.terminals);
  std::sort(rep.terminal_trails.begin(), rep.terminal_trails.end(), trail_less);
  rep.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace {

std::string describe(const std::vector<ExecState>& succ, std::size_t depth) {
  std::string out;
  for (const auto& s : succ) {
    if (!out.empty()) out += ", ";
    out += to_string(s.trail.at(depth));
  }
  return out.empty() ? "none" : out;
}

}  // namespace

Trace Engine::replay(const ChoiceTrail& trail) {
  std::vector<std::string> output;
  set_output(&output);
  Trace t;
  ExecState s = init_state();
  std::size_t pos = 0;
  auto finish = [&]() {
    set_output(nullptr);
    t.output = std::move(output);
  };
  try {
    for (;;) {
      if (s.steps >= config_.max_depth) throw ReplayMismatch("path exceeds the depth limit");
      TraceStep ts;
      const SourceSpan span = current_span(s);
      ts.location = program_.diagnostic(Severity::Note, "", span).location();
      ts.source = Interp(*this, s).current_instr().stmt ? program_.snippet(span) : "}";
      StepResult r = step(s);
      if (r.kind == StepResult::Kind::Terminal) {
        t.steps.push_back(std::move(ts));
        if (pos != trail.size()) throw ReplayMismatch("path ends before the trail does");
        t.outcome = StepResult::Kind::Terminal;
        break;
      }
      if (r.kind == StepResult::Kind::Violation) {
        t.steps.push_back(std::move(ts));
        if (pos != trail.size()) throw ReplayMismatch("path ends in a violation before the trail does");
        t.outcome = StepResult::Kind::Violation;
        t.violation = std::move(r.violation);
        break;
      }
      if (r.successors.size() == 1 && r.successors[0].trail.size() == s.trail.size()) {
        s = std::move(r.successors[0]);
        ts.snapshot = snapshot(s);
        t.steps.push_back(std::move(ts));
        continue;
      }
      if (pos >= trail.size()) {
        throw ReplayMismatch("trail ends at a decision point (alternatives: " + describe(r.successors, s.trail.size()) +
                             ")");
      }
      auto it = std::find_if(r.successors.begin(), r.successors.end(),
                             [&](const ExecState& n) { return n.trail.at(s.trail.size()) == trail[pos]; });
      if (it == r.successors.end()) {
        throw ReplayMismatch("decision " + std::to_string(pos + 1) + " '" + to_string(trail[pos]) +
                             "' does not fit (alternatives: " + describe(r.successors, s.trail.size()) + ")");
      }
      ++pos;
      const bool executed = it->steps > s.steps;
      s = std::move(*it);
      if (executed) {
        ts.snapshot = snapshot(s);
        t.steps.push_back(std::move(ts));
      }
    }
  } catch (...) {
    set_output(nullptr);
    throw;
  }
  t.final_state = s;
  t.trail = s.trail;
  finish();
  return t;
}

Trace Engine::run(const ChoiceTrail& prefix) {
  std::vector<std::string> output;
  set_output(&output);
  Trace t;
  try {
    ExecState s = init_state();
    for (std::uint32_t i = 0; i < s.inputs.size(); ++i) {
      if (auto* ref = std::get_if<ArrayRef>(&s.inputs[i])) {
        const ArrayObject& arr = s.array(*ref);
        for (std::uint32_t k = 0; k < arr.cells.size(); ++k) {
          if (auto* rv = std::get_if<RealVal>(&arr.cells[k])) {
            if (auto c = rv->poly.constant_value()) t.inputs[SymConst{i, k}] = *c;
          }
        }
      }
    }
    std::size_t pos = 0;
    for (;;) {
      if (s.steps >= config_.max_depth) throw ReplayMismatch("path exceeds the depth limit");
      StepResult r = step(s);
      if (r.kind != StepResult::Kind::Continue) {
        t.outcome = r.kind;
        t.violation = std::move(r.violation);
        break;
      }
      if (r.successors.empty()) throw ReplayMismatch("path was pruned or reached an empty choice");
      if (r.successors.size() == 1 && r.successors[0].trail.size() == s.trail.size()) {
        s = std::move(r.successors[0]);
        continue;
      }
      std::size_t pick;
      if (pos < prefix.size()) {
        auto it = std::find_if(r.successors.begin(), r.successors.end(),
                               [&](const ExecState& n) { return n.trail.at(s.trail.size()) == prefix[pos]; });
        if (it == r.successors.end()) {
          throw ReplayMismatch("decision " + std::to_string(pos + 1) + " '" + to_string(prefix[pos]) +
                               "' does not fit (alternatives: " + describe(r.successors, s.trail.size()) + ")");
        }
        pick = static_cast<std::size_t>(it - r.successors.begin());
        ++pos;
      } else {
        pick = std::uniform_int_distribution<std::size_t>(0, r.successors.size() - 1)(rng_);
      }
      s = std::move(r.successors[pick]);
    }
    for (std::uint32_t i = 0; i < s.inputs.size(); ++i) {
      if (auto* n = std::get_if<Integer>(&s.inputs[i])) {
        t.inputs[SymConst{i, 0}] = Rational(*n);
      } else if (auto* sym = std::get_if<IntSym>(&s.inputs[i])) {
        const Poly p = sym->poly.substitute(s.pc.pinned());
        if (auto c = p.constant_value()) t.inputs[SymConst{i, 0}] = *c;
      }
    }
    t.final_state = s;
    t.trail = s.trail;
  } catch (...) {
    set_output(nullptr);
    throw;
  }
  set_output(nullptr);
  t.output = std::move(output);
  return t;
}

Report explore(const Program& program, const SearchConfig& config) {
  Engine engine(program, config);
  return engine.explore();
}

Trace replay(const Program& program, const SearchConfig& config, const ChoiceTrail& trail) {
  Engine engine(program, config);
  return engine.replay(trail);
}

}  // namespace vlsym
