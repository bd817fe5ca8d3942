#include <functional>
#include <map>
#include <set>

#include "vlsym/ast.hpp"

namespace vlsym {

std::vector<Diagnostic> link_diagnostics(const Program& program) {
  std::vector<Diagnostic> out;
  std::set<std::string> seen;
  for (const auto& in : program.inputs) {
    if (!seen.insert(in.name).second) {
      out.push_back(program.diagnostic(Severity::Error, "duplicate definition of '" + in.name + "'",
                                       in.span));
    }
  }
  for (const auto& fn : program.functions) {
    if (!seen.insert(fn.name).second) {
      SourceSpan head = fn.span;
      head.end = head.begin;
      out.push_back(program.diagnostic(Severity::Error, "duplicate definition of '" + fn.name + "'",
                                       head));
    }
  }
  return out;
}

namespace {

struct LocalVar {
  std::uint32_t slot;
  Type type;
};

class Validator {
 public:
  explicit Validator(Program& program) : program_(program) {}

  std::vector<Diagnostic> run() {
    diags_ = link_diagnostics(program_);
    check_globals();
    for (std::size_t i = 0; i < program_.functions.size(); ++i) {
      function_index_.try_emplace(program_.functions[i].name, i);
    }
    for (auto& fn : program_.functions) check_function(fn);
    check_entry();
    check_recursion();
    return std::move(diags_);
  }

 private:
  void error(const SourceSpan& span, std::string message) {
    diags_.push_back(program_.diagnostic(Severity::Error, std::move(message), span));
  }

  // ---------------------------------------------------------- globals

  void check_globals() {
    std::map<std::string, std::size_t> declared;
    for (const auto& g : program_.globals) {
      if (g.kind == GlobalItem::Kind::Input) {
        auto& in = program_.inputs[g.index];
        if (in.default_value && *in.default_value <= 0) {
          error(in.span, "default value of input '" + in.name + "' must be a positive literal");
        }
        if (in.extent) {
          check_global_expr(*in.extent, declared);
          if (in.extent->type != Type::Int && in.extent->type != Type::Error) {
            error(in.extent->span, "array extent must be an int");
          }
        }
        declared.try_emplace(in.name, g.index);
      } else {
        auto& a = program_.assumes[g.index];
        check_global_expr(*a.cond, declared);
        if (a.cond->type != Type::Bool && a.cond->type != Type::Error) {
          error(a.cond->span, "assume requires a boolean condition");
        }
      }
    }
  }

  // Extents and global assumptions may only read previously declared int inputs.
  void check_global_expr(Expr& e, const std::map<std::string, std::size_t>& declared) {
    if (e.kind == ExprKind::Var || e.kind == ExprKind::Index) {
      auto it = declared.find(e.text);
      if (it == declared.end() || program_.inputs[it->second].type != Type::Int ||
          e.kind == ExprKind::Index) {
        error(e.span, "'" + e.text + "' is not a previously declared int input");
        e.type = Type::Error;
        return;
      }
      e.ref = {VarRef::Scope::Input, static_cast<std::uint32_t>(it->second)};
      e.type = Type::Int;
      return;
    }
    if (e.kind == ExprKind::Equals || e.kind == ExprKind::Len) {
      error(e.span, "array builtins are not allowed in global declarations");
      e.type = Type::Error;
      return;
    }
    for (auto& a : e.args) check_global_expr(*a, declared);
    type_operator(e);
  }

  // --------------------------------------------------------- functions

  void check_function(FunctionDef& fn) {
    current_ = &fn;
    scopes_.clear();
    scopes_.emplace_back();
    next_slot_ = 0;
    for (const auto& p : fn.params) {
      if (p.type != Type::Int && p.type != Type::Real && !is_array(p.type)) {
        error(p.span, "invalid parameter type");
      }
      declare(p.name, p.type, p.span);
    }
    check_block(*fn.body, false);
    fn.num_slots = next_slot_;
    if (fn.return_type != Type::Void && !always_returns(*fn.body)) {
      SourceSpan head = fn.span;
      head.end = head.begin;
      error(head, "function '" + fn.name + "' does not return a value on every path");
    }
  }

  std::uint32_t declare(const std::string& name, Type type, const SourceSpan& span) {
    for (const auto& scope : scopes_) {
      if (scope.count(name)) {
        error(span, "redeclaration of '" + name + "'");
        break;
      }
    }
    if (program_.find_input(name)) error(span, "'" + name + "' shadows an input");
    const auto slot = next_slot_++;
    scopes_.back()[name] = {slot, type};
    return slot;
  }

  std::optional<std::pair<VarRef, Type>> lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) {
        return std::pair{VarRef{VarRef::Scope::Local, found->second.slot}, found->second.type};
      }
    }
    if (auto idx = program_.find_input(name)) {
      return std::pair{VarRef{VarRef::Scope::Input, static_cast<std::uint32_t>(*idx)},
                       program_.inputs[*idx].type};
    }
    return std::nullopt;
  }

  static bool always_returns(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Return:
        return true;
      case StmtKind::Block:
        for (const auto& c : s.body) {
          if (always_returns(*c)) return true;
        }
        return false;
      case StmtKind::If:
        return s.else_branch && always_returns(*s.then_branch) && always_returns(*s.else_branch);
      default:
        return false;
    }
  }

  void check_block(Stmt& block, bool new_scope = true) {
    if (new_scope) scopes_.emplace_back();
    for (auto& s : block.body) check_stmt(*s);
    if (new_scope) scopes_.pop_back();
  }

  void expect_type(const Expr& e, Type want, const std::string& what) {
    if (e.type == Type::Error || e.type == want) return;
    error(e.span, what + " must be " + to_string(want) + ", found " + to_string(e.type));
  }

  Type check_lvalue(LValue& lv) {
    auto found = lookup(lv.name);
    if (!found) {
      error(lv.span, "unknown variable '" + lv.name + "'");
      return lv.type = Type::Error;
    }
    lv.ref = found->first;
    Type t = found->second;
    if (lv.index) {
      check_expr(*lv.index);
      expect_type(*lv.index, Type::Int, "array index");
      if (!is_array(t)) {
        error(lv.span, "'" + lv.name + "' is not an array");
        return lv.type = Type::Error;
      }
      return lv.type = element_type(t);
    }
    if (is_array(t)) {
      error(lv.span, "cannot assign to the whole array '" + lv.name + "'");
      return lv.type = Type::Error;
    }
    return lv.type = t;
  }

  void check_stmt(Stmt& s) {
    switch (s.kind) {
      case StmtKind::VarDecl: {
        if (s.extent) {
          check_expr(*s.extent);
          expect_type(*s.extent, Type::Int, "array extent");
        }
        if (s.value) {
          check_expr(*s.value);
          expect_type(*s.value, s.decl_type, "initializer of '" + s.name + "'");
        }
        s.slot = declare(s.name, s.decl_type, s.span);
        break;
      }
      case StmtKind::Assign: {
        const Type t = check_lvalue(*s.target);
        check_expr(*s.value);
        if (t != Type::Error) expect_type(*s.value, t, "assigned value");
        break;
      }
      case StmtKind::Choose: {
        const Type t = check_lvalue(*s.target);
        if (t != Type::Error && t != Type::Int) error(s.target->span, "choose_int target must be an int");
        check_expr(*s.value);
        expect_type(*s.value, Type::Int, "choose_int argument");
        break;
      }
      case StmtKind::If:
        check_expr(*s.value);
        expect_type(*s.value, Type::Bool, "if condition");
        check_block(*s.then_branch);
        if (s.else_branch) check_block(*s.else_branch);
        break;
      case StmtKind::While:
        check_expr(*s.value);
        expect_type(*s.value, Type::Bool, "loop condition");
        check_block(*s.then_branch);
        break;
      case StmtKind::Call:
        check_call(s);
        break;
      case StmtKind::Return:
        if (s.value) {
          check_expr(*s.value);
          if (current_->return_type == Type::Void) {
            error(s.span, "void function '" + current_->name + "' cannot return a value");
          } else {
            expect_type(*s.value, current_->return_type, "returned value");
          }
        } else if (current_->return_type != Type::Void) {
          error(s.span, "function '" + current_->name + "' must return a value");
        }
        break;
      case StmtKind::Assert:
      case StmtKind::Assume:
        check_expr(*s.value);
        expect_type(*s.value, Type::Bool, s.kind == StmtKind::Assert ? "assert condition" : "assume condition");
        break;
      case StmtKind::Print:
        for (auto& a : s.args) {
          check_expr(*a, true);
          if (a->type == Type::Bool || a->type == Type::Void) {
            error(a->span, "print arguments must be numbers or arrays");
          }
        }
        break;
      case StmtKind::Block:
        check_block(s);
        break;
    }
  }

  void check_call(Stmt& s) {
    for (auto& a : s.args) check_expr(*a, true);
    auto it = function_index_.find(s.callee);
    if (it == function_index_.end()) {
      error(s.span, "unknown function '" + s.callee + "'");
      if (s.target) check_lvalue(*s.target);
      return;
    }
    s.callee_index = static_cast<std::uint32_t>(it->second);
    const FunctionDef& callee = program_.functions[it->second];
    calls_[current_->name].insert(callee.name);
    if (callee.name == program_.entry) error(s.span, "'" + program_.entry + "' cannot be called");
    if (callee.params.size() != s.args.size()) {
      error(s.span, "'" + callee.name + "' expects " + std::to_string(callee.params.size()) +
                        " argument(s), got " + std::to_string(s.args.size()));
    } else {
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        const Expr& arg = *s.args[i];
        const Type want = callee.params[i].type;
        if (arg.type == Type::Error) continue;
        if (is_array(want) && arg.kind != ExprKind::Var) {
          error(arg.span, "array argument must be an array variable");
        } else if (arg.type != want) {
          error(arg.span, "argument " + std::to_string(i + 1) + " of '" + callee.name + "' must be " +
                              to_string(want) + ", found " + to_string(arg.type));
        }
      }
    }
    if (s.target) {
      const Type t = check_lvalue(*s.target);
      if (callee.return_type == Type::Void) {
        error(s.span, "'" + callee.name + "' does not return a value");
      } else if (t != Type::Error && t != callee.return_type) {
        error(s.target->span, std::string("cannot assign ") + to_string(callee.return_type) + " to " +
                                  to_string(t));
      }
    }
  }

  // -------------------------------------------------------- expressions

  // Sets e.type from already-typed operands.
  void type_operator(Expr& e) {
    auto operand_error = [&]() {
      for (const auto& a : e.args) {
        if (a->type == Type::Error) return true;
      }
      return false;
    };
    switch (e.kind) {
      case ExprKind::IntLit:
        e.type = Type::Int;
        return;
      case ExprKind::RealLit:
        e.type = Type::Real;
        return;
      case ExprKind::Unary: {
        const Type t = e.args[0]->type;
        if (t == Type::Error) {
          e.type = Type::Error;
        } else if (e.unary_op == UnaryOp::Neg && (t == Type::Int || t == Type::Real)) {
          e.type = t;
        } else if (e.unary_op == UnaryOp::Not && t == Type::Bool) {
          e.type = Type::Bool;
        } else {
          error(e.span, std::string("invalid operand of type ") + to_string(t) + " for '" +
                            (e.unary_op == UnaryOp::Neg ? "-" : "!") + "'");
          e.type = Type::Error;
        }
        return;
      }
      case ExprKind::Binary: {
        if (operand_error()) {
          e.type = Type::Error;
          return;
        }
        const Type a = e.args[0]->type;
        const Type b = e.args[1]->type;
        const std::string op = to_string(e.binary_op);
        switch (e.binary_op) {
          case BinaryOp::Div:
            if (a == Type::Real && b == Type::Real) {
              e.type = Type::Real;
            } else {
              error(e.span, "`/` requires real operands");
              e.type = Type::Error;
            }
            return;
          case BinaryOp::Add:
          case BinaryOp::Sub:
          case BinaryOp::Mul:
            if (a == b && (a == Type::Int || a == Type::Real)) {
              e.type = a;
            } else {
              error(e.span, "operands of '" + op + "' must both be int or both be real, found " +
                                to_string(a) + " and " + to_string(b));
              e.type = Type::Error;
            }
            return;
          case BinaryOp::Lt:
          case BinaryOp::Le:
          case BinaryOp::Gt:
          case BinaryOp::Ge:
          case BinaryOp::Eq:
          case BinaryOp::Ne:
            if (a == b && (a == Type::Int || a == Type::Real)) {
              e.type = Type::Bool;
            } else {
              error(e.span, "operands of '" + op + "' must both be int or both be real, found " +
                                to_string(a) + " and " + to_string(b));
              e.type = Type::Error;
            }
            return;
          case BinaryOp::And:
          case BinaryOp::Or:
            if (a == Type::Bool && b == Type::Bool) {
              e.type = Type::Bool;
            } else {
              error(e.span, "operands of '" + op + "' must be boolean");
              e.type = Type::Error;
            }
            return;
        }
        return;
      }
      default:
        return;
    }
  }

  void check_expr(Expr& e, bool array_ok = false) {
    switch (e.kind) {
      case ExprKind::Var: {
        auto found = lookup(e.text);
        if (!found) {
          error(e.span, "unknown variable '" + e.text + "'");
          e.type = Type::Error;
          return;
        }
        e.ref = found->first;
        e.type = found->second;
        if (is_array(e.type) && !array_ok) {
          error(e.span, "array '" + e.text + "' used as a value");
          e.type = Type::Error;
        }
        return;
      }
      case ExprKind::Index: {
        check_expr(*e.args[0]);
        expect_type(*e.args[0], Type::Int, "array index");
        auto found = lookup(e.text);
        if (!found) {
          error(e.span, "unknown variable '" + e.text + "'");
          e.type = Type::Error;
          return;
        }
        e.ref = found->first;
        if (!is_array(found->second)) {
          error(e.span, "'" + e.text + "' is not an array");
          e.type = Type::Error;
          return;
        }
        e.type = element_type(found->second);
        return;
      }
      case ExprKind::Equals: {
        check_expr(*e.args[0], true);
        check_expr(*e.args[1], true);
        const Type a = e.args[0]->type;
        const Type b = e.args[1]->type;
        e.type = Type::Bool;
        if (a == Type::Error || b == Type::Error) return;
        if (!is_array(a) || a != b || e.args[0]->kind != ExprKind::Var || e.args[1]->kind != ExprKind::Var) {
          error(e.span, "equals requires two array variables of the same element type");
        }
        return;
      }
      case ExprKind::Len:
        check_expr(*e.args[0], true);
        e.type = Type::Int;
        if (e.args[0]->type != Type::Error &&
            (!is_array(e.args[0]->type) || e.args[0]->kind != ExprKind::Var)) {
          error(e.span, "len requires an array variable");
        }
        return;
      default:
        for (auto& a : e.args) check_expr(*a);
        type_operator(e);
        return;
    }
  }

  // ---------------------------------------------------- whole program

  void check_entry() {
    const FunctionDef* main = program_.find_function(program_.entry);
    if (!main) {
      SourceSpan span;
      Diagnostic d;
      d.message = "missing entry function '" + program_.entry + "'";
      d.file = program_.files.empty() ? "<program>" : program_.files.front().name;
      diags_.push_back(d);
      return;
    }
    if (!main->params.empty() || main->return_type != Type::Void) {
      SourceSpan head = main->span;
      head.end = head.begin;
      error(head, "'" + program_.entry + "' must take no parameters and return nothing");
    }
  }

  void check_recursion() {
    std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
    std::set<std::string> reported;
    std::function<void(const std::string&)> visit = [&](const std::string& name) {
      state[name] = 1;
      for (const auto& callee : calls_[name]) {
        if (state[callee] == 1) {
          if (reported.insert(callee).second) {
            const FunctionDef* fn = program_.find_function(callee);
            SourceSpan head = fn->span;
            head.end = head.begin;
            error(head, "recursive call cycle through '" + callee + "'");
          }
        } else if (state[callee] == 0) {
          visit(callee);
        }
      }
      state[name] = 2;
    };
    for (const auto& fn : program_.functions) {
      if (state[fn.name] == 0) visit(fn.name);
    }
  }

  Program& program_;
  std::vector<Diagnostic> diags_;
  const FunctionDef* current_ = nullptr;
  std::vector<std::map<std::string, LocalVar>> scopes_;
  std::uint32_t next_slot_ = 0;
  std::map<std::string, std::size_t> function_index_;
  std::map<std::string, std::set<std::string>> calls_;
};

}  // namespace

std::vector<Diagnostic> validate(Program& program) { return Validator(program).run(); }

}  // namespace vlsym
