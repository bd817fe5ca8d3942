#include <sstream>

#include "vlsym/ast.hpp"

namespace vlsym {

const char* to_string(Type type) {
  switch (type) {
    case Type::Error:
      return "<error>";
    case Type::Void:
      return "void";
    case Type::Bool:
      return "bool";
    case Type::Int:
      return "int";
    case Type::Real:
      return "real";
    case Type::IntArray:
      return "int[]";
    case Type::RealArray:
      return "real[]";
  }
  return "?";
}

bool is_array(Type type) { return type == Type::IntArray || type == Type::RealArray; }

Type element_type(Type array_type) {
  switch (array_type) {
    case Type::IntArray:
      return Type::Int;
    case Type::RealArray:
      return Type::Real;
    default:
      return Type::Error;
  }
}

Type array_of(Type element) {
  switch (element) {
    case Type::Int:
      return Type::IntArray;
    case Type::Real:
      return Type::RealArray;
    default:
      return Type::Error;
  }
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add:
      return "+";
    case BinaryOp::Sub:
      return "-";
    case BinaryOp::Mul:
      return "*";
    case BinaryOp::Div:
      return "/";
    case BinaryOp::Lt:
      return "<";
    case BinaryOp::Le:
      return "<=";
    case BinaryOp::Gt:
      return ">";
    case BinaryOp::Ge:
      return ">=";
    case BinaryOp::Eq:
      return "==";
    case BinaryOp::Ne:
      return "!=";
    case BinaryOp::And:
      return "&&";
    case BinaryOp::Or:
      return "||";
  }
  return "?";
}

std::string Diagnostic::location() const {
  return file + ":" + std::to_string(line) + ":" + std::to_string(col_begin) + "-" +
         std::to_string(col_end);
}

std::string Diagnostic::render() const {
  const char* sev = severity == Severity::Error ? "error" : severity == Severity::Warning ? "warning" : "note";
  return location() + ": " + sev + ": " + message;
}

// ----------------------------------------------------------------- Program

const FunctionDef* Program::find_function(const std::string& name) const {
  for (const auto& fn : functions) {
    if (fn.name == name) return &fn;
  }
  return nullptr;
}

std::optional<std::size_t> Program::find_input(const std::string& name) const {
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].name == name) return i;
  }
  return std::nullopt;
}

std::string Program::file_name(std::uint32_t file) const {
  return file < files.size() ? files[file].name : "<unknown>";
}

std::string Program::snippet(const SourceSpan& span) const {
  if (span.file >= files.size()) return {};
  const std::string& text = files[span.file].text;
  std::size_t pos = 0;
  for (std::uint32_t line = 1; line < span.begin.line && pos != std::string::npos; ++line) {
    pos = text.find('\n', pos);
    if (pos != std::string::npos) ++pos;
  }
  if (pos == std::string::npos) return {};
  std::size_t eol = text.find('\n', pos);
  std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
  const std::size_t begin = span.begin.col - 1;
  if (begin >= line.size()) return {};
  std::size_t end = span.end.line == span.begin.line ? span.end.col : line.size();
  if (end > line.size()) end = line.size();
  return line.substr(begin, end - begin);
}

Diagnostic Program::diagnostic(Severity severity, std::string message, const SourceSpan& span) const {
  Diagnostic d;
  d.severity = severity;
  d.message = std::move(message);
  d.file = file_name(span.file);
  d.line = span.begin.line;
  d.col_begin = span.begin.col;
  d.col_end = span.end.line == span.begin.line ? span.end.col : span.begin.col;
  if (d.col_end < d.col_begin) d.col_end = d.col_begin;
  if (span.end.line != span.begin.line && span.file < files.size()) {
    // Extend to the end of the first line.
    const auto text = snippet(span);
    if (!text.empty()) d.col_end = d.col_begin + static_cast<std::uint32_t>(text.size()) - 1;
  }
  return d;
}

// ------------------------------------------------------------ pretty print

namespace {

int precedence(const Expr& e) {
  if (e.kind == ExprKind::Unary) return 7;
  if (e.kind != ExprKind::Binary) return 8;
  switch (e.binary_op) {
    case BinaryOp::Or:
      return 1;
    case BinaryOp::And:
      return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne:
      return 3;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
      return 4;
    case BinaryOp::Add:
    case BinaryOp::Sub:
      return 5;
    case BinaryOp::Mul:
    case BinaryOp::Div:
      return 6;
  }
  return 8;
}

void print_expr(std::ostream& os, const Expr& e);

void print_operand(std::ostream& os, const Expr& e, bool parens) {
  if (parens) os << "(";
  print_expr(os, e);
  if (parens) os << ")";
}

void print_expr(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case ExprKind::IntLit:
      os << e.int_value.get_str();
      break;
    case ExprKind::RealLit:
      os << e.text;
      break;
    case ExprKind::Var:
      os << e.text;
      break;
    case ExprKind::Index:
      os << e.text << "[";
      print_expr(os, *e.args[0]);
      os << "]";
      break;
    case ExprKind::Unary:
      os << (e.unary_op == UnaryOp::Neg ? "-" : "!");
      print_operand(os, *e.args[0], precedence(*e.args[0]) <= 7);
      break;
    case ExprKind::Binary: {
      const int p = precedence(e);
      print_operand(os, *e.args[0], precedence(*e.args[0]) < p);
      os << " " << to_string(e.binary_op) << " ";
      print_operand(os, *e.args[1], precedence(*e.args[1]) <= p);
      break;
    }
    case ExprKind::Equals:
      os << "equals(";
      print_expr(os, *e.args[0]);
      os << ", ";
      print_expr(os, *e.args[1]);
      os << ")";
      break;
    case ExprKind::Len:
      os << "len(";
      print_expr(os, *e.args[0]);
      os << ")";
      break;
  }
}

void print_lvalue(std::ostream& os, const LValue& lv) {
  os << lv.name;
  if (lv.index) {
    os << "[";
    print_expr(os, *lv.index);
    os << "]";
  }
}

void print_args(std::ostream& os, const std::vector<ExprPtr>& args) {
  os << "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    print_expr(os, *args[i]);
  }
  os << ")";
}

const char* scalar_name(Type t) { return t == Type::Int || t == Type::IntArray ? "int" : "real"; }

void print_stmt(std::ostream& os, const Stmt& s, int indent);

void print_block_body(std::ostream& os, const Stmt& block, int indent) {
  for (const auto& child : block.body) print_stmt(os, *child, indent);
}

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  switch (s.kind) {
    case StmtKind::VarDecl:
      os << pad << "var " << scalar_name(s.decl_type) << " " << s.name;
      if (is_array(s.decl_type)) {
        os << "[";
        print_expr(os, *s.extent);
        os << "]";
      } else if (s.value) {
        os << " = ";
        print_expr(os, *s.value);
      }
      os << ";\n";
      break;
    case StmtKind::Assign:
      os << pad;
      print_lvalue(os, *s.target);
      os << " = ";
      print_expr(os, *s.value);
      os << ";\n";
      break;
    case StmtKind::Choose:
      os << pad;
      print_lvalue(os, *s.target);
      os << " = choose_int(";
      print_expr(os, *s.value);
      os << ");\n";
      break;
    case StmtKind::Call:
      os << pad;
      if (s.target) {
        print_lvalue(os, *s.target);
        os << " = ";
      }
      os << s.callee;
      print_args(os, s.args);
      os << ";\n";
      break;
    case StmtKind::If: {
      os << pad << "if (";
      print_expr(os, *s.value);
      os << ") {\n";
      print_block_body(os, *s.then_branch, indent + 1);
      const Stmt* els = s.else_branch.get();
      // else-if chains
      while (els && els->body.size() == 1 && els->body[0]->kind == StmtKind::If) {
        const Stmt& inner = *els->body[0];
        os << pad << "} else if (";
        print_expr(os, *inner.value);
        os << ") {\n";
        print_block_body(os, *inner.then_branch, indent + 1);
        els = inner.else_branch.get();
      }
      if (els) {
        os << pad << "} else {\n";
        print_block_body(os, *els, indent + 1);
      }
      os << pad << "}\n";
      break;
    }
    case StmtKind::While:
      os << pad << "while (";
      print_expr(os, *s.value);
      os << ") {\n";
      print_block_body(os, *s.then_branch, indent + 1);
      os << pad << "}\n";
      break;
    case StmtKind::Return:
      os << pad << "return";
      if (s.value) {
        os << " ";
        print_expr(os, *s.value);
      }
      os << ";\n";
      break;
    case StmtKind::Assert:
    case StmtKind::Assume:
      os << pad << (s.kind == StmtKind::Assert ? "assert(" : "assume(");
      print_expr(os, *s.value);
      os << ");\n";
      break;
    case StmtKind::Print:
      os << pad << "print";
      print_args(os, s.args);
      os << ";\n";
      break;
    case StmtKind::Block:
      os << pad << "{\n";
      print_block_body(os, s, indent + 1);
      os << pad << "}\n";
      break;
  }
}

}  // namespace

std::string pretty_print(const Expr& expr) {
  std::ostringstream os;
  print_expr(os, expr);
  return os.str();
}

std::string pretty_print(const Program& program) {
  std::ostringstream os;
  for (const auto& g : program.globals) {
    if (g.kind == GlobalItem::Kind::Assume) {
      os << "assume(";
      print_expr(os, *program.assumes[g.index].cond);
      os << ");\n";
      continue;
    }
    const auto& in = program.inputs[g.index];
    if (in.type == Type::Int) {
      os << "input int " << in.name;
      if (in.default_value) os << " = " << in.default_value->get_str();
    } else {
      os << "input real " << in.name << "[";
      print_expr(os, *in.extent);
      os << "]";
    }
    os << ";\n";
  }
  for (const auto& fn : program.functions) {
    if (os.tellp() > 0) os << "\n";
    os << "func " << fn.name << "(";
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      if (i) os << ", ";
      os << scalar_name(fn.params[i].type) << " " << fn.params[i].name;
      if (is_array(fn.params[i].type)) os << "[]";
    }
    os << ")";
    if (fn.return_type != Type::Void) os << ": " << to_string(fn.return_type);
    os << " {\n";
    print_block_body(os, *fn.body, 1);
    os << "}\n";
  }
  return os.str();
}

// ------------------------------------------------------ structural equality

namespace {

template <class T, class Eq>
bool ptr_equal(const std::unique_ptr<T>& a, const std::unique_ptr<T>& b, Eq eq) {
  if (!a || !b) return !a && !b;
  return eq(*a, *b);
}

bool exprs_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!structurally_equal(*a[i], *b[i])) return false;
  }
  return true;
}

bool expr_eq(const Expr& a, const Expr& b) { return structurally_equal(a, b); }
bool stmt_eq(const Stmt& a, const Stmt& b) { return structurally_equal(a, b); }

bool lvalues_equal(const std::optional<LValue>& a, const std::optional<LValue>& b) {
  if (!a || !b) return !a && !b;
  return a->name == b->name && ptr_equal(a->index, b->index, expr_eq);
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::IntLit:
      if (a.int_value != b.int_value) return false;
      break;
    case ExprKind::RealLit:
      if (a.real_value != b.real_value) return false;
      break;
    case ExprKind::Var:
    case ExprKind::Index:
      if (a.text != b.text) return false;
      break;
    case ExprKind::Unary:
      if (a.unary_op != b.unary_op) return false;
      break;
    case ExprKind::Binary:
      if (a.binary_op != b.binary_op) return false;
      break;
    case ExprKind::Equals:
    case ExprKind::Len:
      break;
  }
  return exprs_equal(a.args, b.args);
}

bool structurally_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.decl_type != b.decl_type || a.name != b.name || a.callee != b.callee) {
    return false;
  }
  if (!ptr_equal(a.extent, b.extent, expr_eq) || !ptr_equal(a.value, b.value, expr_eq)) return false;
  if (!lvalues_equal(a.target, b.target)) return false;
  if (!exprs_equal(a.args, b.args)) return false;
  if (!ptr_equal(a.then_branch, b.then_branch, stmt_eq)) return false;
  if (!ptr_equal(a.else_branch, b.else_branch, stmt_eq)) return false;
  if (a.body.size() != b.body.size()) return false;
  for (std::size_t i = 0; i < a.body.size(); ++i) {
    if (!structurally_equal(*a.body[i], *b.body[i])) return false;
  }
  return true;
}

bool structurally_equal(const Program& a, const Program& b) {
  if (a.inputs.size() != b.inputs.size() || a.assumes.size() != b.assumes.size() ||
      a.globals.size() != b.globals.size() || a.functions.size() != b.functions.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.globals.size(); ++i) {
    if (a.globals[i].kind != b.globals[i].kind || a.globals[i].index != b.globals[i].index) return false;
  }
  for (std::size_t i = 0; i < a.inputs.size(); ++i) {
    const auto& x = a.inputs[i];
    const auto& y = b.inputs[i];
    if (x.name != y.name || x.type != y.type || x.default_value != y.default_value ||
        !ptr_equal(x.extent, y.extent, expr_eq)) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.assumes.size(); ++i) {
    if (!structurally_equal(*a.assumes[i].cond, *b.assumes[i].cond)) return false;
  }
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const auto& f = a.functions[i];
    const auto& g = b.functions[i];
    if (f.name != g.name || f.return_type != g.return_type || f.params.size() != g.params.size()) {
      return false;
    }
    for (std::size_t k = 0; k < f.params.size(); ++k) {
      if (f.params[k].name != g.params[k].name || f.params[k].type != g.params[k].type) return false;
    }
    if (!structurally_equal(*f.body, *g.body)) return false;
  }
  return true;
}

}  // namespace vlsym
