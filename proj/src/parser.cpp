#include <map>
#include <stdexcept>

#include "vlsym/parser.hpp"

namespace vlsym {
namespace {

constexpr int kMaxNesting = 200;

struct SyntaxError {
  Diagnostic diag;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::uint32_t file, const std::string& file_name,
         Program& program)
      : tokens_(std::move(tokens)), file_(file), file_name_(file_name), program_(program) {}

  void parse_file() {
    while (!at_end()) parse_item();
  }

 private:
  // ------------------------------------------------------------ tokens

  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
  }
  bool check(std::string_view lexeme, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t && (t->kind == TokenKind::Punct || t->kind == TokenKind::Keyword) && t->lexeme == lexeme;
  }
  bool check_kind(TokenKind kind, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t && t->kind == kind;
  }
  const Token& take() {
    last_ = &tokens_[pos_++];
    return *last_;
  }
  bool accept(std::string_view lexeme) {
    if (!check(lexeme)) return false;
    take();
    return true;
  }

  SourcePos start_of(const Token& t) const { return {t.line, t.col}; }
  SourcePos end_of(const Token& t) const {
    return {t.line, t.col + static_cast<std::uint32_t>(t.lexeme.size()) - 1};
  }
  SourcePos here() const {
    if (const Token* t = peek()) return start_of(*t);
    return last_ ? end_of(*last_) : SourcePos{};
  }
  SourceSpan span_from(SourcePos begin) const {
    return {file_, begin, last_ ? end_of(*last_) : begin};
  }

  [[noreturn]] void fail(const std::string& message) const {
    Diagnostic d;
    d.message = message;
    d.file = file_name_;
    if (const Token* t = peek()) {
      d.line = t->line;
      d.col_begin = t->col;
      d.col_end = t->col + static_cast<std::uint32_t>(t->lexeme.size()) - 1;
      d.message += ", found '" + t->lexeme + "'";
    } else {
      auto p = here();
      d.line = p.line;
      d.col_begin = d.col_end = p.col;
      d.message += ", found end of file";
    }
    throw SyntaxError{std::move(d)};
  }

  void expect(std::string_view lexeme) {
    if (!accept(lexeme)) fail("expected '" + std::string(lexeme) + "'");
  }

  const Token& expect_identifier(const char* what) {
    if (!check_kind(TokenKind::Identifier)) fail(std::string("expected ") + what);
    return take();
  }

  struct NestingGuard {
    explicit NestingGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxNesting) parser.fail("nesting too deep");
    }
    ~NestingGuard() { --parser.depth_; }
    Parser& parser;
  };

  // ------------------------------------------------------------- items

  void parse_item() {
    if (check("input")) return parse_input();
    if (check("assume")) {
      const auto begin = here();
      take();
      expect("(");
      GlobalAssume g;
      g.cond = parse_expr();
      expect(")");
      expect(";");
      g.span = span_from(begin);
      program_.globals.push_back({GlobalItem::Kind::Assume, program_.assumes.size()});
      program_.assumes.push_back(std::move(g));
      return;
    }
    if (check("func")) return parse_function();
    fail("expected 'input', 'assume' or 'func'");
  }

  void parse_input() {
    const auto begin = here();
    take();
    if (accept("int")) {
      do {
        const Token& name = expect_identifier("input name");
        InputDecl decl;
        decl.name = name.lexeme;
        decl.type = Type::Int;
        if (accept("=")) {
          if (!check_kind(TokenKind::IntLiteral)) fail("expected an integer literal default");
          decl.default_value = Integer(take().lexeme);
        }
        decl.span = {file_, start_of(name), end_of(*last_)};
        add_input(std::move(decl));
      } while (accept(","));
    } else if (accept("real")) {
      do {
        const Token& name = expect_identifier("input name");
        InputDecl decl;
        decl.name = name.lexeme;
        decl.type = Type::RealArray;
        expect("[");
        decl.extent = parse_expr();
        expect("]");
        decl.span = {file_, start_of(name), end_of(*last_)};
        add_input(std::move(decl));
      } while (accept(","));
    } else {
      fail("expected 'int' or 'real' after 'input'");
    }
    expect(";");
    (void)begin;
  }

  void add_input(InputDecl decl) {
    program_.globals.push_back({GlobalItem::Kind::Input, program_.inputs.size()});
    program_.inputs.push_back(std::move(decl));
  }

  Type parse_scalar_type() {
    if (accept("int")) return Type::Int;
    if (accept("real")) return Type::Real;
    fail("expected a type ('int' or 'real')");
  }

  void parse_function() {
    const auto begin = here();
    take();
    FunctionDef fn;
    fn.name = expect_identifier("function name").lexeme;
    expect("(");
    if (!check(")")) {
      do {
        const auto pbegin = here();
        Param p;
        p.type = parse_scalar_type();
        p.name = expect_identifier("parameter name").lexeme;
        if (accept("[")) {
          expect("]");
          p.type = array_of(p.type);
        }
        p.span = span_from(pbegin);
        fn.params.push_back(std::move(p));
      } while (accept(","));
    }
    expect(")");
    if (accept(":")) fn.return_type = parse_scalar_type();
    fn.body = parse_block();
    fn.span = span_from(begin);
    program_.functions.push_back(std::move(fn));
  }

  // -------------------------------------------------------- statements

  StmtPtr parse_block() {
    NestingGuard guard(*this);
    const auto begin = here();
    expect("{");
    auto block = std::make_unique<Stmt>();
    block->kind = StmtKind::Block;
    while (!check("}")) {
      if (at_end()) fail("expected '}'");
      block->body.push_back(parse_stmt());
    }
    take();
    block->span = span_from(begin);
    return block;
  }

  // Loop and branch bodies are always blocks.
  StmtPtr parse_body() {
    if (check("{")) return parse_block();
    auto stmt = parse_stmt();
    auto block = std::make_unique<Stmt>();
    block->kind = StmtKind::Block;
    block->span = stmt->span;
    block->body.push_back(std::move(stmt));
    return block;
  }

  StmtPtr make_stmt(StmtKind kind) {
    auto s = std::make_unique<Stmt>();
    s->kind = kind;
    return s;
  }

  StmtPtr parse_stmt() {
    NestingGuard guard(*this);
    const auto begin = here();
    if (check("{")) return parse_block();
    if (check("var")) {
      auto s = parse_var_decl();
      expect(";");
      s->span = span_from(begin);
      return s;
    }
    if (accept("if")) {
      auto s = make_stmt(StmtKind::If);
      expect("(");
      s->value = parse_expr();
      expect(")");
      s->then_branch = parse_body();
      if (accept("else")) s->else_branch = parse_body();
      s->span = span_from(begin);
      return s;
    }
    if (accept("while")) {
      auto s = make_stmt(StmtKind::While);
      expect("(");
      s->value = parse_expr();
      expect(")");
      s->then_branch = parse_body();
      s->span = span_from(begin);
      return s;
    }
    if (accept("for")) return parse_for(begin);
    if (accept("return")) {
      auto s = make_stmt(StmtKind::Return);
      if (!check(";")) s->value = parse_expr();
      expect(";");
      s->span = span_from(begin);
      return s;
    }
    if (check("assert") || check("assume")) {
      auto s = make_stmt(take().lexeme == "assert" ? StmtKind::Assert : StmtKind::Assume);
      expect("(");
      s->value = parse_expr();
      expect(")");
      s->span = span_from(begin);
      expect(";");
      return s;
    }
    if (accept("print")) {
      auto s = make_stmt(StmtKind::Print);
      expect("(");
      if (!check(")")) {
        do {
          s->args.push_back(parse_expr());
        } while (accept(","));
      }
      expect(")");
      expect(";");
      s->span = span_from(begin);
      return s;
    }
    auto s = parse_simple();
    expect(";");
    return s;
  }

  StmtPtr parse_var_decl() {
    const auto begin = here();
    expect("var");
    auto s = make_stmt(StmtKind::VarDecl);
    s->decl_type = parse_scalar_type();
    s->name = expect_identifier("variable name").lexeme;
    if (accept("[")) {
      s->decl_type = array_of(s->decl_type);
      s->extent = parse_expr();
      expect("]");
    } else if (accept("=")) {
      s->value = parse_expr();
    }
    s->span = span_from(begin);
    return s;
  }

  // for (init; cond; step) body  ==>  { init; while (cond) { body...; step; } }
  StmtPtr parse_for(SourcePos begin) {
    expect("(");
    StmtPtr init;
    if (check("var")) {
      init = parse_var_decl();
    } else if (!check(";")) {
      init = parse_simple();
    }
    expect(";");
    auto cond = parse_expr();
    expect(";");
    StmtPtr step;
    if (!check(")")) step = parse_simple();
    expect(")");
    auto body = parse_body();
    const auto span = span_from(begin);

    auto loop = make_stmt(StmtKind::While);
    loop->value = std::move(cond);
    if (step) body->body.push_back(std::move(step));
    body->span = span;
    loop->then_branch = std::move(body);
    loop->span = span;

    auto block = make_stmt(StmtKind::Block);
    if (init) block->body.push_back(std::move(init));
    block->body.push_back(std::move(loop));
    block->span = span;
    return block;
  }

  LValue parse_lvalue() {
    const Token& name = expect_identifier("a variable");
    LValue lv;
    lv.name = name.lexeme;
    if (accept("[")) {
      lv.index = parse_expr();
      expect("]");
    }
    lv.span = {file_, start_of(name), end_of(*last_)};
    return lv;
  }

  ExprPtr lvalue_read(const LValue& lv) {
    auto e = std::make_unique<Expr>();
    e->span = lv.span;
    e->text = lv.name;
    if (lv.index) {
      e->kind = ExprKind::Index;
      e->args.push_back(clone(*lv.index));
    } else {
      e->kind = ExprKind::Var;
    }
    return e;
  }

  static ExprPtr clone(const Expr& e) {
    auto c = std::make_unique<Expr>();
    c->kind = e.kind;
    c->span = e.span;
    c->int_value = e.int_value;
    c->real_value = e.real_value;
    c->text = e.text;
    c->unary_op = e.unary_op;
    c->binary_op = e.binary_op;
    for (const auto& a : e.args) c->args.push_back(clone(*a));
    return c;
  }

  void parse_call_args(Stmt& s) {
    expect("(");
    if (!check(")")) {
      do {
        s.args.push_back(parse_expr());
      } while (accept(","));
    }
    expect(")");
  }

  StmtPtr parse_simple() {
    const auto begin = here();
    if (check_kind(TokenKind::Identifier) && check("(", 1)) {
      auto s = make_stmt(StmtKind::Call);
      s->callee = take().lexeme;
      parse_call_args(*s);
      s->span = span_from(begin);
      return s;
    }
    LValue target = parse_lvalue();
    if (accept("=")) {
      if (accept("choose_int")) {
        auto s = make_stmt(StmtKind::Choose);
        expect("(");
        s->value = parse_expr();
        expect(")");
        s->target = std::move(target);
        s->span = span_from(begin);
        return s;
      }
      if (check_kind(TokenKind::Identifier) && check("(", 1)) {
        auto s = make_stmt(StmtKind::Call);
        s->callee = take().lexeme;
        parse_call_args(*s);
        s->target = std::move(target);
        s->span = span_from(begin);
        return s;
      }
      auto s = make_stmt(StmtKind::Assign);
      s->value = parse_expr();
      s->target = std::move(target);
      s->span = span_from(begin);
      return s;
    }
    // Compound assignment and increments desugar into plain assignment.
    BinaryOp op;
    ExprPtr rhs;
    if (check("+=") || check("-=") || check("*=")) {
      const std::string lex = take().lexeme;
      op = lex == "+=" ? BinaryOp::Add : lex == "-=" ? BinaryOp::Sub : BinaryOp::Mul;
      rhs = parse_expr();
    } else if (check("++") || check("--")) {
      const Token& t = take();
      op = t.lexeme == "++" ? BinaryOp::Add : BinaryOp::Sub;
      rhs = std::make_unique<Expr>();
      rhs->kind = ExprKind::IntLit;
      rhs->int_value = 1;
      rhs->text = "1";
      rhs->span = {file_, start_of(t), end_of(t)};
    } else {
      fail("expected '=', '+=', '-=', '*=', '++' or '--'");
    }
    auto s = make_stmt(StmtKind::Assign);
    s->span = span_from(begin);
    auto sum = std::make_unique<Expr>();
    sum->kind = ExprKind::Binary;
    sum->binary_op = op;
    sum->span = s->span;
    sum->args.push_back(lvalue_read(target));
    sum->args.push_back(std::move(rhs));
    s->value = std::move(sum);
    s->target = std::move(target);
    return s;
  }

  // ------------------------------------------------------- expressions

  ExprPtr binary(BinaryOp op, ExprPtr a, ExprPtr b) {
    auto e = std::make_unique<Expr>();
    e->kind = ExprKind::Binary;
    e->binary_op = op;
    e->span = SourceSpan::cover(a->span, b->span);
    e->args.push_back(std::move(a));
    e->args.push_back(std::move(b));
    return e;
  }

  ExprPtr parse_expr() {
    NestingGuard guard(*this);
    return parse_or();
  }

  ExprPtr parse_or() {
    auto lhs = parse_and();
    while (accept("||")) lhs = binary(BinaryOp::Or, std::move(lhs), parse_and());
    return lhs;
  }

  ExprPtr parse_and() {
    auto lhs = parse_equality();
    while (accept("&&")) lhs = binary(BinaryOp::And, std::move(lhs), parse_equality());
    return lhs;
  }

  ExprPtr parse_equality() {
    auto lhs = parse_relational();
    while (check("==") || check("!=")) {
      const auto op = take().lexeme == "==" ? BinaryOp::Eq : BinaryOp::Ne;
      lhs = binary(op, std::move(lhs), parse_relational());
    }
    return lhs;
  }

  ExprPtr parse_relational() {
    auto lhs = parse_additive();
    while (check("<") || check("<=") || check(">") || check(">=")) {
      const std::string lex = take().lexeme;
      const auto op = lex == "<"    ? BinaryOp::Lt
                      : lex == "<=" ? BinaryOp::Le
                      : lex == ">"  ? BinaryOp::Gt
                                    : BinaryOp::Ge;
      lhs = binary(op, std::move(lhs), parse_additive());
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    auto lhs = parse_multiplicative();
    while (check("+") || check("-")) {
      const auto op = take().lexeme == "+" ? BinaryOp::Add : BinaryOp::Sub;
      lhs = binary(op, std::move(lhs), parse_multiplicative());
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    auto lhs = parse_unary();
    while (check("*") || check("/")) {
      const auto op = take().lexeme == "*" ? BinaryOp::Mul : BinaryOp::Div;
      lhs = binary(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    NestingGuard guard(*this);
    if (check("-") || check("!")) {
      const Token& t = take();
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Unary;
      e->unary_op = t.lexeme == "-" ? UnaryOp::Neg : UnaryOp::Not;
      auto operand = parse_unary();
      e->span = {file_, start_of(t), operand->span.end};
      e->args.push_back(std::move(operand));
      return e;
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const auto begin = here();
    auto e = std::make_unique<Expr>();
    if (check_kind(TokenKind::IntLiteral)) {
      const Token& t = take();
      e->kind = ExprKind::IntLit;
      e->text = t.lexeme;
      e->int_value = Integer(t.lexeme);
    } else if (check_kind(TokenKind::DecimalLiteral)) {
      const Token& t = take();
      e->kind = ExprKind::RealLit;
      e->text = t.lexeme;
      const auto dot = t.lexeme.find('.');
      const std::string digits = t.lexeme.substr(0, dot) + t.lexeme.substr(dot + 1);
      Integer den = 1;
      for (std::size_t k = dot + 1; k < t.lexeme.size(); ++k) den *= 10;
      e->real_value = make_rational(Integer(digits), den);
    } else if (check_kind(TokenKind::Identifier)) {
      e->text = take().lexeme;
      e->kind = ExprKind::Var;
      if (accept("[")) {
        e->kind = ExprKind::Index;
        e->args.push_back(parse_expr());
        expect("]");
      }
    } else if (accept("equals")) {
      e->kind = ExprKind::Equals;
      expect("(");
      e->args.push_back(parse_expr());
      expect(",");
      e->args.push_back(parse_expr());
      expect(")");
    } else if (accept("len")) {
      e->kind = ExprKind::Len;
      expect("(");
      e->args.push_back(parse_expr());
      expect(")");
    } else if (accept("(")) {
      auto inner = parse_expr();
      expect(")");
      inner->span = span_from(begin);
      return inner;
    } else {
      fail("expected an expression");
    }
    e->span = span_from(begin);
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Token* last_ = nullptr;
  int depth_ = 0;
  std::uint32_t file_;
  const std::string& file_name_;
  Program& program_;
};

}  // namespace

ParseResult parse(std::vector<SourceFile> files) {
  ParseResult result;
  result.program.files = std::move(files);
  for (std::uint32_t f = 0; f < result.program.files.size(); ++f) {
    const auto& file = result.program.files[f];
    auto tokens = tokenize(file.text, file.name);
    if (auto* diag = std::get_if<Diagnostic>(&tokens)) {
      result.diagnostics.push_back(std::move(*diag));
      continue;
    }
    Parser parser(std::move(std::get<std::vector<Token>>(tokens)), f, file.name, result.program);
    try {
      parser.parse_file();
    } catch (SyntaxError& e) {
      result.diagnostics.push_back(std::move(e.diag));
    }
  }
  for (auto& d : link_diagnostics(result.program)) result.diagnostics.push_back(std::move(d));
  return result;
}

ParseResult parse_source(std::string text, std::string name) {
  std::vector<SourceFile> files;
  files.push_back({std::move(name), std::move(text)});
  return parse(std::move(files));
}

ParseResult parse_and_validate(std::vector<SourceFile> files) {
  ParseResult result = parse(std::move(files));
  if (result.ok()) result.diagnostics = validate(result.program);
  return result;
}

}  // namespace vlsym
