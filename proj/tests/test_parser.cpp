#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace vlsym;
using namespace testing;

namespace {

bool span_nests(const Expr& e) {
  for (const auto& a : e.args) {
    if (!e.span.contains(a->span) || !span_nests(*a)) return false;
  }
  return true;
}

bool span_nests(const Stmt& s) {
  auto inside = [&](const auto& child) { return !child || s.span.contains(child->span); };
  if (!inside(s.value) || !inside(s.extent) || !inside(s.then_branch) || !inside(s.else_branch)) return false;
  if (s.value && !span_nests(*s.value)) return false;
  for (const auto& a : s.args) {
    if (!s.span.contains(a->span) || !span_nests(*a)) return false;
  }
  for (const auto& b : s.body) {
    if (!s.span.contains(b->span) || !span_nests(*b)) return false;
  }
  if (s.then_branch && !span_nests(*s.then_branch)) return false;
  if (s.else_branch && !span_nests(*s.else_branch)) return false;
  return true;
}

}  // namespace

TEST_CASE("the corpus parses") {
  for (const auto& set : {kCleanCorpus, kSwapBugCorpus, kColmaxBugCorpus}) {
    ParseResult r = parse(load_corpus(corpus_dir(), set));
    CHECK(r.ok());
    CHECK(r.program.functions.size() >= 6);
    CHECK(r.program.inputs.size() == 6);
  }
}

TEST_CASE("input declarations") {
  ParseResult r = parse_source("input int N;");
  REQUIRE(r.ok());
  REQUIRE(r.program.inputs.size() == 1);
  CHECK(r.program.inputs[0].name == "N");
  CHECK(r.program.inputs[0].type == Type::Int);
  CHECK_FALSE(r.program.inputs[0].default_value);

  r = parse_source("input int B = 3, N; input real V[N];");
  REQUIRE(r.ok());
  CHECK(*r.program.inputs[0].default_value == 3);
  CHECK(r.program.inputs[2].type == Type::RealArray);
  CHECK(r.program.globals.size() == 3);
}

TEST_CASE("for desugars into a block with a while loop") {
  ParseResult r = parse_source("func main() { for (var int i = 0; i < 3; i++) { print(i); } }");
  REQUIRE(r.ok());
  const Stmt& body = *r.program.functions[0].body;
  REQUIRE(body.body.size() == 1);
  const Stmt& block = *body.body[0];
  CHECK(block.kind == StmtKind::Block);
  REQUIRE(block.body.size() == 2);
  CHECK(block.body[0]->kind == StmtKind::VarDecl);
  const Stmt& loop = *block.body[1];
  CHECK(loop.kind == StmtKind::While);
  const Stmt& inner = *loop.then_branch;
  REQUIRE(inner.body.size() == 2);
  CHECK(inner.body[0]->kind == StmtKind::Print);
  CHECK(inner.body[1]->kind == StmtKind::Assign);
}

TEST_CASE("syntax errors carry a position") {
  ParseResult r = parse_source("func main() {\n  var int x = ;\n}", "bad.vl");
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics[0].file == "bad.vl");
  CHECK(r.diagnostics[0].line == 2);
  CHECK(r.diagnostics[0].col_begin == 15);

  r = parse_source("func f(int len) { }");
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics[0].message.find("parameter name") != std::string::npos);
}

TEST_CASE("precedence") {
  ParseResult r = parse_source("func main() { var int x = 1 + 2 * 3 - 4; assert(x < 2 || x > 3 && !(x == 1)); }");
  REQUIRE(r.ok());
  const Expr& e = *r.program.functions[0].body->body[0]->value;
  CHECK(pretty_print(e) == "1 + 2 * 3 - 4");
  REQUIRE(e.kind == ExprKind::Binary);
  CHECK(e.binary_op == BinaryOp::Sub);
  CHECK(e.args[0]->binary_op == BinaryOp::Add);
  const Expr& b = *r.program.functions[0].body->body[1]->value;
  CHECK(b.binary_op == BinaryOp::Or);
  CHECK(b.args[1]->binary_op == BinaryOp::And);
}

TEST_CASE("spans nest") {
  Program p = load_program(kCleanCorpus);
  for (const auto& fn : p.functions) {
    CHECK(fn.span.contains(fn.body->span));
    CHECK(span_nests(*fn.body));
  }
  // The assert is where the driver puts it.
  const FunctionDef* main = p.find_function("main");
  const Stmt& last = *main->body->body.back();
  CHECK(last.kind == StmtKind::Assert);
  CHECK(p.snippet(last.span) == "assert(equals(actual, expected))");
}

TEST_CASE("random bytes never crash the parser") {
  std::mt19937_64 rng(99);
  const std::string tokens[] = {"func", "main", "(", ")", "{", "}", "var", "int", "real", "x", "=", "1", ";", "while",
                                "if", "else", "[", "]", "input", "assume", "choose_int", "+", "<", "&&", "2.5", ","};
  for (int i = 0; i < 3000; ++i) {
    std::string src;
    const int n = std::uniform_int_distribution<int>(0, 30)(rng);
    for (int k = 0; k < n; ++k) {
      if (i % 2 == 0) {
        src += static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
      } else {
        src += tokens[std::uniform_int_distribution<std::size_t>(0, std::size(tokens) - 1)(rng)];
        src += ' ';
      }
    }
    std::vector<SourceFile> files{{"fuzz.vl", src}};
    ParseResult r = parse_and_validate(std::move(files));
    for (const auto& d : r.diagnostics) CHECK(d.col_end >= d.col_begin);
  }
}
