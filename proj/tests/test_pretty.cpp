#include <doctest.h>

#include "support.hpp"

using namespace vlsym;
using namespace testing;

namespace {

void round_trip(const Program& p) {
  const std::string once = pretty_print(p);
  ParseResult again = parse_source(once, "pretty.vl");
  REQUIRE(again.ok());
  CHECK(structurally_equal(p, again.program));
  CHECK(pretty_print(again.program) == once);
}

}  // namespace

TEST_CASE("corpus round trip") {
  for (const auto& set : {kCleanCorpus, kSwapBugCorpus, kColmaxBugCorpus}) {
    ParseResult r = parse(load_corpus(corpus_dir(), set));
    REQUIRE(r.ok());
    round_trip(r.program);
  }
}

TEST_CASE("small programs") {
  ParseResult r = parse_source("func main() { }");
  REQUIRE(r.ok());
  round_trip(r.program);
  CHECK(pretty_print(r.program).find("func main()") != std::string::npos);

  // The else binds to the nearest if.
  r = parse_source("func main() { var int x = 1; if (x < 2) if (x < 1) x = 3; else x = 4; }");
  REQUIRE(r.ok());
  const Stmt& outer = *r.program.functions[0].body->body[1];
  REQUIRE(outer.kind == StmtKind::If);
  CHECK_FALSE(outer.else_branch);
  round_trip(r.program);

  r = parse_source("input int N = 2; assume(N >= 1 && !(N == 5)); input real A[N * 2];\n"
                   "func f(real a[]) : real { return -a[0] / 2.5; }\n"
                   "func main() { var real y; y = f(A); var int c; c = choose_int(N); assume(c != 0 || y < 0.0); print(y, len(A)); }");
  REQUIRE(r.ok());
  round_trip(r.program);
}

TEST_CASE("structural equality ignores layout but not content") {
  ParseResult a = parse_source("func main() { var int x = 1 + 2; }");
  ParseResult b = parse_source("func main()\n{\n  var int x = (1 + 2);\n}\n");
  ParseResult c = parse_source("func main() { var int x = 2 + 1; }");
  REQUIRE((a.ok() && b.ok() && c.ok()));
  CHECK(structurally_equal(a.program, b.program));
  CHECK_FALSE(structurally_equal(a.program, c.program));
}
