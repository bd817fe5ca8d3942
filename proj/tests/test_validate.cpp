#include <doctest.h>

#include "support.hpp"

using namespace vlsym;
using namespace testing;

namespace {

std::vector<std::string> messages(const std::string& text) {
  std::vector<SourceFile> files{{"v.vl", text}};
  ParseResult r = parse_and_validate(std::move(files));
  std::vector<std::string> out;
  for (const auto& d : r.diagnostics) out.push_back(d.message);
  return out;
}

bool reports(const std::string& text, const std::string& fragment) {
  for (const auto& m : messages(text)) {
    if (m.find(fragment) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("the corpus validates") {
  for (const auto& set : {kCleanCorpus, kSwapBugCorpus, kColmaxBugCorpus}) {
    ParseResult r = parse(load_corpus(corpus_dir(), set));
    REQUIRE(r.ok());
    CHECK(validate(r.program).empty());
  }
}

TEST_CASE("integer division is rejected") {
  std::vector<SourceFile> files{{"v.vl", "func main() {\n  var int a = 4;\n  var int b = a / 2;\n}"}};
  ParseResult r = parse_and_validate(std::move(files));
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message == "`/` requires real operands");
  CHECK(r.diagnostics[0].location() == "v.vl:3:15-19");
}

TEST_CASE("semantic errors") {
  CHECK(reports("func f() { } func f() { } func main() { }", "duplicate definition of 'f'"));
  CHECK(reports("func f() { g(); } func g() { f(); } func main() { f(); }", "recursive call cycle"));
  CHECK(reports("func f() { }", "missing entry function 'main'"));
  CHECK(reports("func main() { x = 1; }", "unknown variable 'x'"));
  CHECK(reports("func main() { var int x; var int x; }", "redeclaration of 'x'"));
  CHECK(reports("func main() { var real x = 1; }", "initializer of 'x'"));
  CHECK(reports("func main() { var int a[2]; var real b[2]; assert(equals(a, b)); }", "equals requires"));
  CHECK(reports("func f() : int { } func main() { }", "does not return a value"));
  CHECK(reports("input int N; func main() { var int N; }", "shadows an input"));
  CHECK(reports("func main() { var int x = 1; x(); }", "unknown function 'x'"));
  CHECK(reports("func main() { main(); }", "cannot be called"));
  CHECK(messages("input int N; assume(N > 0); func main() { }").empty());
}
