#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "vlsym/cli.hpp"

using namespace vlsym;
using namespace testing;

namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> with_files(std::vector<std::string> args, const std::vector<std::string>& files) {
  for (const auto& f : files) args.push_back(corpus_dir() + "/" + f);
  return args;
}

std::string without_time(const std::string& report) {
  std::string out, line;
  std::istringstream in(report);
  while (std::getline(in, line)) {
    if (line.rfind("   time", 0) != 0) out += line + "\n";
  }
  return out;
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("vlsym_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(cli(with_files({"verify"}, kCleanCorpus)).code == kExitClean);
  CHECK(cli(with_files({"verify"}, kSwapBugCorpus)).code == kExitViolation);
  CHECK(cli({"verify", "no_such_file.vl"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli(with_files({"verify", "-inputM_B=x"}, kCleanCorpus)).code == kExitUsage);
  CHECK(cli(with_files({"verify", "--workers", "0"}, kCleanCorpus)).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitClean);

  fs::path dir = scratch("parse");
  std::ofstream(dir / "bad.vl") << "func main() { var int x = ; }\n";
  Result r = cli({"verify", (dir / "bad.vl").string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("bad.vl:1:") != std::string::npos);
}

TEST_CASE("report sections") {
  Result r = cli({"verify", "--corpus-dir", corpus_dir(), "driver.vl", "matrix.vl", "sparse.vl"});
  REQUIRE(r.code == kExitClean);
  for (const char* s : {"=== Source files ===", "=== Command ===", "=== Stats ===", "=== Result ==="}) {
    CHECK(r.out.find(s) != std::string::npos);
  }
  CHECK(r.out.find("682") != std::string::npos);
  CHECK(r.out.find("All errors marked with '+' are absent on all executions.") != std::string::npos);
}

TEST_CASE("bound override widens the search") {
  Result r = cli(with_files({"verify", "-inputM_B=4"}, kCleanCorpus));
  CHECK(r.code == kExitClean);
  CHECK(r.out.find("5050") != std::string::npos);
}

TEST_CASE("reports do not depend on the worker count") {
  Result a = cli(with_files({"verify", "--workers", "1"}, kSwapBugCorpus));
  Result b = cli(with_files({"verify", "--workers", "4"}, kSwapBugCorpus));
  CHECK(a.code == kExitViolation);
  CHECK(b.code == kExitViolation);
  CHECK(without_time(a.out) == without_time(b.out));
  CHECK(a.out != b.out);  // the time line names the worker count
}

TEST_CASE("emitted trails replay") {
  fs::path dir = scratch("trails");
  Result v = cli(with_files({"verify", "--emit-trails", dir.string(), "--show", "1"}, kColmaxBugCorpus));
  REQUIRE(v.code == kExitViolation);
  REQUIRE(fs::exists(dir / "violation_0.trail"));
  REQUIRE(fs::exists(dir / "terminal.trail"));

  Result rv = cli(with_files({"replay", "--trail", (dir / "violation_0.trail").string()}, kColmaxBugCorpus));
  CHECK(rv.code == kExitViolation);
  CHECK(rv.out.find("OUT_OF_BOUNDS") != std::string::npos);
  CHECK(rv.out.find("v[j]") != std::string::npos);

  Result rt = cli(with_files({"replay", "--trail", (dir / "terminal.trail").string()}, kColmaxBugCorpus));
  CHECK(rt.code == kExitClean);

  Result wrong = cli(with_files({"replay", "-inputM_B=4", "--trail", (dir / "terminal.trail").string()},
                                kColmaxBugCorpus));
  CHECK(wrong.code == kExitUsage);

  std::ofstream(dir / "junk.trail") << "C 9/2\n";
  CHECK(cli(with_files({"replay", "--trail", (dir / "junk.trail").string()}, kColmaxBugCorpus)).code == kExitUsage);
  std::ofstream(dir / "short.trail") << "Z M=1/3\n";
  CHECK(cli(with_files({"replay", "--trail", (dir / "short.trail").string()}, kColmaxBugCorpus)).code == kExitUsage);
}

TEST_CASE("concrete runs") {
  Result r = cli(with_files({"run", "--seed", "7"}, kCleanCorpus));
  CHECK(r.code == kExitClean);
  CHECK(r.out.find("=== Outcome ===") != std::string::npos);
  CHECK(r.out.find("main returned") != std::string::npos);

  fs::path dir = scratch("run");
  std::ofstream(dir / "one.trail") << "Z M=1/3\nZ N=1/3\nC 1/2\n";
  Result b = cli(with_files({"run", "--trail", (dir / "one.trail").string()}, kSwapBugCorpus));
  CHECK(b.code == kExitViolation);
  CHECK(b.out.find("ASSERTION_VIOLATION") != std::string::npos);
}

TEST_CASE("first violation only") {
  Result r = cli(with_files({"verify", "--first"}, kSwapBugCorpus));
  CHECK(r.code == kExitViolation);
  CHECK(r.out.find("Violation 1 ") == std::string::npos);
}
