#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <tuple>
#include <set>

#include "support.hpp"

using namespace vlsym;
using namespace testing;

namespace {

/// Number of CRS skeletons with exactly n rows and m columns: each row
/// stores any subset of the m columns.
std::uint64_t skeleton_count(std::uint32_t n, std::uint32_t m) {
  std::uint64_t c = 1;
  for (std::uint32_t i = 0; i < n; ++i) c <<= m;
  return c;
}

/// Brute force over every row_ptr / col_ind pair with entries below bound.
std::vector<Skeleton> brute_force_skeletons(std::uint32_t n, std::uint32_t m) {
  std::vector<Skeleton> out;
  std::vector<std::uint32_t> rp(n + 1, 0);
  std::function<void(std::uint32_t)> rows = [&](std::uint32_t i) {
    if (i > n) {
      const std::uint32_t nz = rp[n];
      std::vector<std::uint32_t> ci(nz, 0);
      std::function<void(std::uint32_t)> cols = [&](std::uint32_t k) {
        if (k == nz) {
          Skeleton s{n, m, rp, ci};
          if (well_formed(s)) out.push_back(s);
          return;
        }
        for (std::uint32_t c = 0; c < m; ++c) {
          ci[k] = c;
          cols(k + 1);
        }
      };
      cols(0);
      return;
    }
    for (std::uint32_t v = rp[i - 1]; v <= rp[i - 1] + m; ++v) {
      rp[i] = v;
      rows(i + 1);
    }
  };
  rows(1);
  return out;
}

std::vector<Rational> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::vector<Rational> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_rational(rng, 20, 12));
  return v;
}

}  // namespace

TEST_CASE("native kernels on a worked example") {
  // [[1 0 2] [0 3 0]]
  CrsMatrixNative a{2, 3, {1, 2, 3}, {0, 2, 1}, {0, 2, 3}};
  std::vector<Rational> v{1, 10, 100};
  CHECK(crs_matvec_native(a, v) == std::vector<Rational>{201, 30});
  DenseMatrixNative d = crs_to_dense_native(a);
  CHECK(d.data == std::vector<Rational>{1, 0, 2, 0, 3, 0});
  CHECK(dense_matvec_native(d, v) == std::vector<Rational>{201, 30});
  CrsMatrixNative empty{1, 1, {}, {}, {0, 0}};
  CHECK(crs_matvec_native(empty, {5}) == std::vector<Rational>{0});
}

TEST_CASE("well formedness") {
  CHECK(well_formed(Skeleton{1, 2, {0, 2}, {0, 1}}));
  CHECK_FALSE(well_formed(Skeleton{1, 2, {0, 2}, {1, 0}}));
  CHECK_FALSE(well_formed(Skeleton{1, 2, {0, 2}, {1, 1}}));
  CHECK_FALSE(well_formed(Skeleton{1, 2, {0, 1}, {2}}));
  CHECK_FALSE(well_formed(Skeleton{1, 2, {1, 1}, {}}));
  CHECK_FALSE(well_formed(Skeleton{2, 2, {0, 1, 0}, {0}}));
}

TEST_CASE("skeleton counts") {
  std::uint64_t total = 0;
  for (std::uint32_t n = 1; n <= 4; ++n) {
    for (std::uint32_t m = 1; m <= 4; ++m) {
      auto all = enumerate_skeletons(n, m);
      CHECK(all.size() == skeleton_count(n, m));
      std::set<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> distinct;
      for (const auto& s : all) {
        CHECK(well_formed(s));
        // Columns increase strictly inside a row.
        for (std::uint32_t i = 0; i < n; ++i) {
          for (std::uint32_t k = s.row_ptr[i] + 1; k < s.row_ptr[i + 1]; ++k) CHECK(s.col_ind[k - 1] < s.col_ind[k]);
        }
        distinct.insert({s.row_ptr, s.col_ind});
      }
      CHECK(distinct.size() == all.size());
      if (n <= 3 && m <= 3) total += all.size();
    }
  }
  CHECK(total == 682);
  std::uint64_t wider = 0;
  for (std::uint32_t n = 1; n <= 3; ++n) {
    for (std::uint32_t m = 1; m <= 4; ++m) wider += skeleton_count(n, m);
  }
  CHECK(wider == 5050);
}

TEST_CASE("enumeration agrees with brute force") {
  for (std::uint32_t n = 1; n <= 2; ++n) {
    for (std::uint32_t m = 1; m <= 3; ++m) {
      auto a = enumerate_skeletons(n, m), b = brute_force_skeletons(n, m);
      std::sort(a.begin(), a.end(), [](const Skeleton& x, const Skeleton& y) {
        return std::tie(x.row_ptr, x.col_ind) < std::tie(y.row_ptr, y.col_ind);
      });
      std::sort(b.begin(), b.end(), [](const Skeleton& x, const Skeleton& y) {
        return std::tie(x.row_ptr, x.col_ind) < std::tie(y.row_ptr, y.col_ind);
      });
      CHECK(a == b);
    }
  }
}

TEST_CASE("crs and dense products agree on random matrices") {
  std::mt19937_64 rng(17);
  for (std::uint32_t n = 1; n <= 4; ++n) {
    for (std::uint32_t m = 1; m <= 4; ++m) {
      for (const auto& s : enumerate_skeletons(n, m)) {
        if (std::uniform_int_distribution<int>(0, 3)(rng) != 0) continue;
        auto a = with_values(s, random_vector(rng, s.nonzeros()));
        auto v = random_vector(rng, m);
        CHECK(crs_matvec_native(a, v) == dense_matvec_native(crs_to_dense_native(a), v));
        CHECK(skeleton_of(a) == s);
      }
    }
  }
}

TEST_CASE("random concrete runs of the clean corpus pass") {
  Program p = load_program(kCleanCorpus);
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    SearchConfig cfg;
    cfg.seed = seed;
    Engine e(p, cfg, Engine::Mode::Concrete);
    Trace t = e.run();
    violations += t.violation.has_value();
  }
  CHECK(violations == 0);
}

TEST_CASE("a concrete run of the swap mutant shows zeros where products belong") {
  Program p = load_program(kSwapBugCorpus);
  Skeleton s{1, 1, {0, 1}, {0}};
  Engine e(p, SearchConfig{}, Engine::Mode::Concrete);
  Trace t = e.run(driver_trail(s));
  REQUIRE(t.violation);
  CHECK(t.violation->category == Category::AssertionViolation);
  auto actual = real_array(e, t.final_state, "actual");
  auto expected = real_array(e, t.final_state, "expected");
  REQUIRE(actual.size() == 1);
  CHECK(actual[0].is_zero());
  CHECK_FALSE(expected[0].is_zero());
}
