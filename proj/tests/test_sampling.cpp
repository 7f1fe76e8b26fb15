#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "subbag/error.hpp"
#include "subbag/plan.hpp"
#include "subbag/rng.hpp"
#include "subbag/sampling.hpp"

using namespace subbag;

TEST_CASE("k = n returns every index") {
  auto s = draw_subsample(5, 5, 123);
  CHECK(s == std::vector<std::uint64_t>{0, 1, 2, 3, 4});
}

TEST_CASE("samples are sorted, distinct, in range, and seed-deterministic") {
  for (std::uint64_t seed : {1ULL, 42ULL, 999ULL}) {
    auto s = draw_subsample(1000, 100, seed);
    REQUIRE(s.size() == 100);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
    CHECK(s.back() < 1000);
    CHECK(draw_subsample(1000, 100, seed) == s);
  }
  CHECK(draw_subsample(1000, 100, 1) != draw_subsample(1000, 100, 2));
}

TEST_CASE("each element is equally likely") {
  // n=2, k=1: index 0 should appear in half the draws.
  int zeros = 0;
  const int draws = 1000000;
  for (int seed = 0; seed < draws; ++seed) {
    if (draw_subsample(2, 1, static_cast<std::uint64_t>(seed))[0] == 0) ++zeros;
  }
  const double freq = static_cast<double>(zeros) / draws;
  CHECK(freq == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("subsets of {0..5} choose 3 are uniform") {
  std::map<std::vector<std::uint64_t>, int> counts;
  const int draws = 40000;
  for (int seed = 0; seed < draws; ++seed) {
    counts[draw_subsample(6, 3, static_cast<std::uint64_t>(seed) + 7)]++;
  }
  REQUIRE(counts.size() == 20);  // C(6,3)
  const double expected = draws / 20.0;
  double chi2 = 0.0;
  for (auto& [subset, count] : counts) {
    const double d = count - expected;
    chi2 += d * d / expected;
  }
  // chi-square, 19 degrees of freedom; 50 is far beyond the 99.9% point.
  CHECK(chi2 < 50.0);
}

TEST_CASE("k larger than n is rejected") {
  CHECK_THROWS_AS(draw_subsample(3, 4, 1), ConfigError);
}

TEST_CASE("huge n works in O(k) memory") {
  const std::uint64_t n = 1000000000000ULL;
  auto s = draw_subsample(n, 10, 77);
  REQUIRE(s.size() == 10);
  CHECK(std::is_sorted(s.begin(), s.end()));
  CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
  CHECK(s.back() < n);
}

TEST_CASE("mix_seed separates ids and is deterministic") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t id = 0; id < 1000; ++id) seen.insert(mix_seed(42, id));
  CHECK(seen.size() == 1000);
  CHECK(mix_seed(42, 7) == mix_seed(42, 7));
  CHECK(mix_seed(42, 7) != mix_seed(43, 7));
  CHECK(mix_seed(0, 0) != 0);
}

TEST_CASE("subsample size from the growth exponent") {
  // floor(1e5^(3/4)) = floor(5623.41) and floor(1e5^(5/6)) = floor(14677.99).
  CHECK(derive_k(100000, 0.25) == 5623);
  CHECK(derive_k(100000, 1.0 / 3.0) == 14677);
  CHECK(derive_k(1, 0.25) == 1);
  CHECK_THROWS_AS(derive_k(100000, 0.0), ConfigError);
  CHECK_THROWS_AS(derive_k(100000, 0.5), ConfigError);
  CHECK_THROWS_AS(derive_k(100000, -0.1), ConfigError);
}

TEST_CASE("subsample count from the sampling fraction") {
  CHECK(derive_m(100000, 5623, 0.1) == 1);
  CHECK(derive_m(100000, 5623, 0.5) == 8);
  CHECK(derive_m(100000, 5623, 1.0) == 17);
  CHECK_THROWS_AS(derive_m(100000, 5623, 0.05), ConfigError);  // floor < 1
  CHECK_THROWS_AS(derive_m(100000, 5623, 0.0), ConfigError);
  CHECK_THROWS_AS(derive_m(100000, 5623, -1.0), ConfigError);
}

TEST_CASE("plan validation") {
  SubbaggingPlan plan;
  plan.n = 100;
  plan.k = 10;
  plan.m = 3;
  CHECK_NOTHROW(validate_plan(plan));
  plan.k = 101;
  CHECK_THROWS_AS(validate_plan(plan), ConfigError);
  plan.k = 0;
  CHECK_THROWS_AS(validate_plan(plan), ConfigError);
  plan.k = 10;
  plan.m = 0;
  CHECK_THROWS_AS(validate_plan(plan), ConfigError);
}

TEST_CASE("make_plan wires the derived sizes") {
  SubbaggingPlan plan = make_plan(100000, 0.25, 0.5, 99);
  CHECK(plan.n == 100000);
  CHECK(plan.k == 5623);
  CHECK(plan.m == 8);
  CHECK(plan.master_seed == 99);
  REQUIRE(plan.delta.has_value());
  CHECK(*plan.delta == 0.25);
  REQUIRE(plan.alpha.has_value());
  CHECK(*plan.alpha == 0.5);
}
