#include <doctest.h>

#include "cmrs/errors.hpp"
#include "cmrs/zerosum.hpp"
#include "oracle.hpp"

using namespace cmrs;

TEST_CASE("pairs are never zero-sum partitions") {
  // x + y = 0 with x = 0 forces y = 0, so the class of 0 cannot be a pair.
  for (int k = 1; k <= 4; ++k) CHECK_FALSE(oracle::elementary_pairs_exist(k));
  CHECK_THROWS_AS(zero_sum_partition(GroupSpec::parse("Z2xZ2"), 2), InfeasibleError);
  CHECK_THROWS_AS(zero_sum_partition(GroupSpec::parse("Z4xZ2xZ3"), 2), InfeasibleError);
}

TEST_CASE("small instances") {
  const auto p = zero_sum_partition(GroupSpec::parse("Z3"), 3);
  CHECK(p.classes == std::vector<std::vector<std::size_t>>{{0, 1, 2}});
  const auto q = zero_sum_partition(GroupSpec::parse("Z9"), 3);
  CHECK(q.classes.size() == 3);
  CHECK(verify_zero_sum_partition(q));
  CHECK(verify_zero_sum_partition(ZeroSumPartition{GroupSpec::parse("Z9"), 3, {{0, 1, 8}, {2, 3, 4}, {5, 6, 7}}}));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(zero_sum_partition(GroupSpec::parse("Z9"), 1), PreconditionError);
  CHECK_THROWS_AS(zero_sum_partition(GroupSpec::parse("Z9"), 4), PreconditionError);
  CHECK_THROWS_AS(zero_sum_partition(GroupSpec::parse("Z6"), 3), InfeasibleError);
}

TEST_CASE("verifier rejects broken partitions") {
  const auto g = GroupSpec::parse("Z9");
  auto p = zero_sum_partition(g, 3);
  auto moved = p;
  moved.classes[1].push_back(moved.classes[0].back());
  moved.classes[0].pop_back();
  CHECK_FALSE(verify_zero_sum_partition(moved));
  auto subset = p;
  subset.classes.pop_back();
  CHECK_FALSE(verify_zero_sum_partition(subset));
  auto dup = p;
  dup.classes[0][0] = dup.classes[1][0];
  CHECK_FALSE(verify_zero_sum_partition(dup));
  auto wrong = ZeroSumPartition{g, 3, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}};
  CHECK(check_zero_sum_partition(wrong).value().find("classes[0]") == 0);
}

TEST_CASE("every group in the class, every divisor, order up to 48") {
  for (const auto& g : abelian_groups_up_to(48)) {
    if (g.order() < 2 || !admits_complete_mapping(g)) continue;
    for (auto m : divisors(g.order())) {
      if (m < 3) continue;
      const auto p = zero_sum_partition(g, m);
      CHECK(verify_zero_sum_partition(p));
      std::vector<int> hits(g.order(), 0);
      for (const auto& cls : p.classes) {
        CHECK(cls.size() == m);
        for (auto x : cls) ++hits[x];
      }
      CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
  }
}

TEST_CASE("anchored partitions") {
  const auto g = GroupSpec::parse("Z4xZ4");
  const auto p = zero_sum_partition_with_anchors(g, 4, {1, 2, 5, 7});
  REQUIRE(p);
  CHECK(verify_zero_sum_partition(*p));
  CHECK(p->classes[0][0] == 1);
  CHECK(p->classes[3][0] == 7);
}

TEST_CASE("seeds change the witness, not validity") {
  const auto g = GroupSpec::parse("Z3xZ3xZ3");
  for (std::uint64_t seed = 0; seed < 5; ++seed) CHECK(verify_zero_sum_partition(zero_sum_partition(g, 9, {10'000'000, seed})));
}
