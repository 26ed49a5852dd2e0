#include <doctest.h>

#include "cmrs/errors.hpp"
#include "cmrs/kotzig.hpp"
#include "cmrs/verify.hpp"

using namespace cmrs;

TEST_CASE("two-row sets") {
  const auto a = kas_two_rows(GroupSpec::parse("Z3"), 3);
  REQUIRE(a.arrays.size() == 1);
  CHECK(a.arrays[0] == Array2{{0, 1, 2}, {0, 2, 1}});
  CHECK(verify_kas(kas_two_rows(GroupSpec::parse("Z5"), 5)));
  const auto c = kas_two_rows(GroupSpec::parse("Z2xZ2"), 4);
  CHECK(c.arrays[0][0] == c.arrays[0][1]);
  CHECK(verify_kas(c));
}

TEST_CASE("three-row sets") {
  const auto a = kas_three_rows(GroupSpec::parse("Z2xZ2"));
  CHECK(a.arrays.size() == 1);
  CHECK(a.arrays[0].size() == 3);
  CHECK(verify_kas(a));
  const auto b = kas_three_rows(GroupSpec::parse("2,2,2"));
  CHECK(b.arrays.size() == 2);
  CHECK(verify_kas(b));
  CHECK_THROWS_AS(kas_three_rows(GroupSpec::parse("Z6")), InfeasibleError);
  CHECK_THROWS_AS(kas_three_rows(GroupSpec::parse("Z9")), OutOfRangeError);
}

TEST_CASE("glued sets") {
  const auto a = kas(GroupSpec::parse("Z4xZ4"), 5, 4);
  CHECK(a.arrays.size() == 4);
  CHECK(a.j == 5);
  CHECK(verify_kas(a));
  CHECK(verify_kas(kas(GroupSpec::parse("Z9"), 4, 3)));
  CHECK_THROWS_AS(kas(GroupSpec::parse("Z9"), 3, 3), OutOfRangeError);
  CHECK_THROWS_AS(kas(GroupSpec::parse("Z6"), 3, 3), InfeasibleError);
  CHECK_THROWS_AS(kas(GroupSpec::parse("Z4xZ2"), 3, 4), PreconditionError);
}

TEST_CASE("every 2-group up to 64, j from 2 to 7, every column glue") {
  for (std::uint64_t n = 4; n <= 64; n *= 2)
    for (const auto& g : abelian_groups_of_order(n)) {
      if (!admits_complete_mapping(g)) continue;
      const auto m = two_group_class_size(g);
      for (std::size_t j = 2; j <= 7; ++j) {
        const auto s = kas(g, j, m);
        CHECK(verify_kas(s));
        CHECK(!par::check_kas(s));
        for (auto b : divisors(s.arrays.size())) {
          const auto glued = kas_column_glue(s, b);
          CHECK(glued.m == m * b);
          CHECK(verify_kas(glued));
        }
      }
    }
}

TEST_CASE("column glue divisibility") {
  const auto s = kas(GroupSpec::parse("Z4xZ4"), 3, 4);
  CHECK(kas_column_glue(s, 2).arrays.size() == 2);
  CHECK(kas_column_glue(s, 1).arrays == s.arrays);
  const auto three = kas(GroupSpec::parse("Z3xZ3"), 2, 3);
  CHECK_THROWS_AS(kas_column_glue(three, 2), PreconditionError);
}

TEST_CASE("verifier rejects damage") {
  auto s = kas(GroupSpec::parse("Z4xZ4"), 3, 4);
  auto altered = s;
  altered.arrays[0][0][0] = altered.arrays[0][0][1];
  CHECK_FALSE(verify_kas(altered));
  CHECK(par::check_kas(altered) == check_kas(altered));
  auto missing = s;
  missing.arrays.pop_back();
  CHECK_FALSE(verify_kas(missing));
  CHECK(par::check_kas(missing) == check_kas(missing));
}

TEST_CASE("single Kotzig arrays") {
  for (const char* g : {"Z3", "Z5", "Z9", "Z3xZ3", "Z2xZ2", "Z4xZ2xZ3", "Z8xZ2"})
    for (std::size_t j = 2; j <= 7; ++j) {
      const auto G = GroupSpec::parse(g);
      const auto s = kotzig_array(G, j);
      CHECK(!check_kotzig_array(s));
      // each row is all of G, so its sum vanishes exactly for the class G
      CHECK(verify_kas(s) == admits_complete_mapping(G));
    }
  CHECK_THROWS_AS(kotzig_array(GroupSpec::parse("Z6"), 3), InfeasibleError);
  const auto z6 = kotzig_array(GroupSpec::parse("Z6"), 2);
  CHECK(!check_kotzig_array(z6));
  CHECK_FALSE(verify_kas(z6));
}

TEST_CASE("integer Kotzig arrays") {
  const auto a = int_kotzig(2, 3);
  CHECK(a.entries == std::vector<std::vector<std::int64_t>>{{1, 2, 3}, {3, 2, 1}});
  const auto b = int_kotzig(3, 3, true);
  CHECK(verify_int_kotzig(b));
  CHECK_THROWS_AS(int_kotzig(3, 4), PreconditionError);
  CHECK_THROWS_AS(int_kotzig(2, 4, true), PreconditionError);
  for (std::size_t j = 2; j <= 9; ++j)
    for (std::size_t k = 1; k <= 11; ++k) {
      if (j * (k - 1) % 2 == 0) CHECK(verify_int_kotzig(int_kotzig(j, k)));
      if (k % 2 == 1) CHECK(verify_int_kotzig(int_kotzig(j, k, true)));
    }
}
