#include <doctest.h>

#include <set>

#include "cmrs/errors.hpp"
#include "cmrs/group.hpp"
#include "oracle.hpp"

using namespace cmrs;

TEST_CASE("parse canonicalises") {
  CHECK(GroupSpec::parse("Z12").components() == std::vector<std::int64_t>{4, 3});
  const auto g = GroupSpec::parse("Z4xZ2xZ3");
  CHECK(g.components() == std::vector<std::int64_t>{4, 2, 3});
  CHECK(g.order() == 24);
  CHECK(g.exponent() == 12);
  CHECK(GroupSpec::parse(" z4 X z2 x 3").to_string() == "Z4xZ2xZ3");
  CHECK(GroupSpec::parse("4,2,3") == g);
  CHECK(GroupSpec::parse("Z3xZ4xZ2") == g);
  CHECK(GroupSpec::parse("Z36").components() == std::vector<std::int64_t>{4, 9});
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(GroupSpec::parse("Z0"), PreconditionError);
  CHECK_THROWS_AS(GroupSpec::parse("Z1"), PreconditionError);
  CHECK_THROWS_AS(GroupSpec::parse(""), ParseError);
  CHECK_THROWS_AS(GroupSpec::parse("Zx3"), ParseError);
  CHECK_THROWS_AS(GroupSpec::parse("Z4y2"), ParseError);
  CHECK_THROWS_AS(GroupSpec::parse("Z65536xZ2"), PreconditionError);
  CHECK(GroupSpec::parse("Z65536xZ2", 1u << 20).order() == 131072);
}

TEST_CASE("canonical form is idempotent") {
  for (const auto& g : abelian_groups_up_to(64)) {
    if (g.is_trivial()) continue;
    CHECK(GroupSpec::parse(g.to_string()) == g);
    CHECK(GroupSpec(g.components()) == g);
  }
}

TEST_CASE("element arithmetic") {
  const auto g = GroupSpec::parse("Z4xZ2");
  CHECK(g.add({{3, 1}}, {{2, 1}}) == GroupElement{{1, 0}});
  CHECK(g.neg({{3, 1}}) == GroupElement{{1, 1}});
  CHECK(g.sub({{0, 0}}, {{1, 0}}) == GroupElement{{3, 0}});
  const auto z5 = GroupSpec::parse("Z5");
  CHECK(z5.scalar_mul(3, {{4}}) == GroupElement{{2}});
  CHECK(z5.scalar_mul(-1, {{4}}) == GroupElement{{1}});
  const auto z4 = GroupSpec::parse("Z4");
  const auto all = z4.elements();
  CHECK(z4.sum_over(all) == GroupElement{{2}});
  CHECK_THROWS(g.add({{1}}, {{1, 0}}));
  CHECK_THROWS(g.add({{4, 0}}, {{1, 0}}));
}

TEST_CASE("index arithmetic matches element arithmetic") {
  for (const char* spec : {"Z4xZ2xZ3", "Z9xZ3", "Z8xZ2xZ2"}) {
    const auto g = GroupSpec::parse(spec);
    for (std::size_t x = 0; x < g.order(); ++x) {
      CHECK(g.index_of(g.element(x)) == x);
      CHECK(g.neg_index(x) == g.index_of(g.neg(g.element(x))));
      CHECK(g.mul_index(5, x) == g.index_of(g.scalar_mul(5, g.element(x))));
      for (std::size_t y = 0; y < g.order(); y += 3)
        CHECK(g.add_index(x, y) == g.index_of(g.add(g.element(x), g.element(y))));
    }
  }
}

TEST_CASE("class membership") {
  CHECK_FALSE(admits_complete_mapping(GroupSpec::parse("Z6")));
  CHECK(admits_complete_mapping(GroupSpec::parse("Z2xZ2")));
  CHECK(admits_complete_mapping(GroupSpec::parse("Z5")));
  CHECK_FALSE(admits_complete_mapping(GroupSpec::parse("Z8")));
  CHECK(admits_complete_mapping(GroupSpec::parse("Z8xZ2xZ3")));
}

TEST_CASE("sum of all elements") {
  CHECK(sum_all_elements(GroupSpec::parse("Z3")) == GroupElement{{0}});
  CHECK(sum_all_elements(GroupSpec::parse("Z4")) == GroupElement{{2}});
  CHECK(sum_all_elements(GroupSpec::parse("Z2xZ2")) == GroupElement{{0, 0}});
}

TEST_CASE("isomorphism classes up to 64 against the partition count") {
  for (std::uint64_t n = 1; n <= 64; ++n) {
    const auto gs = abelian_groups_of_order(n);
    CHECK(gs.size() == oracle::abelian_count(n));
    std::set<std::vector<std::int64_t>> distinct;
    for (const auto& g : gs) {
      CHECK(g.order() == n);
      distinct.insert(g.components());
    }
    CHECK(distinct.size() == gs.size());
  }
}

TEST_CASE("invariants over every group of order at most 64") {
  for (const auto& g : abelian_groups_up_to(64)) {
    const auto& comps = g.components();
    std::uint64_t prod = 1, lcm = 1;
    for (auto c : comps) {
      const auto pf = prime_factors(static_cast<std::uint64_t>(c));
      CHECK(pf.front() == pf.back());
      prod *= static_cast<std::uint64_t>(c);
      lcm = std::lcm(lcm, static_cast<std::uint64_t>(c));
    }
    CHECK(g.order() == prod);
    CHECK(g.exponent() == lcm);
    CHECK(g.order() % g.exponent() == 0);
    const auto inv = oracle::involutions(comps);
    CHECK(g.involution_count() == inv);
    CHECK(inv == (g.even_component_count() ? (1u << g.even_component_count()) - 1 : 0));
    const auto zero = oracle::total(comps) == oracle::Tuple(comps.size(), 0);
    CHECK((sum_all_elements(g) == g.zero()) == zero);
    CHECK(zero == admits_complete_mapping(g));
  }
}

TEST_CASE("direct sum embeds both summands") {
  const auto L = GroupSpec::parse("Z4xZ2"), R = GroupSpec::parse("Z3xZ2");
  const auto ds = direct_sum(L, R);
  CHECK(ds.group == GroupSpec::parse("Z4xZ2xZ2xZ3"));
  std::set<std::size_t> seen;
  for (const auto& x : L.elements())
    for (const auto& y : R.elements()) {
      const auto z = ds.embed(x, y);
      CHECK(ds.left_part(z) == x);
      CHECK(ds.right_part(z) == y);
      seen.insert(ds.group.index_of(z));
    }
  CHECK(seen.size() == ds.group.order());
}

namespace {

void check_index4(const GroupSpec& g) {
  const auto e = index4_subgroup(g);
  CHECK(e.sub.order() * 4 == g.order());
  CHECK(e.coset_reps.size() == 4);
  CHECK(e.coset_reps[0] == g.zero());
  CHECK((g.exponent() == e.sub.exponent() || g.exponent() == 2 * e.sub.exponent()));
  std::vector<int> hits(g.order(), 0);
  std::set<std::size_t> image;
  for (const auto& s : e.sub.elements()) {
    image.insert(g.index_of(e.inject(s)));
    for (const auto& r : e.coset_reps) ++hits[g.index_of(g.add(e.inject(s), r))];
  }
  CHECK(image.size() == e.sub.order());
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  for (const auto& x : e.sub.elements())
    for (const auto& y : e.sub.elements())
      CHECK(e.inject(e.sub.add(x, y)) == g.add(e.inject(x), e.inject(y)));
  for (const auto& r : e.coset_reps) CHECK(image.count(g.index_of(g.scalar_mul(2, r))) == 1);
}

}  // namespace

TEST_CASE("index-4 subgroups") {
  const auto z44 = GroupSpec::parse("Z4xZ4");
  const auto e = index4_subgroup(z44);
  CHECK(e.sub == GroupSpec::parse("Z2xZ2"));
  CHECK(e.coset_reps == std::vector<GroupElement>{{{0, 0}}, {{1, 0}}, {{0, 1}}, {{1, 1}}});
  const auto z2_4 = GroupSpec::parse("2,2,2,2");
  CHECK(index4_subgroup(z2_4).sub == GroupSpec::parse("Z2xZ2"));
  CHECK_THROWS_AS(index4_subgroup(GroupSpec::parse("Z4xZ2")), PreconditionError);
  CHECK_THROWS_AS(index4_subgroup(GroupSpec::parse("Z8")), PreconditionError);
  CHECK_THROWS_AS(index4_subgroup(GroupSpec::parse("Z4xZ4xZ3")), PreconditionError);
  for (std::uint64_t n = 8; n <= 64; n *= 2)
    for (const auto& g : abelian_groups_of_order(n)) {
      const auto& c = g.components();
      if (c.size() < 2 || (c.size() == 2 && c[1] == 2)) continue;
      check_index4(g);
    }
}

TEST_CASE("cyclic transversal") {
  CHECK(cyclic_transversal(9, 3) == std::vector<std::int64_t>{-1, 0, 1});
  CHECK(cyclic_transversal(15, 5) == std::vector<std::int64_t>{-2, -1, 0, 1, 2});
  CHECK_THROWS_AS(cyclic_transversal(9, 2), PreconditionError);
  CHECK_THROWS_AS(cyclic_transversal(8, 2), PreconditionError);
  CHECK_THROWS_AS(cyclic_transversal(9, 1), PreconditionError);
}
