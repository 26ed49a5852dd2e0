#include <doctest.h>

#include "cmrs/complete_mapping.hpp"
#include "cmrs/mrs.hpp"

using namespace cmrs;

namespace {

// Permutations of 0..n-1 with no fixed point.
struct Derangements {
  using Witness = std::vector<std::size_t>;
  std::size_t n;
  std::vector<std::size_t> perm;
  std::vector<char> used;

  explicit Derangements(std::size_t n) : n(n), used(n, 0) {}
  bool complete() const { return perm.size() == n; }
  Witness witness() const { return perm; }
  void candidates(std::vector<std::size_t>& out) {
    out.clear();
    for (std::size_t v = 0; v < n; ++v)
      if (!used[v] && v != perm.size()) out.push_back(v);
  }
  void push(std::size_t v) {
    perm.push_back(v);
    used[v] = 1;
  }
  void pop() {
    used[perm.back()] = 0;
    perm.pop_back();
  }
};

}  // namespace

TEST_CASE("outcomes") {
  auto found = search::backtrack(Derangements(5));
  REQUIRE(found.status == search::Status::Found);
  CHECK(*found.witness == std::vector<std::size_t>{1, 0, 3, 4, 2});
  CHECK(search::backtrack(Derangements(1)).status == search::Status::Infeasible);
  CHECK(search::backtrack(Derangements(5), {1, 0, false}).status == search::Status::BudgetExceeded);
  CHECK(search::backtrack(Derangements(5), {0, 0, false}).status == search::Status::BudgetExceeded);
}

TEST_CASE("mrs instances") {
  CHECK(mrs_search(GroupSpec::parse("Z6"), 3, 2, 1).status == search::Status::Infeasible);
  const auto r = mrs_search(GroupSpec::parse("Z3xZ2xZ2"), 3, 4, 1);
  REQUIRE(r.status == search::Status::Found);
  CHECK(verify_mrs(*r.witness));
  CHECK(mrs_search(GroupSpec::parse("Z3xZ2xZ2"), 3, 4, 1, {1, 0, false}).status ==
        search::Status::BudgetExceeded);
}

TEST_CASE("seeded search is deterministic and replayable") {
  const auto g = GroupSpec::parse("Z5xZ2xZ2");
  for (std::uint64_t seed : {0, 1, 7}) {
    const auto x = search::backtrack(MrsProblem(g, 5, 4, 1), {10'000'000, seed, false});
    const auto y = search::backtrack(MrsProblem(g, 5, 4, 1), {10'000'000, seed, false});
    REQUIRE(x.status == search::Status::Found);
    CHECK(x.trace == y.trace);
    CHECK(x.nodes == y.nodes);
    const auto again = search::replay(MrsProblem(g, 5, 4, 1), x.trace);
    REQUIRE(again);
    CHECK(again->rects == x.witness->rects);
  }
  const auto cm = search::backtrack(CompleteMappingProblem(GroupSpec::parse("Z8xZ2")));
  REQUIRE(cm.status == search::Status::Found);
  CHECK(search::replay(CompleteMappingProblem(GroupSpec::parse("Z8xZ2")), cm.trace) == cm.witness);
  CHECK_FALSE(search::replay(Derangements(3), {0}));
}

TEST_CASE("parallel search agrees on status") {
  for (const char* spec : {"Z6", "Z3xZ2xZ2", "Z12", "Z4xZ2xZ3", "Z2xZ2xZ2xZ2"}) {
    const auto g = GroupSpec::parse(spec);
    for (std::size_t a = 2; a <= g.order(); ++a)
      for (std::size_t b = 2; a * b <= g.order(); ++b) {
        if (g.order() % (a * b)) continue;
        const auto c = g.order() / (a * b);
        const auto s = search::solve(MrsProblem(g, a, b, c), {10'000'000, 0, false});
        const auto p = search::solve(MrsProblem(g, a, b, c), {10'000'000, 0, true});
        CHECK(s.status == p.status);
        if (p.witness) CHECK(verify_mrs(*p.witness));
      }
  }
}
