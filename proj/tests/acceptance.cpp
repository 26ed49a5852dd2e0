#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "cmrs/catalog.hpp"
#include "cmrs/complete_mapping.hpp"
#include "cmrs/errors.hpp"
#include "cmrs/io.hpp"
#include "cmrs/kotzig.hpp"
#include "cmrs/mrs.hpp"
#include "cmrs/verify.hpp"
#include "cmrs/zerosum.hpp"
#include "oracle.hpp"

using namespace cmrs;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Gate {
  int failed = 0;
  void run(int id, const std::string& name, const std::function<std::string()>& body) {
    const auto t0 = Clock::now();
    std::string problem;
    try {
      problem = body();
    } catch (const std::exception& e) {
      problem = std::string("exception: ") + e.what();
    }
    const double dt = seconds_since(t0);
    if (!problem.empty()) ++failed;
    std::printf("[%s] %d %s (%.2fs)%s%s\n", problem.empty() ? "PASS" : "FAIL", id, name.c_str(), dt,
                problem.empty() ? "" : ": ", problem.c_str());
    std::fflush(stdout);
  }
};

std::vector<std::int64_t> mods(const GroupSpec& g) { return g.components(); }

std::string cm_suite() {
  const auto t0 = Clock::now();
  std::size_t count = 0;
  for (std::uint64_t n = 4; n <= 64; n *= 2)
    for (const auto& g : abelian_groups_of_order(n)) {
      if (!admits_complete_mapping(g)) continue;
      const auto c = cm_two_group(g);
      if (auto err = check_cm_certificate(c)) return g.to_string() + ": " + *err;
      if (c.m() != two_group_class_size(g)) return g.to_string() + ": wrong class size";
      const auto e = g.exponent();
      const std::size_t expect = e == g.order() / 2 ? 2 * e : std::max<std::size_t>(4, e);
      if (c.m() != expect) return g.to_string() + ": class size differs from the formula";
      ++count;
    }
  if (count != 23) return "expected 23 groups, saw " + std::to_string(count);
  if (seconds_since(t0) >= 30) return "slower than 30 s";
  return "";
}

std::string mixed_suite() {
  // m = 2 is infeasible: the brute-force oracle settles (Z2)^k first.
  for (int k = 1; k <= 4; ++k)
    if (oracle::elementary_pairs_exist(k)) return "oracle found a zero-sum pair partition of (Z2)^" + std::to_string(k);
  for (const auto& g : abelian_groups_up_to(48)) {
    if (g.order() < 3 || !admits_complete_mapping(g)) continue;
    const auto L = g.sylow2();
    const std::size_t l = L.is_trivial() ? 1 : two_group_class_size(L);
    const auto odd = g.odd_part().order();
    std::vector<std::optional<std::size_t>> ks;
    if (odd == 1) ks.push_back(std::nullopt);
    for (auto k : divisors(odd))
      if (k > 1) ks.push_back(k);
    for (auto k : ks) {
      const auto c = cm_zero_sum_partition(g, k);
      if (auto err = check_cm_certificate(c)) return g.to_string() + " cm: " + *err;
      if (c.m() != k.value_or(1) * l) return g.to_string() + " cm: wrong m";
    }
    for (auto m : divisors(g.order())) {
      if (m == 1) continue;
      if (m == 2) {
        try {
          zero_sum_partition(g, 2);
          return g.to_string() + ": m = 2 accepted";
        } catch (const InfeasibleError&) {
        }
        continue;
      }
      const auto p = zero_sum_partition(g, m);
      if (auto err = check_zero_sum_partition(p)) return g.to_string() + " m=" + std::to_string(m) + ": " + *err;
    }
  }
  return "";
}

std::string kas_suite() {
  for (std::uint64_t n = 4; n <= 64; n *= 2)
    for (const auto& g : abelian_groups_of_order(n)) {
      if (!admits_complete_mapping(g)) continue;
      const auto m0 = two_group_class_size(g);
      for (std::size_t j = 2; j <= 7; ++j) {
        const auto s = kas(g, j, j % 2 ? m0 : 4);
        const auto tag = g.to_string() + " j=" + std::to_string(j);
        if (auto err = check_kas(s)) return tag + ": " + *err;
        if (par::check_kas(s) != check_kas(s)) return tag + ": parallel verifier disagrees";
        for (auto b : divisors(s.arrays.size()))
          if (auto err = check_kas(kas_column_glue(s, b))) return tag + " glue " + std::to_string(b) + ": " + *err;
      }
    }
  return "";
}

std::string p3_chain() {
  for (const auto& order : {12, 24}) {
    for (const auto& g : abelian_groups_of_order(order)) {
      const auto d = g.sylow2();
      if (!admits_complete_mapping(d) || d.exponent() > 4) continue;
      const auto r = mrs_search(g, 3, 4, d.order() / 4, {10'000'000, 0, false});
      if (r.status != search::Status::Found) return g.to_string() + ": base search " + search::to_string(r.status);
      if (!verify_mrs(*r.witness)) return g.to_string() + ": base witness rejected";
      if (r.nodes > 10'000'000) return g.to_string() + ": too many nodes";
    }
  }
  // 2-groups of order 4..32 in G with exponent <= 4: partitions of
  // 2..5 into parts 1 and 2 with at least two parts
  std::size_t expect = 0;
  for (int k = 2; k <= 5; ++k)
    for (int twos = 0; 2 * twos <= k; ++twos)
      if (twos + (k - 2 * twos) >= 2) ++expect;
  std::size_t count = 0;
  for (std::uint64_t n = 4; n <= 32; n *= 2)
    for (const auto& d : abelian_groups_of_order(n)) {
      if (!admits_complete_mapping(d) || d.exponent() > 4) continue;
      const auto r = mrs_p3(d);
      if (auto err = check_mrs(r)) return d.to_string() + ": " + *err;
      if (r.a != 3 || r.b != 4 || r.c != d.order() / 4) return d.to_string() + ": wrong shape";
      ++count;
    }
  if (count != expect) return "expected " + std::to_string(expect) + " groups, saw " + std::to_string(count);
  return "";
}

std::string pipelines() {
  struct Case {
    const char* g;
    std::size_t a, b, c;
  };
  for (const auto& k : {Case{"Z3xZ2xZ2", 3, 4, 1}, Case{"Z9xZ2xZ2", 9, 4, 1}, Case{"Z5xZ2xZ2", 5, 4, 1},
                        Case{"Z3xZ5xZ4xZ2", 15, 8, 1}}) {
    const auto t0 = Clock::now();
    const auto r = mrs_construct(GroupSpec::parse(k.g), k.a, k.b, k.c);
    const double dt = seconds_since(t0);
    if (auto err = check_mrs(r)) return std::string(k.g) + ": " + *err;
    if (r.a != k.a || r.b != k.b || r.c != k.c) return std::string(k.g) + ": wrong shape";
    if (dt >= 5) return std::string(k.g) + ": took " + std::to_string(dt) + " s";
  }
  return "";
}

std::string oracle_equivalence() {
  const auto t0 = Clock::now();
  for (const auto& g : abelian_groups_up_to(16)) {
    const auto n = g.order();
    for (auto a : divisors(n))
      for (auto b : divisors(n / a)) {
        if (a < 2 || b < 2) continue;
        const auto c = n / (a * b);
        const auto tag = g.to_string() + " " + std::to_string(a) + "x" + std::to_string(b) + "x" + std::to_string(c);
        const auto v = decide_existence(g, a, b, c);
        if (v.status == Existence::Unknown) return tag + ": Unknown";
        const auto s = mrs_search(g, a, b, c, {100'000'000, 0, false});
        if (s.status == search::Status::BudgetExceeded) return tag + ": search budget exceeded";
        if ((s.status == search::Status::Found) != (v.status == Existence::Exists))
          return tag + ": decide says " + to_string(v.status) + ", search says " + search::to_string(s.status);
        if (s.witness && !verify_mrs(*s.witness)) return tag + ": search witness rejected";
      }
  }
  if (seconds_since(t0) >= 600) return "slower than 10 min";
  return "";
}

std::string negatives() {
  struct Case {
    const char* g;
    std::size_t a, b, c;
    const char* rule;
  };
  for (const auto& k : {Case{"Z6", 3, 2, 1, "ObsDwa"}, Case{"Z12", 3, 4, 1, "ObsCodd"}}) {
    const auto t0 = Clock::now();
    const auto g = GroupSpec::parse(k.g);
    const auto s = mrs_search(g, k.a, k.b, k.c);
    const auto v = decide_existence(g, k.a, k.b, k.c);
    if (seconds_since(t0) >= 1) return std::string(k.g) + ": slower than 1 s";
    if (s.status != search::Status::Infeasible) return std::string(k.g) + ": search " + search::to_string(s.status);
    if (v.status != Existence::NotExists || v.rule != k.rule) return std::string(k.g) + ": decide disagrees";
    // unpruned enumeration, outside the timed part
    if (oracle::mrs_exists(mods(g), k.a, k.b, k.c)) return std::string(k.g) + ": brute force found a witness";
  }
  return "";
}

std::string identity_check() {
  std::size_t count = 0;
  for (const auto& g : abelian_groups_up_to(64)) {
    const bool zero = sum_all_elements(g) == g.zero();
    if (zero != admits_complete_mapping(g)) return g.to_string();
    const auto naive = oracle::total(mods(g));
    if ((std::count(naive.begin(), naive.end(), 0) == static_cast<long>(naive.size())) != zero)
      return g.to_string() + ": naive sum disagrees";
    ++count;
  }
  std::uint64_t expect = 0;
  for (std::uint64_t n = 1; n <= 64; ++n) expect += oracle::abelian_count(n);
  if (count != expect) return "saw " + std::to_string(count) + " groups, expected " + std::to_string(expect);
  return "";
}

std::string serialization() {
  const auto root = fs::temp_directory_path() / "cmrs_acceptance_catalog";
  fs::remove_all(root);
  CatalogOptions opt;
  opt.max_order = 16;
  const auto rep = build_catalog(root, opt);
  if (!rep.defects.empty()) return "build defect: " + rep.defects.front();
  if (rep.entries.empty()) return "empty catalog";
  for (const auto& e : rep.entries) {
    std::ifstream f(root / e.path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    const auto bytes = ss.str();
    const auto back = parse_certificate(bytes);
    if (serialize(back) != bytes) return e.path + ": round trip not byte-stable";
    if (auto err = check_certificate(back)) return e.path + ": " + *err;
  }
  const auto load = load_catalog(root);
  if (!load.defects.empty()) return "load defect: " + load.defects.front();
  if (load.loaded != rep.entries.size()) return "loaded fewer entries than built";
  fs::remove_all(root);
  return "";
}

}  // namespace

int main() {
  Gate gate;
  gate.run(1, "cm partitions of 2-groups of order 4..64", cm_suite);
  gate.run(2, "mixed-order zero-sum and cm partitions up to order 48", mixed_suite);
  gate.run(3, "Kotzig array sets j=2..7 with column glue", kas_suite);
  gate.run(4, "3 x 4 rectangle chain on Z3 + delta", p3_chain);
  gate.run(5, "construction pipelines", pipelines);
  gate.run(6, "decide agrees with exhaustive search up to order 16", oracle_equivalence);
  gate.run(7, "negative certificates for Z6 and Z12", negatives);
  gate.run(8, "sum of all elements vanishes exactly on the class G", identity_check);
  gate.run(9, "catalog round trip at max order 16", serialization);
  std::printf("%d of 9 criteria failed\n", gate.failed);
  return gate.failed == 0 ? 0 : 1;
}
