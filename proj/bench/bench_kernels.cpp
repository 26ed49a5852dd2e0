#include <benchmark/benchmark.h>

#include <numeric>

#include "cmrs/complete_mapping.hpp"
#include "cmrs/kotzig.hpp"
#include "cmrs/mrs.hpp"
#include "cmrs/search.hpp"
#include "cmrs/verify.hpp"

using namespace cmrs;

namespace {

const RectangleSet& big_mrs() {
  static const auto r = mrs_construct(GroupSpec::parse("Z16xZ16xZ16"), 16, 16, 16);
  return r;
}

const KotzigArraySet& big_kas() {
  static const auto s = kas(GroupSpec::parse("Z16xZ16xZ4"), 6, 16);
  return s;
}

const CompleteMapping& big_cm() {
  static const auto cm = [] {
    CompleteMapping c{GroupSpec::parse("Z101xZ101xZ3"), {}};
    c.table.resize(c.group.order());
    std::iota(c.table.begin(), c.table.end(), std::size_t{0});
    return c;
  }();
  return cm;
}

void BM_check_mrs_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(check_mrs(big_mrs()));
}
void BM_check_mrs_par(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(par::check_mrs(big_mrs()));
}
void BM_check_kas_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(check_kas(big_kas()));
}
void BM_check_kas_par(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(par::check_kas(big_kas()));
}
void BM_check_cm_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(check_complete_mapping(big_cm()));
}
void BM_check_cm_par(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(par::check_complete_mapping(big_cm()));
}

// exhaustive: no 3 x 8 rectangle exists on Z24
void BM_search_serial(benchmark::State& st) {
  const auto g = GroupSpec::parse("Z3xZ8");
  for (auto _ : st) {
    auto out = search::backtrack(MrsProblem(g, 3, 4, 2), {100'000'000, 0, false});
    benchmark::DoNotOptimize(out.nodes);
  }
}
void BM_search_par(benchmark::State& st) {
  const auto g = GroupSpec::parse("Z3xZ8");
  for (auto _ : st) {
    auto out = search::backtrack_parallel(MrsProblem(g, 3, 4, 2), {100'000'000, 0, true});
    benchmark::DoNotOptimize(out.nodes);
  }
}

}  // namespace

BENCHMARK(BM_check_mrs_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_mrs_par)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_kas_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_kas_par)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_cm_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_check_cm_par)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_search_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_search_par)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
