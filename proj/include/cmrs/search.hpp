#pragma once

// Budgeted depth-first search shared by every base-case search.
//
// A problem is any type P with
//   using Witness = ...;
//   bool complete() const;
//   Witness witness() const;
//   void candidates(std::vector<std::size_t>& out);  // consistent values for the next variable
//   void push(std::size_t value);
//   void pop();
// The problem chooses the next variable itself (so fail-first ordering lives
// with the problem); the engine only orders, counts and undoes.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cmrs::search {

enum class Status { Found, Infeasible, BudgetExceeded };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Found: return "found";
    case Status::Infeasible: return "infeasible";
    case Status::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

struct Options {
  std::uint64_t budget = 10'000'000;
  std::uint64_t seed = 0;  // 0 keeps the problem's own value order
  bool parallel = false;   // split the root across OpenMP threads
};

template <class W>
struct Outcome {
  Status status = Status::Infeasible;
  std::optional<W> witness;
  std::uint64_t nodes = 0;
  std::vector<std::size_t> trace;  // values pushed on the path to the witness
};

namespace detail {

struct Shared {
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> stop{false};
};

template <class P>
Outcome<typename P::Witness> run(P& p, const Options& opt, Shared* shared,
                                 std::uint64_t seed_salt = 0) {
  using W = typename P::Witness;
  Outcome<W> out;
  std::mt19937_64 rng(opt.seed ^ (seed_salt * 0x9E3779B97F4A7C15ULL));
  struct Frame {
    std::vector<std::size_t> values;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  auto expand = [&]() {
    Frame f;
    p.candidates(f.values);
    if (opt.seed != 0) std::shuffle(f.values.begin(), f.values.end(), rng);
    stack.push_back(std::move(f));
  };

  if (p.complete()) {
    out.status = Status::Found;
    out.witness = p.witness();
    return out;
  }
  expand();
  while (!stack.empty()) {
    if (shared && shared->stop.load(std::memory_order_relaxed)) {
      out.status = Status::BudgetExceeded;
      break;
    }
    Frame& top = stack.back();
    if (top.next == top.values.size()) {
      stack.pop_back();
      if (!stack.empty()) {
        p.pop();
        out.trace.pop_back();
      }
      continue;
    }
    const std::size_t v = top.values[top.next++];
    const std::uint64_t used = shared ? shared->nodes.fetch_add(1, std::memory_order_relaxed) + 1
                                      : out.nodes + 1;
    ++out.nodes;
    if (used > opt.budget) {
      out.status = Status::BudgetExceeded;
      if (shared) shared->stop.store(true);
      break;
    }
    p.push(v);
    out.trace.push_back(v);
    if (p.complete()) {
      out.status = Status::Found;
      out.witness = p.witness();
      break;
    }
    expand();
  }
  if (out.status != Status::Found) out.trace.clear();
  if (stack.empty() && out.status != Status::Found) out.status = Status::Infeasible;
  return out;
}

}  // namespace detail

/// Serial depth-first search. Deterministic given (problem, budget, seed).
template <class P>
Outcome<typename P::Witness> backtrack(P problem, const Options& opt = {}) {
  if (opt.budget == 0) return {Status::BudgetExceeded, std::nullopt, 0, {}};
  return detail::run(problem, opt, nullptr);
}

/// Root-split parallel search: every root value is explored as an independent
/// subtree. Found/Infeasible are sound; which witness is returned may vary.
template <class P>
Outcome<typename P::Witness> backtrack_parallel(P problem, const Options& opt = {}) {
  using W = typename P::Witness;
  if (opt.budget == 0) return {Status::BudgetExceeded, std::nullopt, 0, {}};
  if (problem.complete()) return {Status::Found, problem.witness(), 0, {}};
  std::vector<std::size_t> roots;
  problem.candidates(roots);
  detail::Shared shared;
  std::optional<Outcome<W>> found;
  bool exceeded = false;
  const auto count = static_cast<std::int64_t>(roots.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t r = 0; r < count; ++r) {
    if (shared.stop.load()) continue;
    P local = problem;
    if (shared.nodes.fetch_add(1) + 1 > opt.budget) {
      shared.stop.store(true);
#pragma omp critical(cmrs_search_merge)
      exceeded = true;
      continue;
    }
    local.push(roots[static_cast<std::size_t>(r)]);
    Outcome<W> sub;
    if (local.complete()) {
      sub.status = Status::Found;
      sub.witness = local.witness();
    } else {
      sub = detail::run(local, opt, &shared, static_cast<std::uint64_t>(r) + 1);
    }
#pragma omp critical(cmrs_search_merge)
    {
      if (sub.status == Status::Found && !found) {
        sub.trace.insert(sub.trace.begin(), roots[static_cast<std::size_t>(r)]);
        found = std::move(sub);
        shared.stop.store(true);
      } else if (sub.status == Status::BudgetExceeded) {
        exceeded = true;
      }
    }
  }
  Outcome<W> out;
  out.nodes = shared.nodes.load();
  if (found) {
    out = std::move(*found);
    out.nodes = shared.nodes.load();
  } else {
    out.status = exceeded ? Status::BudgetExceeded : Status::Infeasible;
  }
  return out;
}

template <class P>
Outcome<typename P::Witness> solve(P problem, const Options& opt = {}) {
  return opt.parallel ? backtrack_parallel(std::move(problem), opt) : backtrack(std::move(problem), opt);
}

/// Re-applies a trace; returns the witness if the trace leads to a complete
/// assignment through consistent values only.
template <class P>
std::optional<typename P::Witness> replay(P problem, const std::vector<std::size_t>& trace) {
  std::vector<std::size_t> values;
  for (auto v : trace) {
    values.clear();
    problem.candidates(values);
    if (std::find(values.begin(), values.end(), v) == values.end()) return std::nullopt;
    problem.push(v);
  }
  if (!problem.complete()) return std::nullopt;
  return problem.witness();
}

}  // namespace cmrs::search
