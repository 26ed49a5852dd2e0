#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmrs/group.hpp"
#include "cmrs/search.hpp"

namespace cmrs {

/// A partition of all of `group` into classes of size `m`, each summing to 0.
/// Classes hold mixed-radix element indices.
struct ZeroSumPartition {
  GroupSpec group;
  std::size_t m = 0;
  std::vector<std::vector<std::size_t>> classes;
};

struct ZeroSumOptions {
  std::uint64_t budget = 10'000'000;
  std::uint64_t seed = 0;
};

/// Throws InfeasibleError for m = 2 (0 has no partner: x + y = 0 with x = 0
/// forces y = 0) and for g outside the class admitting complete mappings.
ZeroSumPartition zero_sum_partition(const GroupSpec& g, std::size_t m,
                                    const ZeroSumOptions& opt = {});

/// Same, but class i must contain anchors[i] (placed first) and no other
/// anchor. Returns nullopt when the search space is exhausted.
std::optional<ZeroSumPartition> zero_sum_partition_with_anchors(
    const GroupSpec& g, std::size_t m, const std::vector<std::size_t>& anchors,
    const ZeroSumOptions& opt = {});

/// First violated invariant, or nullopt when `p` is valid.
std::optional<std::string> check_zero_sum_partition(const ZeroSumPartition& p);
inline bool verify_zero_sum_partition(const ZeroSumPartition& p) {
  return !check_zero_sum_partition(p).has_value();
}

/// The search problem behind zero_sum_partition, exposed for tests and
/// benchmarks.
class ZeroSumProblem {
 public:
  using Witness = std::vector<std::vector<std::size_t>>;

  ZeroSumProblem(const GroupSpec& g, std::size_t m, std::vector<std::size_t> anchors = {});

  bool complete() const { return filled_ == n_; }
  Witness witness() const;
  void candidates(std::vector<std::size_t>& out);
  void push(std::size_t v);
  void pop();

 private:
  bool is_anchor(std::size_t x) const { return !anchors_.empty() && anchor_mark_[x]; }
  bool usable(std::size_t x) const { return !used_[x] && !is_anchor(x); }

  GroupSpec g_;
  std::size_t n_;
  std::size_t m_;
  std::vector<std::size_t> anchors_;
  std::vector<char> anchor_mark_;
  std::vector<char> used_;
  std::vector<std::size_t> seq_;   // elements in fill order; class k is seq_[k*m, (k+1)*m)
  std::vector<std::size_t> sums_;  // prefix sum of the current class after each push
  std::size_t filled_ = 0;
};

}  // namespace cmrs
