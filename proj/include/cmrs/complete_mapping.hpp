#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmrs/group.hpp"
#include "cmrs/zerosum.hpp"

namespace cmrs {

/// phi as a table over mixed-radix indices: table[x] = index of phi(x).
struct CompleteMapping {
  GroupSpec group;
  std::vector<std::size_t> table;
};

/// A complete mapping plus a partition whose classes sum to 0 under both the
/// identity and phi.
struct CmPartitionCertificate {
  CompleteMapping mapping;
  ZeroSumPartition partition;

  const GroupSpec& group() const { return mapping.group; }
  std::size_t m() const { return partition.m; }
};

std::optional<std::string> check_complete_mapping(const CompleteMapping& cm);
inline bool verify_complete_mapping(const CompleteMapping& cm) {
  return !check_complete_mapping(cm).has_value();
}
std::optional<std::string> check_cm_certificate(const CmPartitionCertificate& c);
inline bool verify_cm_certificate(const CmPartitionCertificate& c) {
  return !check_cm_certificate(c).has_value();
}

/// phi = id on an odd-order group; classes from zero_sum_partition(g, m).
CmPartitionCertificate cm_odd_identity(const GroupSpec& g, std::size_t m,
                                       const ZeroSumOptions& opt = {});

/// 2 exp(g) when exp(g) = |g|/2, otherwise max{4, exp(g)}.
std::size_t two_group_class_size(const GroupSpec& g);

/// Certificate with m = two_group_class_size(g) for a 2-group with at least
/// two even components. Results are cached per group.
CmPartitionCertificate cm_two_group(const GroupSpec& g);

/// phi = (phi1, phi2) and classes = products of classes, on L + H.
CmPartitionCertificate cm_product(const CmPartitionCertificate& left,
                                  const CmPartitionCertificate& right);

/// Certificate on g with m = k * l, where l = two_group_class_size(Sylow-2)
/// (1 for odd order) and k divides the odd part (default: all of it).
CmPartitionCertificate cm_zero_sum_partition(const GroupSpec& g,
                                             std::optional<std::size_t> k = std::nullopt);

/// phi + z is again a complete mapping; class sums of phi shift by m z.
CompleteMapping translate(const CompleteMapping& cm, std::size_t z);

/// Complete mapping of g by depth-first search (fail-first cell order for
/// small groups). nullopt when the budget runs out.
std::optional<CompleteMapping> search_complete_mapping(const GroupSpec& g,
                                                       std::uint64_t budget = 10'000'000,
                                                       std::uint64_t seed = 0);

/// Search problem behind search_complete_mapping.
class CompleteMappingProblem {
 public:
  using Witness = std::vector<std::size_t>;

  explicit CompleteMappingProblem(const GroupSpec& g);

  bool complete() const { return assigned_ == n_; }
  Witness witness() const { return phi_; }
  void candidates(std::vector<std::size_t>& out);
  void push(std::size_t y);
  void pop();

 private:
  std::size_t pick_variable() const;

  GroupSpec g_;
  std::size_t n_;
  bool fail_first_;
  std::vector<std::size_t> phi_;
  std::vector<char> image_used_;
  std::vector<char> theta_used_;
  std::vector<std::size_t> order_;  // variables in assignment order
  std::vector<std::size_t> var_at_depth_;  // variable chosen by candidates() per depth
  std::size_t assigned_ = 0;
};

}  // namespace cmrs
