#pragma once

// Finite Abelian groups in canonical form: a direct sum of prime-power
// cyclic components, ordered by prime ascending and, within one prime, by
// component order descending. Elements are residue vectors over those
// components; a mixed-radix index (first component most significant) is
// used wherever elements have to address tables.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cmrs {

inline constexpr std::uint64_t kDefaultMaxOrder = std::uint64_t{1} << 16;

struct GroupElement {
  std::vector<std::int64_t> residues;

  auto operator<=>(const GroupElement&) const = default;
};

class GroupSpec {
 public:
  /// The trivial group.
  GroupSpec() = default;

  /// Builds the canonical form of Z_{orders[0]} + Z_{orders[1]} + ...
  /// Every order must be >= 2; composite orders are split into their
  /// prime-power parts.
  explicit GroupSpec(std::vector<std::int64_t> cyclic_orders,
                     std::uint64_t max_order = kDefaultMaxOrder);

  /// Grammar: `Term ('x' Term)*` with `Term := 'Z'? digits`, case-insensitive,
  /// whitespace ignored; or the comma form `4,2,3`.
  static GroupSpec parse(std::string_view text,
                         std::uint64_t max_order = kDefaultMaxOrder);

  const std::vector<std::int64_t>& components() const { return components_; }
  std::size_t rank() const { return components_.size(); }
  std::uint64_t order() const { return order_; }
  std::uint64_t exponent() const { return exponent_; }
  int even_component_count() const;
  /// 2^p - 1 where p is the number of even components.
  std::uint64_t involution_count() const;

  bool is_trivial() const { return components_.empty(); }
  bool is_two_group() const;
  bool is_odd_order() const { return order_ % 2 == 1; }

  GroupSpec sylow2() const;
  GroupSpec odd_part() const;

  /// Canonical rendering, e.g. `Z4xZ2xZ3`; the trivial group renders as `Z1`.
  std::string to_string() const;

  GroupElement zero() const;
  bool contains(const GroupElement& x) const;
  GroupElement add(const GroupElement& x, const GroupElement& y) const;
  GroupElement neg(const GroupElement& x) const;
  GroupElement sub(const GroupElement& x, const GroupElement& y) const;
  GroupElement scalar_mul(std::int64_t k, const GroupElement& x) const;
  GroupElement sum_over(std::span<const GroupElement> xs) const;
  /// Generator of component `i` (a unit vector).
  GroupElement basis(std::size_t i) const;

  std::size_t index_of(const GroupElement& x) const;
  GroupElement element(std::size_t index) const;
  std::vector<GroupElement> elements() const;

  std::size_t add_index(std::size_t x, std::size_t y) const;
  std::size_t neg_index(std::size_t x) const;
  std::size_t sub_index(std::size_t x, std::size_t y) const;
  std::size_t mul_index(std::int64_t k, std::size_t x) const;
  std::size_t sum_indices(std::span<const std::size_t> xs) const;

  bool operator==(const GroupSpec& other) const {
    return components_ == other.components_;
  }

 private:
  void require_member(const GroupElement& x) const;
  void finish();

  std::vector<std::int64_t> components_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t order_ = 1;
  std::uint64_t exponent_ = 1;
};

/// Odd order, or more than one involution. Exactly the finite Abelian groups
/// that admit a complete mapping and whose elements sum to zero.
bool admits_complete_mapping(const GroupSpec& g);

/// Fold of `add` over every element of `g`.
GroupElement sum_all_elements(const GroupSpec& g);

/// One canonical representative per isomorphism class.
std::vector<GroupSpec> abelian_groups_of_order(std::uint64_t n);
std::vector<GroupSpec> abelian_groups_up_to(std::uint64_t max_order);

std::vector<std::uint64_t> prime_factors(std::uint64_t n);  // ascending, with repeats
std::vector<std::uint64_t> divisors(std::uint64_t n);       // ascending
bool is_power_of_two(std::uint64_t n);
bool is_prime(std::uint64_t n);

/// Canonical form of L + R together with the positions where the components
/// of each summand ended up.
struct DirectSum {
  GroupSpec group;
  std::vector<std::size_t> left_slots;
  std::vector<std::size_t> right_slots;

  GroupElement embed(const GroupElement& left, const GroupElement& right) const;
  GroupElement left_part(const GroupElement& x) const;
  GroupElement right_part(const GroupElement& x) const;
};

DirectSum direct_sum(const GroupSpec& left, const GroupSpec& right);

/// A subgroup `sub` of `ambient` given by the images of the component
/// generators of `sub`, plus one representative per coset.
struct SubgroupEmbedding {
  GroupSpec ambient;
  GroupSpec sub;
  std::vector<GroupElement> generator_images;
  std::vector<GroupElement> coset_reps;

  GroupElement inject(const GroupElement& s) const;
};

/// For a 2-group with at least two even components, not isomorphic to
/// Z_{2^b} + Z_2: the index-4 subgroup obtained by doubling the two largest
/// components, with coset representatives {0, c, d, c+d} where c and d
/// generate those components.
SubgroupEmbedding index4_subgroup(const GroupSpec& g);

/// Centered residues {-(h-1)/2, ..., (h-1)/2}: a transversal of <h> in Z_q.
std::vector<std::int64_t> cyclic_transversal(std::int64_t order_q, std::int64_t h);

}  // namespace cmrs
