#include "cmrs/group.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <utility>

#include "cmrs/errors.hpp"

namespace cmrs {

namespace {

struct PrimePower {
  std::uint64_t prime;
  std::int64_t order;
};

std::vector<PrimePower> split_prime_powers(std::int64_t n) {
  std::vector<PrimePower> parts;
  std::int64_t rest = n;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    std::int64_t q = 1;
    while (rest % p == 0) {
      rest /= p;
      q *= p;
    }
    parts.push_back({static_cast<std::uint64_t>(p), q});
  }
  if (rest > 1) parts.push_back({static_cast<std::uint64_t>(rest), rest});
  return parts;
}

bool canonical_less(const PrimePower& x, const PrimePower& y) {
  if (x.prime != y.prime) return x.prime < y.prime;
  return x.order > y.order;
}

// Stable canonical ordering of prime-power components; returns for every
// input position its slot in the canonical list.
std::vector<std::size_t> canonical_slots(const std::vector<std::int64_t>& prime_powers) {
  std::vector<PrimePower> parts;
  parts.reserve(prime_powers.size());
  for (auto q : prime_powers) parts.push_back({prime_factors(static_cast<std::uint64_t>(q)).front(), q});
  std::vector<std::size_t> perm(parts.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t i, std::size_t j) {
    return canonical_less(parts[i], parts[j]);
  });
  std::vector<std::size_t> slot(parts.size());
  for (std::size_t k = 0; k < perm.size(); ++k) slot[perm[k]] = k;
  return slot;
}

std::int64_t mod(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

void integer_partitions(int n, int max_part, std::vector<int>& current,
                        std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(current);
    return;
  }
  for (int part = std::min(n, max_part); part >= 1; --part) {
    current.push_back(part);
    integer_partitions(n - part, part, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

GroupSpec::GroupSpec(std::vector<std::int64_t> cyclic_orders, std::uint64_t max_order) {
  std::vector<PrimePower> parts;
  std::uint64_t order = 1;
  for (auto n : cyclic_orders) {
    if (n < 2) throw PreconditionError("cyclic component order must be >= 2, got " + std::to_string(n));
    if (order > max_order / static_cast<std::uint64_t>(n))
      throw PreconditionError("group order exceeds the configured maximum " + std::to_string(max_order));
    order *= static_cast<std::uint64_t>(n);
    for (auto& pp : split_prime_powers(n)) parts.push_back(pp);
  }
  std::stable_sort(parts.begin(), parts.end(), canonical_less);
  for (auto& pp : parts) components_.push_back(pp.order);
  finish();
}

void GroupSpec::finish() {
  strides_.assign(components_.size(), 1);
  order_ = 1;
  exponent_ = 1;
  for (std::size_t i = components_.size(); i-- > 0;) {
    strides_[i] = order_;
    order_ *= static_cast<std::uint64_t>(components_[i]);
  }
  for (auto c : components_) exponent_ = std::lcm(exponent_, static_cast<std::uint64_t>(c));
}

GroupSpec GroupSpec::parse(std::string_view text, std::uint64_t max_order) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch)))
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (s.empty()) throw ParseError("empty group spec");

  const char sep = s.find(',') != std::string::npos ? ',' : 'x';
  std::vector<std::int64_t> orders;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = s.find(sep, pos);
    std::string term = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    if (sep == 'x' && !term.empty() && term.front() == 'z') term.erase(0, 1);
    if (term.empty() || !std::all_of(term.begin(), term.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ParseError("malformed group term in '" + std::string(text) + "'");
    if (term.size() > 18) throw PreconditionError("group order exceeds the configured maximum");
    orders.push_back(std::stoll(term));
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return GroupSpec(std::move(orders), max_order);
}

int GroupSpec::even_component_count() const {
  return static_cast<int>(std::count_if(components_.begin(), components_.end(),
                                        [](std::int64_t c) { return c % 2 == 0; }));
}

std::uint64_t GroupSpec::involution_count() const {
  return (std::uint64_t{1} << even_component_count()) - 1;
}

bool GroupSpec::is_two_group() const { return is_power_of_two(order_); }

GroupSpec GroupSpec::sylow2() const {
  std::vector<std::int64_t> keep;
  for (auto c : components_)
    if (c % 2 == 0) keep.push_back(c);
  return GroupSpec(std::move(keep));
}

GroupSpec GroupSpec::odd_part() const {
  std::vector<std::int64_t> keep;
  for (auto c : components_)
    if (c % 2 == 1) keep.push_back(c);
  return GroupSpec(std::move(keep));
}

std::string GroupSpec::to_string() const {
  if (components_.empty()) return "Z1";
  std::string out;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out += 'x';
    out += 'Z' + std::to_string(components_[i]);
  }
  return out;
}

GroupElement GroupSpec::zero() const { return GroupElement{std::vector<std::int64_t>(rank(), 0)}; }

bool GroupSpec::contains(const GroupElement& x) const {
  if (x.residues.size() != rank()) return false;
  for (std::size_t i = 0; i < rank(); ++i)
    if (x.residues[i] < 0 || x.residues[i] >= components_[i]) return false;
  return true;
}

void GroupSpec::require_member(const GroupElement& x) const {
  if (!contains(x)) throw PreconditionError("element does not belong to " + to_string());
}

GroupElement GroupSpec::add(const GroupElement& x, const GroupElement& y) const {
  require_member(x);
  require_member(y);
  GroupElement r = x;
  for (std::size_t i = 0; i < rank(); ++i) r.residues[i] = (x.residues[i] + y.residues[i]) % components_[i];
  return r;
}

GroupElement GroupSpec::neg(const GroupElement& x) const {
  require_member(x);
  GroupElement r = x;
  for (std::size_t i = 0; i < rank(); ++i) r.residues[i] = mod(-x.residues[i], components_[i]);
  return r;
}

GroupElement GroupSpec::sub(const GroupElement& x, const GroupElement& y) const { return add(x, neg(y)); }

GroupElement GroupSpec::scalar_mul(std::int64_t k, const GroupElement& x) const {
  require_member(x);
  GroupElement r = x;
  for (std::size_t i = 0; i < rank(); ++i)
    r.residues[i] = mod(mod(k, components_[i]) * x.residues[i], components_[i]);
  return r;
}

GroupElement GroupSpec::sum_over(std::span<const GroupElement> xs) const {
  GroupElement acc = zero();
  for (const auto& x : xs) acc = add(acc, x);
  return acc;
}

GroupElement GroupSpec::basis(std::size_t i) const {
  GroupElement e = zero();
  e.residues.at(i) = 1;
  return e;
}

std::size_t GroupSpec::index_of(const GroupElement& x) const {
  require_member(x);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < rank(); ++i) idx += static_cast<std::size_t>(x.residues[i]) * strides_[i];
  return idx;
}

GroupElement GroupSpec::element(std::size_t index) const {
  if (index >= order_) throw PreconditionError("element index out of range for " + to_string());
  GroupElement e = zero();
  for (std::size_t i = 0; i < rank(); ++i)
    e.residues[i] = static_cast<std::int64_t>((index / strides_[i]) % static_cast<std::uint64_t>(components_[i]));
  return e;
}

std::vector<GroupElement> GroupSpec::elements() const {
  std::vector<GroupElement> out;
  out.reserve(order_);
  for (std::size_t i = 0; i < order_; ++i) out.push_back(element(i));
  return out;
}

std::size_t GroupSpec::add_index(std::size_t x, std::size_t y) const {
  std::size_t r = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    const auto c = static_cast<std::uint64_t>(components_[i]);
    r += ((x / strides_[i] % c + y / strides_[i] % c) % c) * strides_[i];
  }
  return r;
}

std::size_t GroupSpec::neg_index(std::size_t x) const {
  std::size_t r = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    const auto c = static_cast<std::uint64_t>(components_[i]);
    r += ((c - x / strides_[i] % c) % c) * strides_[i];
  }
  return r;
}

std::size_t GroupSpec::sub_index(std::size_t x, std::size_t y) const { return add_index(x, neg_index(y)); }

std::size_t GroupSpec::mul_index(std::int64_t k, std::size_t x) const {
  std::size_t r = 0;
  for (std::size_t i = 0; i < rank(); ++i) {
    const auto c = components_[i];
    const auto digit = static_cast<std::int64_t>(x / strides_[i] % static_cast<std::uint64_t>(c));
    r += static_cast<std::size_t>(mod(mod(k, c) * digit, c)) * strides_[i];
  }
  return r;
}

std::size_t GroupSpec::sum_indices(std::span<const std::size_t> xs) const {
  std::size_t acc = 0;
  for (auto x : xs) acc = add_index(acc, x);
  return acc;
}

bool admits_complete_mapping(const GroupSpec& g) {
  return g.is_odd_order() || g.even_component_count() >= 2;
}

GroupElement sum_all_elements(const GroupSpec& g) {
  std::size_t acc = 0;
  for (std::size_t x = 0; x < g.order(); ++x) acc = g.add_index(acc, x);
  return g.element(acc);
}

std::vector<GroupSpec> abelian_groups_of_order(std::uint64_t n) {
  if (n == 0) throw PreconditionError("group order must be positive");
  if (n == 1) return {GroupSpec{}};
  const auto factors = prime_factors(n);
  // Per prime: all partitions of its exponent.
  std::vector<std::vector<std::vector<std::int64_t>>> per_prime;
  for (std::size_t i = 0; i < factors.size();) {
    const auto p = factors[i];
    int e = 0;
    while (i < factors.size() && factors[i] == p) {
      ++e;
      ++i;
    }
    std::vector<std::vector<int>> parts;
    std::vector<int> current;
    integer_partitions(e, e, current, parts);
    std::vector<std::vector<std::int64_t>> choices;
    for (const auto& part : parts) {
      std::vector<std::int64_t> orders;
      for (int k : part) {
        std::int64_t q = 1;
        for (int t = 0; t < k; ++t) q *= static_cast<std::int64_t>(p);
        orders.push_back(q);
      }
      choices.push_back(std::move(orders));
    }
    per_prime.push_back(std::move(choices));
  }
  std::vector<GroupSpec> out;
  std::vector<std::size_t> pick(per_prime.size(), 0);
  while (true) {
    std::vector<std::int64_t> orders;
    for (std::size_t k = 0; k < per_prime.size(); ++k)
      for (auto q : per_prime[k][pick[k]]) orders.push_back(q);
    out.emplace_back(std::move(orders), n);
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == per_prime[k].size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  return out;
}

std::vector<GroupSpec> abelian_groups_up_to(std::uint64_t max_order) {
  std::vector<GroupSpec> out;
  for (std::uint64_t n = 1; n <= max_order; ++n)
    for (auto& g : abelian_groups_of_order(n)) out.push_back(std::move(g));
  return out;
}

DirectSum direct_sum(const GroupSpec& left, const GroupSpec& right) {
  std::vector<std::int64_t> all = left.components();
  all.insert(all.end(), right.components().begin(), right.components().end());
  const auto slot = canonical_slots(all);
  DirectSum ds{GroupSpec(all, std::numeric_limits<std::uint64_t>::max()), {}, {}};
  for (std::size_t i = 0; i < left.rank(); ++i) ds.left_slots.push_back(slot[i]);
  for (std::size_t i = 0; i < right.rank(); ++i) ds.right_slots.push_back(slot[left.rank() + i]);
  return ds;
}

GroupElement DirectSum::embed(const GroupElement& left, const GroupElement& right) const {
  GroupElement x = group.zero();
  if (left.residues.size() != left_slots.size() || right.residues.size() != right_slots.size())
    throw PreconditionError("direct sum: summand element has the wrong rank");
  for (std::size_t i = 0; i < left_slots.size(); ++i) x.residues[left_slots[i]] = left.residues[i];
  for (std::size_t i = 0; i < right_slots.size(); ++i) x.residues[right_slots[i]] = right.residues[i];
  if (!group.contains(x)) throw PreconditionError("direct sum: summand element out of range");
  return x;
}

GroupElement DirectSum::left_part(const GroupElement& x) const {
  GroupElement r{std::vector<std::int64_t>(left_slots.size())};
  for (std::size_t i = 0; i < left_slots.size(); ++i) r.residues[i] = x.residues.at(left_slots[i]);
  return r;
}

GroupElement DirectSum::right_part(const GroupElement& x) const {
  GroupElement r{std::vector<std::int64_t>(right_slots.size())};
  for (std::size_t i = 0; i < right_slots.size(); ++i) r.residues[i] = x.residues.at(right_slots[i]);
  return r;
}

GroupElement SubgroupEmbedding::inject(const GroupElement& s) const {
  if (!sub.contains(s)) throw PreconditionError("inject: element not in the subgroup");
  GroupElement acc = ambient.zero();
  for (std::size_t i = 0; i < sub.rank(); ++i)
    acc = ambient.add(acc, ambient.scalar_mul(s.residues[i], generator_images[i]));
  return acc;
}

SubgroupEmbedding index4_subgroup(const GroupSpec& g) {
  if (!g.is_two_group() || g.even_component_count() < 2)
    throw PreconditionError("index4_subgroup needs a 2-group with at least two even components, got " + g.to_string());
  const auto& comps = g.components();
  if (comps.size() == 2 && comps[1] == 2 && comps[0] > 2)
    throw PreconditionError("index4_subgroup: " + g.to_string() + " is Z_{2^b} + Z_2");

  // Canonical 2-groups list components in descending order, so the two
  // largest are at positions 0 and 1.
  struct Piece {
    std::int64_t order;
    GroupElement image;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (i < 2) {
      if (comps[i] > 2) pieces.push_back({comps[i] / 2, g.scalar_mul(2, g.basis(i))});
    } else {
      pieces.push_back({comps[i], g.basis(i)});
    }
  }
  std::vector<std::int64_t> orders;
  for (const auto& p : pieces) orders.push_back(p.order);
  const auto slot = canonical_slots(orders);

  SubgroupEmbedding emb;
  emb.ambient = g;
  emb.sub = GroupSpec(orders);
  emb.generator_images.resize(pieces.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) emb.generator_images[slot[i]] = pieces[i].image;
  const auto c = g.basis(0);
  const auto d = g.basis(1);
  emb.coset_reps = {g.zero(), c, d, g.add(c, d)};
  return emb;
}

std::vector<std::int64_t> cyclic_transversal(std::int64_t order_q, std::int64_t h) {
  if (order_q < 1 || order_q % 2 == 0) throw PreconditionError("cyclic_transversal: q must be odd");
  if (h <= 1 || order_q % h != 0) throw PreconditionError("cyclic_transversal: h must be a divisor > 1 of q");
  std::vector<std::int64_t> out;
  for (std::int64_t r = -(h - 1) / 2; r <= (h - 1) / 2; ++r) out.push_back(r);
  return out;
}

}  // namespace cmrs
