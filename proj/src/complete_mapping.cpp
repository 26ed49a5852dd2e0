#include "cmrs/complete_mapping.hpp"

#include <map>
#include <mutex>

#include "cmrs/errors.hpp"

namespace cmrs {

namespace {

constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
constexpr std::uint64_t kMaxSearchedOrder = 1u << 12;

std::string class_locus(std::size_t k) { return "classes[" + std::to_string(k) + "]"; }

}  // namespace

std::optional<std::string> check_complete_mapping(const CompleteMapping& cm) {
  const auto n = cm.group.order();
  if (cm.table.size() != n) return "phi: table has " + std::to_string(cm.table.size()) + " entries, expected " + std::to_string(n);
  std::vector<char> img(n, 0), th(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    const auto y = cm.table[x];
    if (y >= n) return "phi[" + std::to_string(x) + "]: index out of range";
    if (img[y]) return "phi[" + std::to_string(x) + "]: phi is not injective";
    img[y] = 1;
    const auto t = cm.group.add_index(x, y);
    if (th[t]) return "phi[" + std::to_string(x) + "]: x + phi(x) is not injective";
    th[t] = 1;
  }
  return std::nullopt;
}

std::optional<std::string> check_cm_certificate(const CmPartitionCertificate& c) {
  if (!(c.mapping.group == c.partition.group)) return "group: mapping and partition disagree";
  if (auto err = check_complete_mapping(c.mapping)) return err;
  if (auto err = check_zero_sum_partition(c.partition)) return err;
  const auto& g = c.mapping.group;
  for (std::size_t k = 0; k < c.partition.classes.size(); ++k) {
    std::size_t acc = 0;
    for (auto x : c.partition.classes[k]) acc = g.add_index(acc, c.mapping.table[x]);
    if (acc != 0) return class_locus(k) + ": phi-sum is not 0";
  }
  return std::nullopt;
}

CmPartitionCertificate cm_odd_identity(const GroupSpec& g, std::size_t m, const ZeroSumOptions& opt) {
  if (!g.is_odd_order()) throw PreconditionError("cm_odd_identity needs an odd-order group, got " + g.to_string());
  CmPartitionCertificate c;
  c.mapping.group = g;
  c.mapping.table.resize(g.order());
  for (std::size_t x = 0; x < g.order(); ++x) c.mapping.table[x] = x;
  c.partition = zero_sum_partition(g, m, opt);
  return c;
}

std::size_t two_group_class_size(const GroupSpec& g) {
  if (!g.is_two_group() || g.even_component_count() < 2)
    throw PreconditionError("two_group_class_size needs a 2-group with at least two involutions, got " + g.to_string());
  const auto e = g.exponent();
  if (2 * e == g.order()) return static_cast<std::size_t>(2 * e);
  return static_cast<std::size_t>(std::max<std::uint64_t>(4, e));
}

CompleteMapping translate(const CompleteMapping& cm, std::size_t z) {
  CompleteMapping out = cm;
  for (auto& y : out.table) y = cm.group.add_index(y, z);
  return out;
}

// ---- search ---------------------------------------------------------------

CompleteMappingProblem::CompleteMappingProblem(const GroupSpec& g)
    : g_(g), n_(g.order()), fail_first_(g.order() <= 512), phi_(n_, kUnassigned),
      image_used_(n_, 0), theta_used_(n_, 0), var_at_depth_(n_ + 1, 0) {}

std::size_t CompleteMappingProblem::pick_variable() const {
  if (!fail_first_) return assigned_;
  std::size_t best = kUnassigned, best_count = kUnassigned;
  for (std::size_t x = 0; x < n_; ++x) {
    if (phi_[x] != kUnassigned) continue;
    std::size_t count = 0;
    for (std::size_t y = 0; y < n_ && count < best_count; ++y)
      if (!image_used_[y] && !theta_used_[g_.add_index(x, y)]) ++count;
    if (count < best_count) {
      best = x;
      best_count = count;
      if (count <= 1) break;
    }
  }
  return best;
}

void CompleteMappingProblem::candidates(std::vector<std::size_t>& out) {
  out.clear();
  const auto x = pick_variable();
  var_at_depth_[assigned_] = x;
  for (std::size_t y = 0; y < n_; ++y)
    if (!image_used_[y] && !theta_used_[g_.add_index(x, y)]) out.push_back(y);
}

void CompleteMappingProblem::push(std::size_t y) {
  const auto x = var_at_depth_[assigned_];
  phi_[x] = y;
  image_used_[y] = 1;
  theta_used_[g_.add_index(x, y)] = 1;
  order_.push_back(x);
  ++assigned_;
}

void CompleteMappingProblem::pop() {
  const auto x = order_.back();
  order_.pop_back();
  const auto y = phi_[x];
  image_used_[y] = 0;
  theta_used_[g_.add_index(x, y)] = 0;
  phi_[x] = kUnassigned;
  --assigned_;
}

std::optional<CompleteMapping> search_complete_mapping(const GroupSpec& g, std::uint64_t budget, std::uint64_t seed) {
  if (g.order() > kMaxSearchedOrder)
    throw OutOfRangeError("complete-mapping search is bounded to order " + std::to_string(kMaxSearchedOrder));
  auto out = search::backtrack(CompleteMappingProblem(g), {budget, seed, false});
  if (out.status != search::Status::Found) return std::nullopt;
  return CompleteMapping{g, std::move(*out.witness)};
}

// ---- 2-groups -------------------------------------------------------------

namespace {

bool is_cyclic_plus_z2(const GroupSpec& g) {
  const auto& c = g.components();
  return g.is_two_group() && c.size() == 2 && c[1] == 2;
}

bool is_elementary(const GroupSpec& g) {
  for (auto c : g.components())
    if (c != 2) return false;
  return true;
}

CmPartitionCertificate whole_group_certificate(CompleteMapping cm) {
  CmPartitionCertificate c;
  c.partition.group = cm.group;
  c.partition.m = cm.group.order();
  c.partition.classes.emplace_back();
  for (std::size_t x = 0; x < cm.group.order(); ++x) c.partition.classes.back().push_back(x);
  c.mapping = std::move(cm);
  return c;
}

// Linear phi(v) = M v over GF(2)^r with M block diagonal: companion blocks of
// x^2+x+1, plus one companion block of x^3+x^2+1 when r is odd. Neither
// polynomial has 1 as a root, so M + I is invertible too.
CmPartitionCertificate elementary_certificate(const GroupSpec& g) {
  const std::size_t r = g.rank();
  std::vector<std::vector<int>> M(r, std::vector<int>(r, 0));
  std::size_t i = 0;
  if (r % 2 == 1) {
    // companion matrix of x^3 + x^2 + 1: x^3 = x^2 + 1
    M[0][2] = 1;
    M[1][0] = 1;
    M[2][1] = 1;
    M[2][2] = 1;
    i = 3;
  }
  for (; i + 1 < r; i += 2) {
    // companion matrix of x^2 + x + 1: x^2 = x + 1
    M[i][i + 1] = 1;
    M[i + 1][i] = 1;
    M[i + 1][i + 1] = 1;
  }
  CompleteMapping cm{g, std::vector<std::size_t>(g.order())};
  for (std::size_t x = 0; x < g.order(); ++x) {
    const auto v = g.element(x);
    GroupElement w = g.zero();
    for (std::size_t row = 0; row < r; ++row) {
      int bit = 0;
      for (std::size_t col = 0; col < r; ++col) bit ^= M[row][col] & static_cast<int>(v.residues[col]);
      w.residues[row] = bit;
    }
    cm.table[x] = g.index_of(w);
  }
  // Classes: cosets of the span of the first two basis vectors; phi is linear
  // so each coset's phi-image sums to phi(4v + 0) = 0.
  CmPartitionCertificate c;
  c.mapping = std::move(cm);
  c.partition.group = g;
  c.partition.m = 4;
  const std::size_t quarter = g.order() / 4;  // the first two coordinates are the most significant
  for (std::size_t low = 0; low < quarter; ++low)
    c.partition.classes.push_back({low, quarter + low, 2 * quarter + low, 3 * quarter + low});
  return c;
}

CmPartitionCertificate inductive_certificate(const GroupSpec& g, std::size_t m) {
  const auto emb = index4_subgroup(g);
  const auto base = cm_two_group(emb.sub);
  const std::size_t m0 = base.m();
  if (m0 != m && 2 * m0 != m)
    throw VerificationError("cm_two_group(" + g.to_string() + "): sub-certificate class size " +
                            std::to_string(m0) + " is neither m nor m/2");
  const auto c = emb.coset_reps[1];
  const auto d = emb.coset_reps[2];
  const auto mcd = g.neg(g.add(c, d));
  // Representatives used by the construction and the matching phi shifts.
  const std::vector<GroupElement> reps = {g.zero(), c, d, mcd};
  const std::vector<GroupElement> shifts = {g.zero(), d, mcd, c};
  for (const auto& e : reps)
    if (!(g.scalar_mul(static_cast<std::int64_t>(m), e) == g.zero()))
      throw VerificationError("cm_two_group(" + g.to_string() + "): m e != 0 for a representative");

  const auto& sub = emb.sub;
  std::vector<std::size_t> inj(sub.order());
  for (std::size_t s = 0; s < sub.order(); ++s) inj[s] = g.index_of(emb.inject(sub.element(s)));
  std::vector<std::size_t> rep_idx, shift_idx;
  for (std::size_t k = 0; k < 4; ++k) {
    rep_idx.push_back(g.index_of(reps[k]));
    shift_idx.push_back(g.index_of(shifts[k]));
  }

  CmPartitionCertificate out;
  out.mapping.group = g;
  out.mapping.table.assign(g.order(), kUnassigned);
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t s = 0; s < sub.order(); ++s) {
      const auto x = g.add_index(inj[s], rep_idx[k]);
      out.mapping.table[x] = g.add_index(inj[base.mapping.table[s]], shift_idx[k]);
    }

  out.partition.group = g;
  out.partition.m = m;
  const auto& cls0 = base.partition.classes;
  if (m0 == m) {
    for (std::size_t k = 0; k < 4; ++k)
      for (const auto& cls : cls0) {
        std::vector<std::size_t> shifted;
        for (auto s : cls) shifted.push_back(g.add_index(inj[s], rep_idx[k]));
        out.partition.classes.push_back(std::move(shifted));
      }
  } else {
    if (cls0.size() % 2 != 0)
      throw VerificationError("cm_two_group(" + g.to_string() + "): odd number of classes to merge");
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t i = 0; i < cls0.size(); i += 2) {
        std::vector<std::size_t> merged;
        for (auto s : cls0[i]) merged.push_back(g.add_index(inj[s], rep_idx[k]));
        for (auto s : cls0[i + 1]) merged.push_back(g.add_index(inj[s], rep_idx[k]));
        out.partition.classes.push_back(std::move(merged));
      }
  }
  return out;
}

std::mutex cache_mutex;
std::map<std::vector<std::int64_t>, CmPartitionCertificate>& cache() {
  static std::map<std::vector<std::int64_t>, CmPartitionCertificate> c;
  return c;
}

}  // namespace

CmPartitionCertificate cm_two_group(const GroupSpec& g) {
  const std::size_t m = two_group_class_size(g);
  {
    std::lock_guard lock(cache_mutex);
    auto it = cache().find(g.components());
    if (it != cache().end()) return it->second;
  }
  CmPartitionCertificate cert;
  if (is_cyclic_plus_z2(g)) {
    auto cm = search_complete_mapping(g);
    if (!cm) throw SearchBudgetError("no complete mapping of " + g.to_string() + " within budget");
    cert = whole_group_certificate(std::move(*cm));
  } else if (is_elementary(g)) {
    cert = elementary_certificate(g);
  } else {
    cert = inductive_certificate(g, m);
  }
  if (cert.m() != m) throw VerificationError("cm_two_group(" + g.to_string() + "): wrong class size");
  if (auto err = check_cm_certificate(cert)) throw VerificationError("cm_two_group(" + g.to_string() + "): " + *err);
  std::lock_guard lock(cache_mutex);
  cache().emplace(g.components(), cert);
  return cert;
}

CmPartitionCertificate cm_product(const CmPartitionCertificate& left, const CmPartitionCertificate& right) {
  const auto& L = left.group();
  const auto& H = right.group();
  if (H.is_trivial()) return left;
  if (L.is_trivial()) return right;
  const auto ds = direct_sum(L, H);
  const auto& g = ds.group;
  const auto nh = H.order();
  std::vector<std::size_t> pair_index(L.order() * nh);
  for (std::size_t l = 0; l < L.order(); ++l)
    for (std::size_t h = 0; h < nh; ++h)
      pair_index[l * nh + h] = g.index_of(ds.embed(L.element(l), H.element(h)));

  CmPartitionCertificate out;
  out.mapping.group = g;
  out.mapping.table.resize(g.order());
  for (std::size_t l = 0; l < L.order(); ++l)
    for (std::size_t h = 0; h < nh; ++h)
      out.mapping.table[pair_index[l * nh + h]] =
          pair_index[left.mapping.table[l] * nh + right.mapping.table[h]];
  out.partition.group = g;
  out.partition.m = left.m() * right.m();
  for (const auto& a : left.partition.classes)
    for (const auto& b : right.partition.classes) {
      std::vector<std::size_t> cls;
      cls.reserve(a.size() * b.size());
      for (auto l : a)
        for (auto h : b) cls.push_back(pair_index[l * nh + h]);
      out.partition.classes.push_back(std::move(cls));
    }
  return out;
}

CmPartitionCertificate cm_zero_sum_partition(const GroupSpec& g, std::optional<std::size_t> k) {
  if (!admits_complete_mapping(g))
    throw InfeasibleError(g.to_string() + " has exactly one involution and admits no complete mapping");
  const auto L = g.sylow2();
  const auto H = g.odd_part();
  if (k) {
    if (*k <= 1 || H.order() % *k != 0)
      throw PreconditionError("k = " + std::to_string(*k) + " must be > 1 and divide the odd part (order " +
                              std::to_string(H.order()) + ")");
  }
  CmPartitionCertificate out;
  if (H.is_trivial()) {
    out = cm_two_group(g);
  } else {
    const std::size_t kk = k ? *k : H.order();
    auto odd = cm_odd_identity(H, kk);
    out = L.is_trivial() ? std::move(odd) : cm_product(cm_two_group(L), odd);
  }
  if (!(out.group() == g)) throw VerificationError("cm_zero_sum_partition: product landed on the wrong group");
  if (auto err = check_cm_certificate(out)) throw VerificationError("cm_zero_sum_partition(" + g.to_string() + "): " + *err);
  return out;
}

}  // namespace cmrs
