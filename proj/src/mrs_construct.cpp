#include <array>
#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "cmrs/errors.hpp"
#include "cmrs/mrs.hpp"

namespace cmrs {

namespace {

RectangleSet verified(RectangleSet r, const std::string& what) {
  if (auto err = check_mrs(r)) throw VerificationError(what + " produced an invalid rectangle set: " + *err);
  return r;
}

// Index table for the canonical direct sum: pair[x * |H| + y] = (x, y).
struct PairTable {
  DirectSum ds;
  std::size_t nh;
  std::vector<std::size_t> pair;

  PairTable(const GroupSpec& left, const GroupSpec& right) : ds(direct_sum(left, right)), nh(right.order()) {
    pair.resize(left.order() * nh);
    for (std::size_t x = 0; x < left.order(); ++x)
      for (std::size_t y = 0; y < nh; ++y) pair[x * nh + y] = ds.group.index_of(ds.embed(left.element(x), right.element(y)));
  }
  std::size_t operator()(std::size_t x, std::size_t y) const { return pair[x * nh + y]; }
};

using Bijection = std::vector<std::size_t>;

// Rectangle (s, u) of the lift is base rectangle s with cell (i, j) paired
// with maps[i][j](u).
RectangleSet lift_by_maps(const RectangleSet& base, const GroupSpec& h,
                          const std::vector<std::vector<Bijection>>& maps, std::string tag) {
  const PairTable pt(base.group, h);
  RectangleSet out{pt.ds.group, base.a, base.b, base.c * h.order(), {}, pt(base.omega, 0), pt(base.delta, 0),
                   base.provenance};
  for (const auto& rect : base.rects)
    for (std::size_t u = 0; u < h.order(); ++u) {
      Array2 r(base.a, std::vector<std::size_t>(base.b));
      for (std::size_t i = 0; i < base.a; ++i)
        for (std::size_t j = 0; j < base.b; ++j) r[i][j] = pt(rect[i][j], maps[i][j][u]);
      out.rects.push_back(std::move(r));
    }
  out.provenance.push_back(std::move(tag));
  return out;
}

Bijection negate(const GroupSpec& h, const Bijection& f) {
  Bijection out(f.size());
  for (std::size_t u = 0; u < f.size(); ++u) out[u] = h.neg_index(f[u]);
  return out;
}

std::size_t odd_component_slot(const GroupSpec& g, std::int64_t q) {
  for (std::size_t i = 0; i < g.rank(); ++i)
    if (g.components()[i] == q) return i;
  throw PreconditionError("no component of order " + std::to_string(q) + " in " + g.to_string());
}

std::int64_t mod(std::int64_t x, std::int64_t m) {
  const auto r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace

// ---- lifts ----------------------------------------------------------------

RectangleSet mrs_lift_product(const RectangleSet& base, const GroupSpec& h) {
  if (h.is_trivial()) return base;
  if (base.b % 2 != 0)
    throw OutOfRangeError("mrs_lift_product is implemented for even b only (b = " + std::to_string(base.b) + ")");
  if (base.a % 2 == 1 && !admits_complete_mapping(h))
    throw PreconditionError("mrs_lift_product: " + h.to_string() + " is not in the class G");
  const auto K = kotzig_array(h, base.a).arrays[0];
  std::vector<std::vector<Bijection>> maps(base.a, std::vector<Bijection>(base.b));
  for (std::size_t i = 0; i < base.a; ++i) {
    const auto neg = negate(h, K[i]);
    for (std::size_t j = 0; j < base.b; ++j) maps[i][j] = j % 2 == 0 ? K[i] : neg;
  }
  return verified(lift_by_maps(base, h, maps, "lemgl:H=" + h.to_string()), "mrs_lift_product");
}

RectangleSet mrs_lift_summand(const RectangleSet& base, const GroupSpec& h) {
  if (h.is_trivial()) return base;
  const std::size_t a = base.a, b = base.b;
  std::vector<std::vector<Bijection>> maps(a, std::vector<Bijection>(b));
  if (b % 2 == 0 || a % 2 == 0) {
    const bool rows_alternate = b % 2 == 0;
    const std::size_t len = rows_alternate ? a : b;
    if (len % 2 == 1 && !admits_complete_mapping(h))
      throw PreconditionError("mrs_lift_summand: " + h.to_string() + " is not in the class G");
    const auto K = kotzig_array(h, len).arrays[0];
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j < b; ++j) {
        const auto& k = rows_alternate ? K[i] : K[j];
        const bool minus = rows_alternate ? j % 2 == 1 : i % 2 == 1;
        maps[i][j] = minus ? negate(h, k) : k;
      }
  } else {
    if (!admits_complete_mapping(h))
      throw PreconditionError("mrs_lift_summand: " + h.to_string() + " is not in the class G");
    const auto phi = cm_zero_sum_partition(h).mapping.table;
    const auto n = h.order();
    Bijection id(n), rest(n);
    for (std::size_t u = 0; u < n; ++u) {
      id[u] = u;
      rest[u] = h.neg_index(h.add_index(u, phi[u]));
    }
    // T_0 + T_1 + T_2 = 0 pointwise; the 3x3 core is a Latin square of them.
    const std::vector<Bijection> T = {id, phi, rest};
    std::vector<Bijection> negT;
    for (const auto& t : T) negT.push_back(negate(h, t));
    const auto neg_id = negT[0];
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j < b; ++j) {
        if (i < 3 && j < 3)
          maps[i][j] = T[(i + j) % 3];
        else if (i < 3)
          maps[i][j] = (j - 3) % 2 == 0 ? T[i] : negT[i];
        else if (j < 3)
          maps[i][j] = (i - 3) % 2 == 0 ? T[j] : negT[j];
        else
          maps[i][j] = (i + j) % 2 == 0 ? id : neg_id;
      }
  }
  return verified(lift_by_maps(base, h, maps, "lift:H=" + h.to_string()), "mrs_lift_summand");
}

RectangleSet mrs_lift_cyclic(const RectangleSet& base, std::int64_t q, std::int64_t h,
                             std::optional<std::size_t> slot) {
  if (h == 1) return base;
  if (q < 3 || q % 2 == 0) throw PreconditionError("mrs_lift_cyclic: q must be odd");
  if (h < 1 || q % h != 0) throw PreconditionError("mrs_lift_cyclic: h must divide q");
  if (prime_factors(static_cast<std::uint64_t>(q)).front() != prime_factors(static_cast<std::uint64_t>(q)).back())
    throw PreconditionError("mrs_lift_cyclic: q must be a prime power");
  const auto& g0 = base.group;
  if (slot) {
    if (*slot >= g0.rank() || g0.components()[*slot] != q / h)
      throw PreconditionError("mrs_lift_cyclic: component " + std::to_string(*slot) + " of " + g0.to_string() +
                              " does not have order q/h");
  } else if (q != h) {
    throw PreconditionError("mrs_lift_cyclic: without a cyclic slot h must equal q");
  }

  std::vector<std::int64_t> rest;
  for (std::size_t i = 0; i < g0.rank(); ++i)
    if (!slot || i != *slot) rest.push_back(g0.components()[i]);
  const GroupSpec A(rest);
  const GroupSpec Zq({q});
  const auto ds = direct_sum(A, Zq);
  const auto& g = ds.group;

  auto lift_element = [&](std::size_t x) {
    const auto e = g0.element(x);
    GroupElement left{{}};
    std::int64_t r = 0;
    for (std::size_t i = 0; i < g0.rank(); ++i) {
      if (slot && i == *slot)
        r = e.residues[i];
      else
        left.residues.push_back(e.residues[i]);
    }
    return g.index_of(ds.embed(left, GroupElement{{mod(r * h, q)}}));
  };
  std::vector<std::size_t> lifted(g0.order());
  for (std::size_t x = 0; x < g0.order(); ++x) lifted[x] = lift_element(x);
  std::vector<std::size_t> gen(static_cast<std::size_t>(q));
  for (std::int64_t t = 0; t < q; ++t)
    gen[static_cast<std::size_t>(t)] = g.index_of(ds.embed(A.zero(), GroupElement{{t}}));

  // offset(i, j, u): a x b array of permutations of the centered residues
  // with zero row and column sums for every u.
  const auto a = base.a, b = base.b;
  const auto H = static_cast<std::size_t>(h);
  std::function<std::int64_t(std::size_t, std::size_t, std::size_t)> offset;
  if (b % 2 == 0) {
    const auto K = int_kotzig(a, H, true);
    offset = [K](std::size_t i, std::size_t j, std::size_t u) { return (j % 2 == 0 ? 1 : -1) * K.entries[i][u]; };
  } else if (a % 2 == 0) {
    const auto K = int_kotzig(b, H, true);
    offset = [K](std::size_t i, std::size_t j, std::size_t u) { return (i % 2 == 0 ? 1 : -1) * K.entries[j][u]; };
  } else {
    // 3 x 3 Latin core of a three-row array, sign-alternating fringe
    const auto K = int_kotzig(3, H, true);
    offset = [K](std::size_t i, std::size_t j, std::size_t u) -> std::int64_t {
      if (i < 3 && j < 3) return K.entries[(i + j) % 3][u];
      if (i < 3) return ((j - 3) % 2 == 0 ? 1 : -1) * K.entries[i][u];
      if (j < 3) return ((i - 3) % 2 == 0 ? 1 : -1) * K.entries[j][u];
      return ((i + j) % 2 == 0 ? 1 : -1) * K.entries[0][u];
    };
  }
  RectangleSet out{g, a, b, base.c * H, {}, lifted[base.omega], lifted[base.delta], base.provenance};
  for (const auto& rect : base.rects)
    for (std::size_t u = 0; u < H; ++u) {
      Array2 r(a, std::vector<std::size_t>(b));
      for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j)
          r[i][j] = g.add_index(lifted[rect[i][j]], gen[static_cast<std::size_t>(mod(offset(i, j, u), q))]);
      out.rects.push_back(std::move(r));
    }
  out.provenance.push_back("lemgl2:h=" + std::to_string(h));
  return verified(std::move(out), "mrs_lift_cyclic");
}

// ---- Z_p + delta by index-4 induction ---------------------------------------

namespace {

// P rows over the four copies; each row is a permutation of the coset
// representatives S and all copies have the same total. Rows 0..2 follow
// {2cd x3}, {c,d,cd}, {d,cd,c}, {cd,c,d}; further rows are Latin squares over
// S, with a searched five-row block replacing the first three when P = 1 mod 4.
std::vector<std::vector<std::size_t>> shift_rows(const GroupSpec& g, std::size_t P, const std::vector<std::size_t>& S) {
  using Row = std::array<std::size_t, 4>;
  std::vector<Row> idx;
  if ((P - 3) % 4 == 0) {
    idx = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  } else {
    std::vector<Row> perms;
    Row r = {0, 1, 2, 3};
    do perms.push_back(r);
    while (std::next_permutation(r.begin(), r.end()));
    auto total = [&](const std::vector<Row>& rows, std::size_t t) {
      std::size_t acc = 0;
      for (const auto& row : rows) acc = g.add_index(acc, S[row[t]]);
      return acc;
    };
    std::vector<Row> cur = {perms[0]};
    std::function<bool()> dfs = [&]() -> bool {
      if (cur.size() == 5) {
        const auto c0 = total(cur, 0);
        for (std::size_t t = 1; t < 4; ++t)
          if (total(cur, t) != c0) return false;
        return true;
      }
      for (const auto& p : perms) {
        cur.push_back(p);
        if (dfs()) return true;
        cur.pop_back();
      }
      return false;
    };
    if (!dfs()) throw VerificationError("shift_rows: no five-row block in " + g.to_string());
    idx = cur;
  }
  while (idx.size() < P)
    for (std::size_t k = 0; k < 4; ++k) idx.push_back({k % 4, (k + 1) % 4, (k + 2) % 4, (k + 3) % 4});
  std::vector<std::vector<std::size_t>> out;
  for (const auto& row : idx) out.push_back({S[row[0]], S[row[1]], S[row[2]], S[row[3]]});
  return out;
}

// MRS(p, 4; |delta|/4) on delta + Z_p from one on sub + Z_p, sub the index-4
// subgroup of delta. Every rectangle is copied four times with row shifts:
// shift_rows supplies one coset representative per row and copy.
RectangleSet index4_step(const RectangleSet& sub, const SubgroupEmbedding& emb, std::int64_t p,
                         const std::string& tag) {
  const auto& delta = emb.ambient;
  const GroupSpec Zp({p});
  const auto ds = direct_sum(delta, Zp);
  const auto& g = ds.group;
  const auto dsH = direct_sum(emb.sub, Zp);
  std::vector<std::size_t> inj(sub.group.order());
  for (std::size_t x = 0; x < inj.size(); ++x) {
    const auto e = dsH.group.element(x);
    inj[x] = g.index_of(ds.embed(emb.inject(dsH.left_part(e)), dsH.right_part(e)));
  }
  auto lift = [&](const GroupElement& d) { return g.index_of(ds.embed(d, Zp.zero())); };
  const auto cc = lift(emb.coset_reps[1]);
  const auto dd = lift(emb.coset_reps[2]);
  const auto cd = g.add_index(cc, dd);
  const auto two_cd = g.add_index(cd, cd);
  const auto P = static_cast<std::size_t>(p);
  const auto rows = shift_rows(g, P, {two_cd, cc, dd, cd});
  std::vector<std::vector<std::size_t>> shifts(4, std::vector<std::size_t>(P));
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t t = 0; t < 4; ++t) shifts[t][i] = rows[i][t];
  std::size_t col_shift = 0;
  for (std::size_t i = 0; i < P; ++i) col_shift = g.add_index(col_shift, rows[i][0]);

  RectangleSet out{g, P, 4, sub.c * 4, {}, inj[sub.omega], g.add_index(inj[sub.delta], col_shift), sub.provenance};
  for (const auto& rect : sub.rects)
    for (const auto& sh : shifts) {
      Array2 r(P, std::vector<std::size_t>(4));
      for (std::size_t i = 0; i < P; ++i)
        for (std::size_t j = 0; j < 4; ++j) r[i][j] = g.add_index(inj[rect[i][j]], sh[i]);
      out.rects.push_back(std::move(r));
    }
  out.provenance.push_back(tag + ":" + delta.to_string());
  return out;
}

void require_chain_group(const GroupSpec& delta, const char* who) {
  if (!delta.is_two_group() || delta.even_component_count() < 2)
    throw PreconditionError(std::string(who) + ": " + delta.to_string() + " must be a 2-group with at least two involutions");
  if (delta.exponent() > 4) throw PreconditionError(std::string(who) + ": exp(" + delta.to_string() + ") exceeds 4");
}

}  // namespace

RectangleSet mrs_p3(const GroupSpec& delta, const search::Options& opt) {
  require_chain_group(delta, "mrs_p3");
  if (delta.order() <= 8) {
    const auto g = direct_sum(delta, GroupSpec({3})).group;
    auto res = mrs_search(g, 3, 4, delta.order() / 4, opt);
    if (!res.witness)
      throw SearchBudgetError("mrs_p3: base case on " + g.to_string() + " not found (" + search::to_string(res.status) + ")");
    res.witness->provenance = {"p3-base"};
    return *res.witness;
  }
  const auto emb = index4_subgroup(delta);
  return verified(index4_step(mrs_p3(emb.sub, opt), emb, 3, "p3-step"), "mrs_p3");
}

// ---- Z_p + delta from a Kotzig array set ----------------------------------

namespace {

struct Dsu {
  std::vector<std::size_t> p;
  explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void join(std::size_t x, std::size_t y) { p[find(x)] = find(y); }
};

// Picks one element per class so that the picked set U is a union of orbits
// of the maps in `gens`. Returns U (sorted) or nullopt.
std::optional<std::vector<std::size_t>> orbit_transversal(std::size_t n, const std::vector<const Bijection*>& gens,
                                                          const std::vector<std::size_t>& class_of_u,
                                                          std::size_t classes) {
  Dsu dsu(n);
  for (const auto* gmap : gens)
    for (std::size_t u = 0; u < n; ++u) dsu.join(u, (*gmap)[u]);
  std::vector<std::vector<std::size_t>> orbit_members(n);
  for (std::size_t u = 0; u < n; ++u) orbit_members[dsu.find(u)].push_back(u);
  std::vector<std::vector<std::size_t>> usable;  // orbits meeting every class at most once
  for (auto& o : orbit_members) {
    if (o.empty()) continue;
    std::vector<std::size_t> cls;
    for (auto u : o) cls.push_back(class_of_u[u]);
    std::sort(cls.begin(), cls.end());
    if (std::adjacent_find(cls.begin(), cls.end()) == cls.end()) usable.push_back(o);
  }
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t k = 0; k < usable.size(); ++k)
    for (auto u : usable[k]) by_class[class_of_u[u]].push_back(k);

  std::vector<char> covered(classes, 0);
  std::vector<std::size_t> chosen;
  std::function<bool()> dfs = [&]() -> bool {
    std::size_t k = 0;
    while (k < classes && covered[k]) ++k;
    if (k == classes) return true;
    for (auto o : by_class[k]) {
      bool ok = true;
      for (auto u : usable[o]) ok = ok && !covered[class_of_u[u]];
      if (!ok) continue;
      for (auto u : usable[o]) covered[class_of_u[u]] = 1;
      chosen.push_back(o);
      if (dfs()) return true;
      chosen.pop_back();
      for (auto u : usable[o]) covered[class_of_u[u]] = 0;
    }
    return false;
  };
  if (!dfs()) return std::nullopt;
  std::vector<std::size_t> U;
  for (auto o : chosen) U.insert(U.end(), usable[o].begin(), usable[o].end());
  std::sort(U.begin(), U.end());
  return U;
}

Bijection inverse(const Bijection& f) {
  Bijection inv(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) inv[f[x]] = x;
  return inv;
}

// Zero-sum classes of size m (m divisible by 4) built from cosets of a Klein
// subgroup of the involutions and pairs {x, -x}; the first m/2 entries of
// every class form a negation-closed set.
std::optional<std::vector<std::vector<std::size_t>>> symmetric_partition(const GroupSpec& delta, std::size_t m) {
  const std::size_t n = delta.order();
  if (m % 4 != 0 || n % m != 0) return std::nullopt;
  std::vector<std::size_t> omega;
  for (std::size_t x = 0; x < n; ++x)
    if (delta.add_index(x, x) == 0) omega.push_back(x);
  if (omega.size() < 4) return std::nullopt;
  const auto a = omega[1], b = omega[2];
  const std::size_t t = n / m;
  std::vector<std::vector<std::size_t>> singles(t), pairs(t);
  std::vector<char> done(n, 0);
  std::size_t k = 0;
  for (auto x : omega) {
    if (done[x]) continue;
    const std::size_t xa = delta.add_index(x, a), xb = delta.add_index(x, b);
    for (auto y : {x, xa, xb, delta.add_index(xa, b)}) {
      done[y] = 1;
      singles[k % t].push_back(y);
    }
    ++k;
  }
  std::vector<std::vector<std::size_t>> classes(t);
  std::size_t s = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (done[x]) continue;
    while (pairs[s].size() + singles[s].size() == m) ++s;
    const auto y = delta.neg_index(x);
    done[x] = done[y] = 1;
    pairs[s].push_back(x);
    pairs[s].push_back(y);
  }
  for (std::size_t c = 0; c < t; ++c) {
    classes[c] = pairs[c];
    classes[c].insert(classes[c].end(), singles[c].begin(), singles[c].end());
    if (classes[c].size() != m) return std::nullopt;
  }
  return classes;
}

// A union of cycles of psi meeting every class in exactly `need` elements.
std::optional<std::vector<std::size_t>> half_cover(const Bijection& psi, const std::vector<std::size_t>& class_of_u,
                                                   std::size_t classes, std::size_t need) {
  const std::size_t n = psi.size();
  std::vector<std::vector<std::size_t>> cycles;
  std::vector<char> seen(n, 0);
  for (std::size_t u = 0; u < n; ++u) {
    if (seen[u]) continue;
    cycles.emplace_back();
    for (auto v = u; !seen[v]; v = psi[v]) {
      seen[v] = 1;
      cycles.back().push_back(v);
    }
  }
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> hits(cycles.size());  // (class, count)
  std::vector<std::vector<std::size_t>> touching(classes);
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    std::vector<std::size_t> cnt(classes, 0);
    for (auto u : cycles[c]) ++cnt[class_of_u[u]];
    for (std::size_t k = 0; k < classes; ++k)
      if (cnt[k]) {
        hits[c].push_back({k, cnt[k]});
        touching[k].push_back(c);
      }
  }
  std::vector<std::size_t> have(classes, 0);
  std::vector<char> state(cycles.size(), 0);  // 0 open, 1 taken, 2 excluded
  std::uint64_t nodes = 0;
  std::function<bool()> dfs = [&]() -> bool {
    if (++nodes > 200'000) return false;
    std::size_t k = 0;
    while (k < classes && have[k] == need) ++k;
    if (k == classes) return true;
    std::size_t avail = 0;
    for (auto c : touching[k])
      if (state[c] == 0)
        for (auto [cls, cnt] : hits[c])
          if (cls == k) avail += cnt;
    if (have[k] + avail < need) return false;
    std::vector<std::size_t> excluded;
    bool found = false;
    for (auto c : touching[k]) {
      if (state[c] != 0) continue;
      bool fits = true;
      for (auto [cls, cnt] : hits[c]) fits = fits && have[cls] + cnt <= need;
      if (fits) {
        state[c] = 1;
        for (auto [cls, cnt] : hits[c]) have[cls] += cnt;
        found = dfs();
        if (found) break;
        for (auto [cls, cnt] : hits[c]) have[cls] -= cnt;
      }
      state[c] = 2;
      excluded.push_back(c);
    }
    if (!found)
      for (auto c : excluded) state[c] = 0;
    return found;
  };
  if (!dfs()) return std::nullopt;
  std::vector<std::size_t> U;
  for (std::size_t c = 0; c < cycles.size(); ++c)
    if (state[c] == 1) U.insert(U.end(), cycles[c].begin(), cycles[c].end());
  std::sort(U.begin(), U.end());
  return U;
}

// Rows v and -v of Z_p are paired; in every rectangle the first m/2 columns
// carry Z_p coordinate -i instead of i, so two Kotzig rows sharing a pair
// must hold the same set in those columns.
std::optional<RectangleSet> kas_paired(std::int64_t p, const GroupSpec& delta, std::size_t m,
                                       const CmPartitionCertificate& cert0,
                                       const std::vector<std::vector<std::size_t>>& classes,
                                       const std::vector<std::size_t>& class_of) {
  const std::size_t n = delta.order();
  const std::size_t t = classes.size();
  const std::size_t pieces = (static_cast<std::size_t>(p) - 3) / 2;
  std::optional<std::vector<std::vector<std::size_t>>> sym;
  if (pieces > 0) {
    sym = symmetric_partition(delta, m);
    if (!sym) return std::nullopt;
  }
  for (std::size_t z = 0; z < n; ++z) {
    const auto phi = translate(cert0.mapping, z).table;
    std::vector<Bijection> R(3, Bijection(n));
    for (std::size_t x = 0; x < n; ++x) {
      R[0][x] = x;
      R[1][x] = phi[x];
      R[2][x] = delta.neg_index(delta.add_index(x, phi[x]));
    }
    // sign +1: rows alpha and beta share a pair.
    // sign -1: alpha shares a pair with a copy of itself and beta with the
    // negated copy (needs at least one two-row piece).
    for (int sign : {1, -1}) {
      if (sign < 0 && pieces == 0) continue;
      for (std::size_t alpha = 0; alpha < 3; ++alpha)
        for (std::size_t beta = 0; beta < 3; ++beta) {
          if (beta == alpha || (sign > 0 && beta < alpha)) continue;
          const std::size_t gamma = 3 - alpha - beta;
          const auto ra_inv = inverse(R[alpha]);
          Bijection psi(n);
          for (std::size_t u = 0; u < n; ++u) {
            psi[u] = R[beta][ra_inv[u]];
            if (sign < 0) psi[u] = delta.neg_index(psi[u]);
          }
          std::vector<std::size_t> class_of_u(n);
          for (std::size_t u = 0; u < n; ++u) class_of_u[u] = class_of[ra_inv[u]];
          const auto U = half_cover(psi, class_of_u, t, m / 2);
          if (!U) continue;

          std::vector<std::vector<std::vector<std::size_t>>> kas_rows(3, std::vector<std::vector<std::size_t>>(t));
          for (std::size_t s = 0; s < t; ++s) {
            std::vector<std::size_t> cols;
            for (auto x : classes[s])
              if (std::binary_search(U->begin(), U->end(), R[alpha][x])) cols.push_back(x);
            for (auto x : classes[s])
              if (!std::binary_search(U->begin(), U->end(), R[alpha][x])) cols.push_back(x);
            for (std::size_t r = 0; r < 3; ++r)
              for (auto x : cols) kas_rows[r][s].push_back(R[r][x]);
          }
          for (std::size_t q = 0; q < pieces; ++q) {
            std::vector<std::vector<std::size_t>> pos(t), negr(t);
            for (std::size_t s = 0; s < t; ++s) {
              pos[s] = (sign < 0 && q == 0) ? kas_rows[alpha][s] : (*sym)[s];
              for (auto x : pos[s]) negr[s].push_back(delta.neg_index(x));
            }
            kas_rows.push_back(std::move(pos));
            kas_rows.push_back(std::move(negr));
          }
          std::vector<std::size_t> row_of(static_cast<std::size_t>(p));
          const auto P = static_cast<std::size_t>(p);
          row_of[0] = gamma;
          if (sign > 0) {
            row_of[1] = alpha;
            row_of[P - 1] = beta;
            for (std::size_t q = 0; q < pieces; ++q) {
              row_of[q + 2] = 3 + 2 * q;
              row_of[P - 2 - q] = 4 + 2 * q;
            }
          } else {
            row_of[1] = alpha;
            row_of[P - 1] = 3;
            row_of[2] = beta;
            row_of[P - 2] = 4;
            for (std::size_t q = 1; q < pieces; ++q) {
              row_of[q + 2] = 3 + 2 * q;
              row_of[P - 2 - q] = 4 + 2 * q;
            }
          }

          const GroupSpec Zp({p});
          const PairTable pt(delta, Zp);
          RectangleSet out{pt.ds.group, P, m, t, {}, 0, 0,
                           {"kas-based:p=" + std::to_string(p) + ",m=" + std::to_string(m) + ",paired"}};
          for (std::size_t s = 0; s < t; ++s) {
            Array2 rect(P, std::vector<std::size_t>(m));
            for (std::int64_t i = 0; i < p; ++i)
              for (std::size_t j = 0; j < m; ++j) {
                const auto zp = static_cast<std::size_t>(j < m / 2 ? mod(-i, p) : i);
                rect[static_cast<std::size_t>(i)][j] = pt(kas_rows[row_of[static_cast<std::size_t>(i)]][s][j], zp);
              }
            out.rects.push_back(std::move(rect));
          }
          return verified(std::move(out), "mrs_kas_based");
        }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<RectangleSet> mrs_kas_direct(std::int64_t p, const GroupSpec& delta, std::size_t m) {
  if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) throw PreconditionError("mrs_kas_based: p must be an odd prime");
  if (!delta.is_two_group() || delta.even_component_count() < 2)
    throw PreconditionError("mrs_kas_based: " + delta.to_string() + " must be a 2-group with at least two involutions");
  const std::size_t n = delta.order();
  if (m < 2 || n % m != 0) throw PreconditionError("mrs_kas_based: m = " + std::to_string(m) + " does not divide |delta|");
  if (std::gcd(static_cast<std::int64_t>(m) - 1, p) != 1) throw PreconditionError("mrs_kas_based: gcd(m-1, p) != 1");
  const std::size_t m0 = two_group_class_size(delta);
  if (m % m0 != 0)
    throw PreconditionError("mrs_kas_based: no Kotzig array set with odd row count for m = " + std::to_string(m) +
                            " (needs a multiple of " + std::to_string(m0) + ")");

  const std::int64_t mult = mod(-(static_cast<std::int64_t>(m) - 1), p);  // f(x) = mult * x
  std::vector<std::vector<std::int64_t>> orbits;
  {
    std::vector<char> seen(static_cast<std::size_t>(p), 0);
    for (std::int64_t x = 1; x < p; ++x) {
      if (seen[static_cast<std::size_t>(x)]) continue;
      std::vector<std::int64_t> o;
      for (std::int64_t y = x; !seen[static_cast<std::size_t>(y)]; y = mod(y * mult, p)) {
        seen[static_cast<std::size_t>(y)] = 1;
        o.push_back(y);
      }
      orbits.push_back(std::move(o));
    }
  }
  const std::size_t d = orbits.front().size();

  const auto cert0 = cm_two_group(delta);
  const std::size_t t = n / m;
  const std::size_t merge = m / m0;
  std::vector<std::vector<std::size_t>> classes(t);
  for (std::size_t k = 0; k < cert0.partition.classes.size(); ++k)
    classes[k / merge].insert(classes[k / merge].end(), cert0.partition.classes[k].begin(),
                              cert0.partition.classes[k].end());
  std::vector<std::size_t> class_of(n);
  for (std::size_t k = 0; k < t; ++k)
    for (auto x : classes[k]) class_of[x] = k;
  Bijection neg(n);
  for (std::size_t x = 0; x < n; ++x) neg[x] = delta.neg_index(x);

  const std::size_t pieces = (static_cast<std::size_t>(p) - 3) / 2;
  for (std::size_t z = 0; z < n; ++z) {
    const auto phi = translate(cert0.mapping, z).table;
    std::vector<Bijection> R(3, Bijection(n));
    for (std::size_t x = 0; x < n; ++x) {
      R[0][x] = x;
      R[1][x] = phi[x];
      R[2][x] = delta.neg_index(delta.add_index(x, phi[x]));
    }
    for (int split = 0; split < 2; ++split) {
      if (split && d % 2 == 0) continue;
      for (std::size_t alpha = 0; alpha < 3; ++alpha)
        for (std::size_t beta = alpha + 1; beta < 3; ++beta) {
          const std::size_t gamma = 3 - alpha - beta;
          const auto ra_inv = inverse(R[alpha]);
          // psi carries the column-0 set of row alpha onto that of row beta.
          Bijection psi(n);
          for (std::size_t u = 0; u < n; ++u) psi[u] = R[beta][ra_inv[u]];
          std::vector<std::size_t> class_of_u(n);
          for (std::size_t u = 0; u < n; ++u) class_of_u[u] = class_of[ra_inv[u]];
          std::vector<const Bijection*> gens;
          Bijection neg_psi;
          if (split) {
            neg_psi.resize(n);
            for (std::size_t u = 0; u < n; ++u) neg_psi[u] = neg[psi[u]];
            gens = {&neg_psi};
          } else {
            gens = {&psi, &neg};
          }
          const auto U = orbit_transversal(n, gens, class_of_u, t);
          if (!U) continue;

          std::optional<ZeroSumPartition> two;
          if (pieces > 0) {
            two = zero_sum_partition_with_anchors(delta, m, *U);
            if (!two) continue;
          }

          // Kotzig rows: three-row piece first, then the two-row pieces.
          // kas_rows[r][s] = block s of row r, column 0 first.
          std::vector<std::vector<std::vector<std::size_t>>> kas_rows(3, std::vector<std::vector<std::size_t>>(t));
          for (std::size_t s = 0; s < t; ++s) {
            std::vector<std::size_t> cols;
            std::size_t lead = 0;
            for (auto x : classes[s])
              if (std::binary_search(U->begin(), U->end(), R[alpha][x])) lead = x;
            cols.push_back(lead);
            for (auto x : classes[s])
              if (x != lead) cols.push_back(x);
            for (std::size_t r = 0; r < 3; ++r)
              for (auto x : cols) kas_rows[r][s].push_back(R[r][x]);
          }
          for (std::size_t q = 0; q < pieces; ++q) {
            std::vector<std::vector<std::size_t>> pos(t), negr(t);
            for (std::size_t s = 0; s < t; ++s)
              for (auto x : two->classes[s]) {
                pos[s].push_back(x);
                negr[s].push_back(delta.neg_index(x));
              }
            kas_rows.push_back(std::move(pos));
            kas_rows.push_back(std::move(negr));
          }

          // Z_p row -> Kotzig row.
          std::vector<std::size_t> row_of(static_cast<std::size_t>(p));
          row_of[0] = gamma;
          if (!split) {
            std::vector<std::size_t> rest = {alpha, beta};
            for (std::size_t r = 3; r < kas_rows.size(); ++r) rest.push_back(r);
            for (std::int64_t i = 1; i < p; ++i) row_of[static_cast<std::size_t>(i)] = rest[static_cast<std::size_t>(i - 1)];
          } else {
            std::size_t next_piece = 0;
            for (std::size_t o = 0; o < orbits.size(); o += 2) {
              const auto& A = orbits[o];
              const auto& B = orbits[o + 1];
              std::size_t k = 0;
              if (o == 0) {
                row_of[static_cast<std::size_t>(A[0])] = alpha;
                row_of[static_cast<std::size_t>(B[0])] = beta;
                k = 1;
              }
              for (; k < d; ++k, ++next_piece) {
                row_of[static_cast<std::size_t>(A[k])] = 3 + 2 * next_piece;
                row_of[static_cast<std::size_t>(B[k])] = 4 + 2 * next_piece;
              }
            }
          }

          const GroupSpec Zp({p});
          const PairTable pt(delta, Zp);
          RectangleSet out{pt.ds.group, static_cast<std::size_t>(p), m, t, {}, 0, 0,
                           {"kas-based:p=" + std::to_string(p) + ",m=" + std::to_string(m)}};
          for (std::size_t s = 0; s < t; ++s) {
            Array2 rect(static_cast<std::size_t>(p), std::vector<std::size_t>(m));
            for (std::int64_t i = 0; i < p; ++i)
              for (std::size_t j = 0; j < m; ++j) {
                const auto zp = static_cast<std::size_t>(j == 0 ? mod(mult * i, p) : i);
                rect[static_cast<std::size_t>(i)][j] = pt(kas_rows[row_of[static_cast<std::size_t>(i)]][s][j], zp);
              }
            out.rects.push_back(std::move(rect));
          }
          return verified(std::move(out), "mrs_kas_based");
        }
    }
  }
  return kas_paired(p, delta, m, cert0, classes, class_of);
}

RectangleSet mrs_kas_based(std::int64_t p, const GroupSpec& delta, std::size_t m, const search::Options& opt) {
  if (auto r = mrs_kas_direct(p, delta, m)) return *r;
  if (m > 4 && m % 4 == 0 && p != 3 && two_group_class_size(delta) == 4)
    return verified(mrs_glue_cols(mrs_kas_based(p, delta, 4, opt), m / 4), "mrs_kas_based");
  if (m == 4 && delta.order() > 8) {
    const auto emb = index4_subgroup(delta);
    auto base = two_group_class_size(emb.sub) == 4 ? mrs_kas_based(p, emb.sub, 4, opt) : RectangleSet{};
    if (base.rects.empty()) {
      const auto h = direct_sum(emb.sub, GroupSpec({p})).group;
      auto res = mrs_search(h, static_cast<std::size_t>(p), 4, emb.sub.order() / 4, opt);
      if (!res.witness)
        throw SearchBudgetError("mrs_kas_based: base search on " + h.to_string() + " ended with " +
                                search::to_string(res.status));
      base = std::move(*res.witness);
      base.provenance = {"kas-fallback-search"};
    }
    return verified(index4_step(base, emb, p, "kas-step"), "mrs_kas_based");
  }
  const auto g = direct_sum(delta, GroupSpec({p})).group;
  auto res = mrs_search(g, static_cast<std::size_t>(p), m, delta.order() / m, opt);
  if (!res.witness)
    throw SearchBudgetError("mrs_kas_based: fallback search on " + g.to_string() + " ended with " +
                            search::to_string(res.status));
  res.witness->provenance = {"kas-fallback-search"};
  return *res.witness;
}

// ---- pipelines -------------------------------------------------------------

namespace {

// Blows a base MRS(q, w; .) on Z_q + delta up to MRS(a, b; .) on g, where the
// odd part of g contains a cyclic q-power component.
RectangleSet blow_up(RectangleSet base, const GroupSpec& g, std::int64_t q, std::size_t a, std::size_t b) {
  const auto A = g.odd_part();
  std::size_t big = A.rank();
  for (std::size_t i = 0; i < A.rank(); ++i)
    if (A.components()[i] % q == 0) {
      big = i;  // canonical order puts the largest q-power first
      break;
    }
  if (big == A.rank()) throw PreconditionError("blow_up: q does not divide the odd part");
  const std::int64_t qe = A.components()[big];
  if (qe > q) base = mrs_lift_cyclic(base, qe, qe / q, odd_component_slot(base.group, q));
  std::vector<std::int64_t> rest;
  for (std::size_t i = 0; i < A.rank(); ++i)
    if (i != big) rest.push_back(A.components()[i]);
  base = mrs_lift_product(base, GroupSpec(rest));
  if (!(base.group == g)) throw VerificationError("blow_up landed on " + base.group.to_string() + " instead of " + g.to_string());
  if (a % base.a != 0 || b % base.b != 0) throw PreconditionError("blow_up: target shape not a multiple of the base");
  base = mrs_glue_rows(base, a / base.a);
  base = mrs_glue_cols(base, b / base.b);
  return base;
}

std::int64_t smallest_prime(std::size_t x) { return static_cast<std::int64_t>(prime_factors(x).front()); }

bool is_z4_z2(const GroupSpec& d) { return d.components() == std::vector<std::int64_t>{4, 2}; }

RectangleSet search_or_throw(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c,
                             const search::Options& opt, const std::string& tag) {
  auto res = mrs_search(g, a, b, c, opt);
  if (!res.witness)
    throw SearchBudgetError("search for MRS(" + std::to_string(a) + "," + std::to_string(b) + ";" + std::to_string(c) +
                            ") on " + g.to_string() + " ended with " + search::to_string(res.status));
  res.witness->provenance = {tag};
  return *res.witness;
}

// 2x2 blocks [[x, z-x], [z-w-x, x+w]] over the orbits of x -> x+w and
// x -> z-x, where w is an involution and z, z+w lie outside 2G: every orbit
// has four elements, each block has row sums z and column sums z-w.
RectangleSet even_quad(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c) {
  const auto& comps = g.components();
  GroupElement w, z;
  if (comps.empty() || comps[0] % 2 != 0) throw PreconditionError("even_quad: group order is odd");
  if (comps[0] >= 4) {
    w = g.scalar_mul(comps[0] / 2, g.basis(0));
    z = g.basis(0);
  } else {
    if (comps.size() < 2 || comps[1] != 2) throw PreconditionError("even_quad: 4 does not divide |G|");
    w = g.basis(0);
    z = g.basis(1);
  }
  const auto wi = g.index_of(w), zi = g.index_of(z);
  const auto n = g.order();
  std::vector<char> seen(n, 0);
  std::vector<std::array<std::size_t, 4>> blocks;
  for (std::size_t x = 0; x < n; ++x) {
    if (seen[x]) continue;
    const std::array<std::size_t, 4> q = {x, g.sub_index(zi, x), g.sub_index(g.sub_index(zi, wi), x), g.add_index(x, wi)};
    for (auto y : q) {
      if (seen[y]) throw VerificationError("even_quad: orbit of size < 4");
      seen[y] = 1;
    }
    blocks.push_back(q);
  }
  RectangleSet out{g, a, b, c, {}, g.mul_index(static_cast<std::int64_t>(b / 2), zi),
                   g.mul_index(static_cast<std::int64_t>(a / 2), g.sub_index(zi, wi)), {"even-quad"}};
  std::size_t next = 0;
  for (std::size_t s = 0; s < c; ++s) {
    Array2 rect(a, std::vector<std::size_t>(b));
    for (std::size_t bi = 0; bi < a / 2; ++bi)
      for (std::size_t bj = 0; bj < b / 2; ++bj) {
        const auto& q = blocks[next++];
        rect[2 * bi][2 * bj] = q[0];
        rect[2 * bi][2 * bj + 1] = q[1];
        rect[2 * bi + 1][2 * bj] = q[2];
        rect[2 * bi + 1][2 * bj + 1] = q[3];
      }
    out.rects.push_back(std::move(rect));
  }
  return out;
}

// a, b odd and g in G: split off the largest direct summand H in G with
// |H| dividing c whose complement is still in G, search a base on the
// complement and lift.
// g = A + B with |B| = b, |A| = a c and b A = 0: row i of rectangle s is
// (alpha, K[i][.]) for the i-th element alpha of a zero-sum class of A and a
// B-Kotzig array K.
std::optional<RectangleSet> row_coset(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c) {
  const auto& comps = g.components();
  const std::size_t r = comps.size();
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << r); ++mask) {
    std::vector<std::int64_t> bc, ac;
    for (std::size_t i = 0; i < r; ++i) (mask >> i & 1 ? bc : ac).push_back(comps[i]);
    const GroupSpec B(bc), A(ac);
    if (B.order() != b || A.order() != a * c || b % A.exponent() != 0) continue;
    if (!admits_complete_mapping(B) || !admits_complete_mapping(A)) continue;
    if (c > 1 && a < 3) continue;
    const auto K = kotzig_array(B, a).arrays[0];
    std::vector<std::vector<std::size_t>> classes;
    if (c == 1) {
      classes.emplace_back(A.order());
      std::iota(classes[0].begin(), classes[0].end(), std::size_t{0});
    } else {
      classes = zero_sum_partition(A, a).classes;
    }
    const PairTable pt(A, B);
    if (!(pt.ds.group == g)) continue;
    RectangleSet out{g, a, b, c, {}, pt(0, 0), pt(0, 0), {"row-coset:A=" + A.to_string()}};
    for (const auto& cls : classes) {
      Array2 rect(a, std::vector<std::size_t>(b));
      for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j) rect[i][j] = pt(cls[i], K[i][j]);
      out.rects.push_back(std::move(rect));
    }
    return verified(std::move(out), "row_coset");
  }
  return std::nullopt;
}

// p x p on Z_{p^2}: p ((i + j) mod p) + ((i + 2j) mod p).
RectangleSet square_pp(const GroupSpec& g, std::int64_t p) {
  const auto one = g.index_of(g.basis(0));
  const auto half = p * (p - 1) / 2;
  RectangleSet out{g, static_cast<std::size_t>(p), static_cast<std::size_t>(p), 1, {},
                   g.mul_index(half, one), g.mul_index(half, one), {"square:p=" + std::to_string(p)}};
  Array2 rect(out.a, std::vector<std::size_t>(out.b));
  for (std::int64_t i = 0; i < p; ++i)
    for (std::int64_t j = 0; j < p; ++j)
      rect[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g.mul_index(p * ((i + j) % p) + (i + 2 * j) % p, one);
  out.rects.push_back(std::move(rect));
  return verified(std::move(out), "square_pp");
}

// a x b on Z_a + Z_b for primes b < a: cell (eps_j i, eta_i j) with
// eta_i = +-1 summing to b, eps_j = eps_{-j} = 1 for j != 0 and
// eps_0 = -(b - 1).
RectangleSet multiplier(std::int64_t a, std::int64_t b) {
  const GroupSpec A({a}), B({b});
  const PairTable pt(A, B);
  const auto ia = A.index_of(A.basis(0)), ib = B.index_of(B.basis(0));
  std::vector<std::int64_t> eps(static_cast<std::size_t>(b), 1), eta(static_cast<std::size_t>(a), -1);
  eps[0] = mod(-(b - 1), a);
  for (std::int64_t i = 0; i < (a + b) / 2; ++i) eta[static_cast<std::size_t>(i)] = 1;
  RectangleSet out{pt.ds.group, static_cast<std::size_t>(a), static_cast<std::size_t>(b), 1, {}, pt(0, 0), pt(0, 0),
                   {"multiplier:" + std::to_string(a) + "x" + std::to_string(b)}};
  Array2 rect(out.a, std::vector<std::size_t>(out.b));
  for (std::int64_t i = 0; i < a; ++i)
    for (std::int64_t j = 0; j < b; ++j)
      rect[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          pt(A.mul_index(eps[static_cast<std::size_t>(j)] * i, ia), B.mul_index(eta[static_cast<std::size_t>(i)] * j, ib));
  out.rects.push_back(std::move(rect));
  return verified(std::move(out), "multiplier");
}

// Odd order: peel a prime off c by a cyclic lift, off a composite side by
// gluing, and finish on prime sides directly.
RectangleSet odd_rec(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c) {
  if (auto r = row_coset(g, a, b, c)) return *r;
  if (auto r = row_coset(g, b, a, c)) return mrs_transpose(*r);
  const auto& comps = g.components();
  if (c > 1) {
    const auto p = smallest_prime(c);
    std::size_t k = 0;
    while (comps[k] % p != 0) ++k;
    const auto q = comps[k];
    std::vector<std::int64_t> reduced;
    for (std::size_t i = 0; i < comps.size(); ++i)
      if (i != k) reduced.push_back(comps[i]);
    if (q > p) reduced.push_back(q / p);
    const GroupSpec g0(reduced);
    const auto base = odd_rec(g0, a, b, c / static_cast<std::size_t>(p));
    const auto slot = q > p ? std::optional<std::size_t>(odd_component_slot(g0, q / p)) : std::nullopt;
    auto out = mrs_lift_cyclic(base, q, p, slot);
    if (!(out.group == g)) throw VerificationError("odd_rec: lift landed on " + out.group.to_string());
    return out;
  }
  if (!is_prime(a)) {
    const auto p = static_cast<std::size_t>(smallest_prime(a));
    return mrs_glue_rows(odd_rec(g, a / p, b, p), p);
  }
  if (!is_prime(b)) {
    const auto p = static_cast<std::size_t>(smallest_prime(b));
    return mrs_glue_cols(odd_rec(g, a, b / p, p), p);
  }
  if (a == b && comps.size() == 1) return square_pp(g, static_cast<std::int64_t>(a));
  if (a < b) return mrs_transpose(odd_rec(g, b, a, c));
  auto out = multiplier(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b));
  if (!(out.group == g)) throw VerificationError("odd_rec: no prime-side construction for " + g.to_string());
  return out;
}

// MRS(3, |delta|; 1) on Z3 + delta: rows id, phi, psi with
// x + phi(x) + psi(x) = d for a complete mapping phi; symbol y sits at Z3
// height s_y i in row i, where s = -1 on a union N of cycles of
// psi phi^-1 and 3 divides |delta| - 2 |N|.
std::optional<RectangleSet> three_rows(const GroupSpec& g) {
  const auto delta = g.sylow2();
  if (!(g.odd_part() == GroupSpec({3}))) return std::nullopt;
  const auto n = delta.order();
  const PairTable pt(GroupSpec({3}), delta);
  if (!(pt.ds.group == g)) return std::nullopt;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto cm = search_complete_mapping(delta, 1'000'000, seed);
    if (!cm) continue;
    const auto& phi = cm->table;
    for (std::size_t d = 0; d < n; ++d) {
      std::vector<std::size_t> psi(n), inv_phi(n);
      std::vector<char> hit(n, 0);
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x) {
        psi[x] = delta.sub_index(d, delta.add_index(x, phi[x]));
        inv_phi[phi[x]] = x;
        ok = !hit[psi[x]];
        hit[psi[x]] = 1;
      }
      if (!ok) continue;
      std::vector<std::vector<std::size_t>> cycles;
      std::vector<char> seen(n, 0);
      for (std::size_t y = 0; y < n; ++y) {
        if (seen[y]) continue;
        cycles.emplace_back();
        for (auto z = y; !seen[z]; z = psi[inv_phi[z]]) {
          seen[z] = 1;
          cycles.back().push_back(z);
        }
      }
      // subset of cycles with total size = 2n mod 3
      const auto want = (2 * n) % 3;
      std::vector<std::optional<std::vector<std::size_t>>> reach(3);
      reach[0] = std::vector<std::size_t>{};
      for (std::size_t k = 0; k < cycles.size(); ++k) {
        auto next = reach;
        for (std::size_t r = 0; r < 3; ++r)
          if (reach[r] && !next[(r + cycles[k].size()) % 3]) {
            auto pick = *reach[r];
            pick.push_back(k);
            next[(r + cycles[k].size()) % 3] = pick;
          }
        reach = std::move(next);
      }
      if (!reach[want]) continue;
      std::vector<std::int64_t> sign(n, 1);
      for (auto k : *reach[want])
        for (auto y : cycles[k]) sign[y] = -1;
      RectangleSet out{g, 3, n, 1, {}, pt(0, delta.index_of(sum_all_elements(delta))), pt(0, d), {"three-rows"}};
      Array2 rect(3, std::vector<std::size_t>(n));
      for (std::size_t x = 0; x < n; ++x) {
        const std::size_t ys[3] = {x, phi[x], psi[x]};
        for (std::size_t i = 0; i < 3; ++i)
          rect[i][x] = pt(static_cast<std::size_t>(mod(sign[ys[i]] * static_cast<std::int64_t>(i), 3)), ys[i]);
      }
      out.rects.push_back(std::move(rect));
      return verified(std::move(out), "three_rows");
    }
  }
  return std::nullopt;
}

RectangleSet odd_base(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c, const search::Options& opt) {
  if (auto r = row_coset(g, a, b, c)) return *r;
  if (auto r = row_coset(g, b, a, c)) return mrs_transpose(*r);
  return search_or_throw(g, a, b, c, opt, "search");
}

RectangleSet odd_odd(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c, const search::Options& opt) {
  if (g.order() % 2 == 1) return verified(odd_rec(g, a, b, c), "odd_rec");
  const auto& comps = g.components();
  const std::size_t r = comps.size();
  std::vector<std::int64_t> best_h, best_rest = comps;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << r); ++mask) {
    std::vector<std::int64_t> hc, rc;
    std::uint64_t order_h = 1;
    for (std::size_t i = 0; i < r; ++i) {
      if (mask >> i & 1) {
        hc.push_back(comps[i]);
        order_h *= static_cast<std::uint64_t>(comps[i]);
      } else {
        rc.push_back(comps[i]);
      }
    }
    if (c % order_h != 0) continue;
    const GroupSpec H(hc), R(rc);
    if (!admits_complete_mapping(H) || !admits_complete_mapping(R)) continue;
    if (R.order() < GroupSpec(best_rest).order()) {
      best_h = hc;
      best_rest = rc;
    }
  }
  if (auto r = row_coset(g, a, b, c)) return *r;
  if (auto r = row_coset(g, b, a, c)) return mrs_transpose(*r);
  const GroupSpec H(best_h), R(best_rest);
  auto base = R.order() % 2 == 1 ? odd_rec(R, a, b, c / H.order()) : odd_base(R, a, b, c / H.order(), opt);
  auto out = mrs_lift_summand(base, H);
  if (!(out.group == g)) throw VerificationError("odd_odd landed on the wrong group");
  return out;
}

// MRS(q, m; |delta|/m) on Z_q + delta, one rectangle per zero-sum class C:
// row i is a permutation of C and symbol y sits at height a_y i for units
// a_y summing to 0. Rows are matched in two halves so that every column sums
// to zero. Only for small m!^(q/2).
std::optional<RectangleSet> class_rows(std::int64_t q, const GroupSpec& delta, std::size_t m,
                                       std::uint64_t limit = 1'000'000) {
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  const auto Q = static_cast<std::size_t>(q), h = Q / 2;
  std::uint64_t left_n = 1, right_n = 1;
  for (std::size_t i = 0; i < Q - h; ++i) {
    if (i < h) left_n *= perms.size();
    right_n *= perms.size();
    if (right_n > limit) return std::nullopt;
  }
  const auto nd = delta.order();
  const GroupSpec Zq({q});
  const PairTable pt(Zq, delta);
  const auto classes = zero_sum_partition(delta, m).classes;

  // column state of rows [lo, hi) under the combination code
  auto state = [&](const std::vector<std::size_t>& C, const std::vector<std::int64_t>& mult, std::uint64_t code,
                   std::size_t lo, std::size_t hi, bool negate) {
    std::vector<std::size_t> dv(m, 0);
    std::vector<std::int64_t> zv(m, 0);
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& p = perms[code % perms.size()];
      code /= perms.size();
      for (std::size_t j = 0; j < m; ++j) {
        dv[j] = delta.add_index(dv[j], C[p[j]]);
        zv[j] += mult[p[j]] * static_cast<std::int64_t>(i);
      }
    }
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < m; ++j)
      key = key * nd * Q + (negate ? delta.neg_index(dv[j]) : dv[j]) * Q +
            static_cast<std::size_t>(mod(negate ? -zv[j] : zv[j], q));
    return key;
  };

  RectangleSet out{pt.ds.group, Q, m, classes.size(), {}, pt(0, 0), pt(0, 0), {"class-rows:q=" + std::to_string(q)}};
  for (const auto& C : classes) {
    std::optional<Array2> found;
    std::vector<std::int64_t> mult(m, 1);
    // multipliers in lexicographic order with mult[0] = 1 and a zero sum
    std::function<void(std::size_t, std::int64_t)> choose = [&](std::size_t k, std::int64_t sum) {
      if (found) return;
      if (k + 1 == m) {
        mult[k] = mod(-sum, q);
        if (mult[k] == 0) return;
        std::unordered_map<std::uint64_t, std::uint64_t> left;
        for (std::uint64_t code = 0; code < left_n; ++code) left.emplace(state(C, mult, code, 0, h, false), code);
        for (std::uint64_t code = 0; code < right_n && !found; ++code) {
          const auto it = left.find(state(C, mult, code, h, Q, true));
          if (it == left.end()) continue;
          Array2 rect(Q, std::vector<std::size_t>(m));
          auto lc = it->second, rc = code;
          for (std::size_t i = 0; i < Q; ++i) {
            auto& c = i < h ? lc : rc;
            const auto& p = perms[c % perms.size()];
            c /= perms.size();
            for (std::size_t j = 0; j < m; ++j)
              rect[i][j] = pt(static_cast<std::size_t>(mod(mult[p[j]] * static_cast<std::int64_t>(i), q)), C[p[j]]);
          }
          found = std::move(rect);
        }
        return;
      }
      for (std::int64_t v = 1; v < q && !found; ++v) {
        if (k == 0 && v != 1) break;
        mult[k] = v;
        choose(k + 1, sum + v);
      }
    };
    choose(0, 0);
    if (!found) return std::nullopt;
    out.rects.push_back(std::move(*found));
  }
  return verified(std::move(out), "class_rows");
}

RectangleSet lem2p_base(std::int64_t q, const GroupSpec& delta, const search::Options& opt) {
  if (q == 3) return mrs_p3(delta, opt);
  if (is_z4_z2(delta)) {
    if (auto r = class_rows(q, delta, 4)) return *r;
    return search_or_throw(direct_sum(delta, GroupSpec({q})).group, static_cast<std::size_t>(q), 4, 2, opt, "main2-search");
  }
  return mrs_kas_based(q, delta, 4, opt);
}

}  // namespace

RectangleSet mrs_exp_variant(const GroupSpec& g, std::size_t k, const search::Options& opt) {
  const auto delta = g.sylow2();
  const auto A = g.odd_part();
  if (k <= 1) throw PreconditionError("mrs_exp_variant: k must be > 1");
  if (delta.even_component_count() < 2 || !delta.is_two_group())
    throw PreconditionError("mrs_exp_variant: the Sylow-2 part of " + g.to_string() + " must have two involutions");
  if (A.order() % k != 0) throw PreconditionError("mrs_exp_variant: k must divide the odd part");
  const std::size_t m = 2 * delta.exponent();
  if (g.order() % (k * m) != 0)
    throw PreconditionError("mrs_exp_variant: 2 k exp(delta) = " + std::to_string(k * m) + " does not divide |G|");
  std::optional<RectangleSet> base;
  std::int64_t q = 0;
  for (auto pf : prime_factors(k)) {
    q = static_cast<std::int64_t>(pf);
    if (q == 3 && m == 4) {
      base = mrs_p3(delta, opt);
    } else if (std::gcd(static_cast<std::int64_t>(m) - 1, q) == 1) {
      base = mrs_kas_based(q, delta, m, opt);
    }
    if (base) break;
  }
  if (!base) {
    q = smallest_prime(k);
    const auto zq = direct_sum(delta, GroupSpec({q})).group;
    if (zq.order() > 64)
      throw OutOfRangeError("mrs_exp_variant: no prime of k admits the Kotzig construction and " + zq.to_string() +
                            " is beyond desk-scale search");
    base = search_or_throw(zq, static_cast<std::size_t>(q), m, delta.order() / m, opt, "search");
  }
  return verified(blow_up(*base, g, q, k, m), "mrs_exp_variant");
}

RectangleSet mrs_construct(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c, const search::Options& opt) {
  const auto v = decide_existence(g, a, b, c);
  if (v.status == Existence::NotExists)
    throw InfeasibleError("no MRS(" + std::to_string(a) + "," + std::to_string(b) + ";" + std::to_string(c) + ") on " +
                          g.to_string() + " (" + v.rule + ")");
  if (v.status == Existence::Unknown)
    throw OutOfRangeError("existence of MRS(" + std::to_string(a) + "," + std::to_string(b) + ";" + std::to_string(c) +
                          ") on " + g.to_string() + " is open");
  if (a % 2 == 0 && b % 2 == 1) return mrs_transpose(mrs_construct(g, b, a, c, opt));

  RectangleSet out;
  if (a % 2 == 0) {
    out = even_quad(g, a, b, c);
  } else if (b % 2 == 1) {
    out = odd_odd(g, a, b, c, opt);
  } else if (v.rule == "ThmLem2p") {
    const auto q = smallest_prime(a);
    out = blow_up(lem2p_base(q, g.sylow2(), opt), g, q, a, b);
  } else if (v.rule == "ThmRectangle") {
    auto r = a == 3 ? three_rows(g) : std::nullopt;
    out = r ? *r : search_or_throw(g, a, b, c, opt, "search");
  } else {
    std::size_t two = 1, odd = b;
    while (odd % 2 == 0) {
      odd /= 2;
      two *= 2;
    }
    out = mrs_glue_cols(odd_odd(g, a, odd, c * two, opt), two);
  }
  return verified(std::move(out), "mrs_construct");
}

}  // namespace cmrs
