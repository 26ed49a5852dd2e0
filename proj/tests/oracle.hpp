#pragma once

// Naive reference implementations used to cross-check the library. They
// work on plain residue tuples and share no code with src/.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

using Tuple = std::vector<std::int64_t>;

inline std::vector<Tuple> all_tuples(const std::vector<std::int64_t>& mods) {
  std::vector<Tuple> out{{}};
  for (auto m : mods) {
    std::vector<Tuple> next;
    for (const auto& t : out)
      for (std::int64_t r = 0; r < m; ++r) {
        auto u = t;
        u.push_back(r);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

inline Tuple add(const std::vector<std::int64_t>& mods, const Tuple& x, const Tuple& y) {
  Tuple z(mods.size());
  for (std::size_t i = 0; i < mods.size(); ++i) z[i] = (x[i] + y[i]) % mods[i];
  return z;
}

inline Tuple total(const std::vector<std::int64_t>& mods) {
  Tuple acc(mods.size(), 0);
  for (const auto& t : all_tuples(mods)) acc = add(mods, acc, t);
  return acc;
}

inline std::size_t involutions(const std::vector<std::int64_t>& mods) {
  std::size_t n = 0;
  for (const auto& t : all_tuples(mods)) {
    bool zero = true, twice_zero = true;
    for (std::size_t i = 0; i < mods.size(); ++i) {
      zero = zero && t[i] == 0;
      twice_zero = twice_zero && (2 * t[i]) % mods[i] == 0;
    }
    if (!zero && twice_zero) ++n;
  }
  return n;
}

// Number of integer partitions of k.
inline std::uint64_t partitions(int k) {
  std::vector<std::uint64_t> p(static_cast<std::size_t>(k) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= k; ++part)
    for (int s = part; s <= k; ++s) p[static_cast<std::size_t>(s)] += p[static_cast<std::size_t>(s - part)];
  return p[static_cast<std::size_t>(k)];
}

// Number of Abelian groups of order n: product of p(e) over prime powers.
inline std::uint64_t abelian_count(std::uint64_t n) {
  std::uint64_t out = 1;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    out *= partitions(e);
  }
  return out;  // a leftover prime has exponent 1 and p(1) = 1
}

// Can the elements 0..n-1 of Z_2^k (n = 2^k, xor arithmetic) be split into
// pairs {x, y} with x + y = 0?
inline bool elementary_pairs_exist(int k) {
  const int n = 1 << k;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::function<bool()> go = [&]() -> bool {
    int x = 0;
    while (x < n && used[static_cast<std::size_t>(x)]) ++x;
    if (x == n) return true;
    used[static_cast<std::size_t>(x)] = 1;
    for (int y = x + 1; y < n; ++y)
      if (!used[static_cast<std::size_t>(y)] && (x ^ y) == 0) {
        used[static_cast<std::size_t>(y)] = 1;
        if (go()) return true;
        used[static_cast<std::size_t>(y)] = 0;
      }
    used[static_cast<std::size_t>(x)] = 0;
    return false;
  };
  return go();
}

// Exhaustive MRS existence by filling cells row-major with every unused
// element; only complete rows and columns are checked. No symmetry breaking.
inline bool mrs_exists(const std::vector<std::int64_t>& mods, std::size_t a, std::size_t b, std::size_t c) {
  const auto elems = all_tuples(mods);
  const std::size_t n = elems.size();
  std::map<Tuple, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[elems[i]] = i;
  std::vector<std::vector<std::size_t>> plus(n, std::vector<std::size_t>(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) plus[x][y] = index[add(mods, elems[x], elems[y])];
  std::vector<std::size_t> grid(n);
  std::vector<char> used(n, 0);
  long omega = -1, delta = -1;
  std::function<bool(std::size_t)> go = [&](std::size_t pos) -> bool {
    if (pos == n) return true;
    const std::size_t s = pos / (a * b), i = pos % (a * b) / b, j = pos % b;
    for (std::size_t v = 0; v < n; ++v) {
      if (used[v]) continue;
      grid[pos] = v;
      const long so = omega, sd = delta;
      bool ok = true;
      if (j == b - 1) {
        std::size_t acc = 0;
        for (std::size_t q = 0; q < b; ++q) acc = plus[acc][grid[(s * a + i) * b + q]];
        if (omega < 0) omega = static_cast<long>(acc);
        ok = static_cast<long>(acc) == omega;
      }
      if (ok && i == a - 1) {
        std::size_t acc = 0;
        for (std::size_t q = 0; q < a; ++q) acc = plus[acc][grid[(s * a + q) * b + j]];
        if (delta < 0) delta = static_cast<long>(acc);
        ok = static_cast<long>(acc) == delta;
      }
      if (ok) {
        used[v] = 1;
        if (go(pos + 1)) return true;
        used[v] = 0;
      }
      omega = so;
      delta = sd;
    }
    return false;
  };
  return go(0);
}

}  // namespace oracle
