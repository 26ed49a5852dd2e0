#include "cmrs/kotzig.hpp"

#include <algorithm>
#include <numeric>

#include "cmrs/errors.hpp"

namespace cmrs {

namespace {

std::string array_locus(std::size_t s) { return "arrays[" + std::to_string(s) + "]"; }

void require_in_g(const GroupSpec& g) {
  if (!admits_complete_mapping(g))
    throw InfeasibleError(g.to_string() + " is not in the class G (exactly one involution)");
}

std::optional<std::string> check_shape_and_rows(const KotzigArraySet& s) {
  const auto n = s.group.order();
  if (s.j < 2) return std::string("j: must be at least 2");
  if (s.m == 0 || s.arrays.size() * s.m != n)
    return "arrays: " + std::to_string(s.arrays.size()) + " arrays of width " + std::to_string(s.m) +
           " do not cover |G| = " + std::to_string(n);
  for (std::size_t t = 0; t < s.arrays.size(); ++t) {
    if (s.arrays[t].size() != s.j) return array_locus(t) + ": wrong number of rows";
    for (std::size_t i = 0; i < s.j; ++i) {
      if (s.arrays[t][i].size() != s.m) return array_locus(t) + "[" + std::to_string(i) + "]: wrong width";
      for (auto x : s.arrays[t][i])
        if (x >= n) return array_locus(t) + "[" + std::to_string(i) + "]: element index out of range";
    }
  }
  for (std::size_t i = 0; i < s.j; ++i) {
    std::vector<char> seen(n, 0);
    for (std::size_t t = 0; t < s.arrays.size(); ++t)
      for (auto x : s.arrays[t][i]) {
        if (seen[x]) return "row " + std::to_string(i) + ": element " + std::to_string(x) + " repeated across arrays";
        seen[x] = 1;
      }
  }
  for (std::size_t t = 0; t < s.arrays.size(); ++t)
    for (std::size_t col = 0; col < s.m; ++col) {
      std::size_t acc = 0;
      for (std::size_t i = 0; i < s.j; ++i) acc = s.group.add_index(acc, s.arrays[t][i][col]);
      if (acc != 0) return array_locus(t) + ": column " + std::to_string(col) + " does not sum to 0";
    }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_kotzig_array(const KotzigArraySet& s) { return check_shape_and_rows(s); }

std::optional<std::string> check_kas(const KotzigArraySet& s) {
  if (auto err = check_shape_and_rows(s)) return err;
  for (std::size_t t = 0; t < s.arrays.size(); ++t)
    for (std::size_t i = 0; i < s.j; ++i)
      if (s.group.sum_indices(s.arrays[t][i]) != 0)
        return array_locus(t) + ": row " + std::to_string(i) + " does not sum to 0";
  return std::nullopt;
}

KotzigArraySet kas_two_rows(const GroupSpec& g, std::size_t m) {
  require_in_g(g);
  const auto p = zero_sum_partition(g, m);
  KotzigArraySet s{g, 2, m, {}};
  for (const auto& cls : p.classes) {
    Array2 arr(2);
    for (auto x : cls) {
      arr[0].push_back(x);
      arr[1].push_back(g.neg_index(x));
    }
    s.arrays.push_back(std::move(arr));
  }
  return s;
}

KotzigArraySet kas_three_rows(const CmPartitionCertificate& cert) {
  const auto& g = cert.group();
  KotzigArraySet s{g, 3, cert.m(), {}};
  for (const auto& cls : cert.partition.classes) {
    Array2 arr(3);
    for (auto x : cls) {
      const auto y = cert.mapping.table[x];
      arr[0].push_back(x);
      arr[1].push_back(y);
      arr[2].push_back(g.neg_index(g.add_index(x, y)));
    }
    s.arrays.push_back(std::move(arr));
  }
  return s;
}

KotzigArraySet kas_three_rows(const GroupSpec& g) {
  require_in_g(g);
  if (!g.is_two_group())
    throw OutOfRangeError("three-row Kotzig array sets are constructed for 2-groups only, got " + g.to_string());
  return kas_three_rows(cm_two_group(g));
}

KotzigArraySet kas_row_glue(const KotzigArraySet& top, const KotzigArraySet& bottom) {
  if (!(top.group == bottom.group) || top.m != bottom.m || top.arrays.size() != bottom.arrays.size())
    throw PreconditionError("kas_row_glue: shapes differ");
  KotzigArraySet out = top;
  out.j += bottom.j;
  for (std::size_t t = 0; t < out.arrays.size(); ++t)
    out.arrays[t].insert(out.arrays[t].end(), bottom.arrays[t].begin(), bottom.arrays[t].end());
  return out;
}

KotzigArraySet kas_column_glue(const KotzigArraySet& s, std::size_t b) {
  if (b == 0 || s.arrays.size() % b != 0)
    throw PreconditionError("kas_column_glue: " + std::to_string(b) + " does not divide the number of arrays " +
                            std::to_string(s.arrays.size()));
  KotzigArraySet out{s.group, s.j, s.m * b, {}};
  for (std::size_t t = 0; t < s.arrays.size(); t += b) {
    Array2 arr(s.j);
    for (std::size_t u = t; u < t + b; ++u)
      for (std::size_t i = 0; i < s.j; ++i)
        arr[i].insert(arr[i].end(), s.arrays[u][i].begin(), s.arrays[u][i].end());
    out.arrays.push_back(std::move(arr));
  }
  return out;
}

KotzigArraySet kas(const GroupSpec& g, std::size_t j, std::size_t m) {
  if (j < 2) throw PreconditionError("kas: j must be > 1");
  require_in_g(g);
  if (m <= 1 || g.order() % m != 0) throw PreconditionError("kas: m must be > 1 and divide |G|");
  KotzigArraySet out;
  std::size_t pairs = j / 2;
  if (j % 2 == 1) {
    if (!g.is_two_group())
      throw OutOfRangeError("kas: odd j is only constructed for 2-groups, got " + g.to_string());
    const auto m0 = two_group_class_size(g);
    if (m % m0 != 0)
      throw PreconditionError("kas: for odd j, m must be a multiple of " + std::to_string(m0));
    out = kas_column_glue(kas_three_rows(g), m / m0);
    pairs = (j - 3) / 2;
    if (pairs > 0) {
      const auto two = kas_two_rows(g, m);
      for (std::size_t p = 0; p < pairs; ++p) out = kas_row_glue(out, two);
    }
  } else {
    const auto two = kas_two_rows(g, m);
    out = two;
    for (std::size_t p = 1; p < pairs; ++p) out = kas_row_glue(out, two);
  }
  if (auto err = check_kas(out)) throw VerificationError("kas(" + g.to_string() + "): " + *err);
  return out;
}

KotzigArraySet kotzig_array(const GroupSpec& g, std::size_t j) {
  if (j < 2) throw PreconditionError("kotzig_array: j must be > 1");
  const auto n = g.order();
  KotzigArraySet out{g, j, n, {Array2(j)}};
  auto& arr = out.arrays[0];
  std::size_t row = 0;
  if (j % 2 == 1) {
    require_in_g(g);
    const auto cert = cm_zero_sum_partition(g);
    for (std::size_t x = 0; x < n; ++x) {
      const auto y = cert.mapping.table[x];
      arr[0].push_back(x);
      arr[1].push_back(y);
      arr[2].push_back(g.neg_index(g.add_index(x, y)));
    }
    row = 3;
  }
  for (; row < j; row += 2)
    for (std::size_t x = 0; x < n; ++x) {
      arr[row].push_back(x);
      arr[row + 1].push_back(g.neg_index(x));
    }
  if (auto err = check_kotzig_array(out)) throw VerificationError("kotzig_array: " + *err);
  return out;
}

IntKotzigArray int_kotzig(std::size_t j, std::size_t k, bool centered) {
  if (j < 2 || k < 1) throw PreconditionError("int_kotzig: need j > 1 and k >= 1");
  if ((j * (k - 1)) % 2 != 0)
    throw PreconditionError("int_kotzig: j(k-1) = " + std::to_string(j * (k - 1)) + " is odd");
  if (centered && k % 2 == 0) throw PreconditionError("int_kotzig: centered arrays need odd k");
  const auto K = static_cast<std::int64_t>(k);
  // Build 0-based rows (permutations of 0..k-1) with column sums j(k-1)/2.
  std::vector<std::vector<std::int64_t>> rows;
  if (centered && j == k) {
    for (std::int64_t i = 0; i < K; ++i) {
      std::vector<std::int64_t> r(k);
      for (std::int64_t c = 0; c < K; ++c) r[static_cast<std::size_t>(c)] = (c + i) % K;
      rows.push_back(std::move(r));
    }
  } else {
    std::size_t remaining = j;
    if (j % 2 == 1) {
      const std::int64_t half = (K - 1) / 2;
      std::vector<std::int64_t> r1(k), r2(k), r3(k);
      for (std::int64_t c = 0; c < K; ++c) {
        r1[static_cast<std::size_t>(c)] = c;
        r2[static_cast<std::size_t>(c)] = (c + half) % K;
        r3[static_cast<std::size_t>(c)] = 3 * half - r1[static_cast<std::size_t>(c)] - r2[static_cast<std::size_t>(c)];
      }
      rows.push_back(std::move(r1));
      rows.push_back(std::move(r2));
      rows.push_back(std::move(r3));
      remaining -= 3;
    }
    for (; remaining > 0; remaining -= 2) {
      std::vector<std::int64_t> up(k), down(k);
      for (std::int64_t c = 0; c < K; ++c) {
        up[static_cast<std::size_t>(c)] = c;
        down[static_cast<std::size_t>(c)] = K - 1 - c;
      }
      rows.push_back(std::move(up));
      rows.push_back(std::move(down));
    }
  }
  const std::int64_t shift = centered ? -(K - 1) / 2 : 1;
  IntKotzigArray out{j, k, centered, {}};
  for (auto& r : rows) {
    for (auto& v : r) v += shift;
    out.entries.push_back(std::move(r));
  }
  if (auto err = check_int_kotzig(out)) throw VerificationError("int_kotzig: " + *err);
  return out;
}

std::optional<std::string> check_int_kotzig(const IntKotzigArray& a) {
  if (a.entries.size() != a.j || a.j < 2) return std::string("entries: wrong number of rows");
  const auto K = static_cast<std::int64_t>(a.k);
  if (a.centered && a.k % 2 == 0) return std::string("centered: k must be odd");
  const std::int64_t lo = a.centered ? -(K - 1) / 2 : 1;
  for (std::size_t i = 0; i < a.j; ++i) {
    if (a.entries[i].size() != a.k) return "entries[" + std::to_string(i) + "]: wrong width";
    std::vector<char> seen(a.k, 0);
    for (auto v : a.entries[i]) {
      if (v < lo || v >= lo + K || seen[static_cast<std::size_t>(v - lo)])
        return "entries[" + std::to_string(i) + "]: not a permutation";
      seen[static_cast<std::size_t>(v - lo)] = 1;
    }
  }
  const std::int64_t target = a.centered ? 0 : static_cast<std::int64_t>(a.j) * (K + 1) / 2;
  if (!a.centered && (static_cast<std::int64_t>(a.j) * (K + 1)) % 2 != 0) return std::string("column sums cannot be constant");
  for (std::size_t c = 0; c < a.k; ++c) {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < a.j; ++i) sum += a.entries[i][c];
    if (sum != target) return "column " + std::to_string(c) + ": sum " + std::to_string(sum) + " != " + std::to_string(target);
  }
  return std::nullopt;
}

}  // namespace cmrs
