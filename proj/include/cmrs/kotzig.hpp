#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmrs/complete_mapping.hpp"
#include "cmrs/group.hpp"

namespace cmrs {

using Array2 = std::vector<std::vector<std::size_t>>;  // [row][col] element indices

/// t = |G|/m arrays of shape j x m. Row i, read across all arrays, is a
/// permutation of G; every row and column of every array sums to 0.
struct KotzigArraySet {
  GroupSpec group;
  std::size_t j = 0;
  std::size_t m = 0;
  std::vector<Array2> arrays;
};

/// j x k integer array whose rows are permutations of {1..k} (or of
/// {-(k-1)/2..(k-1)/2} when centered) with constant column sums.
struct IntKotzigArray {
  std::size_t j = 0;
  std::size_t k = 0;
  bool centered = false;
  std::vector<std::vector<std::int64_t>> entries;
};

KotzigArraySet kas_two_rows(const GroupSpec& g, std::size_t m);
KotzigArraySet kas_three_rows(const GroupSpec& g);
/// Rows g, phi(g), -g-phi(g) over the classes of a certificate.
KotzigArraySet kas_three_rows(const CmPartitionCertificate& cert);

/// Even j: j/2 two-row sets, any g in the class G and any m | |g| (m > 2).
/// Odd j: g a 2-group in G and m a multiple of two_group_class_size(g);
/// the three-row set comes first, then the two-row sets.
KotzigArraySet kas(const GroupSpec& g, std::size_t j, std::size_t m);

/// Stacks the arrays of `top` over those of `bottom` (same group, m, count).
KotzigArraySet kas_row_glue(const KotzigArraySet& top, const KotzigArraySet& bottom);
/// Concatenates consecutive groups of b arrays side by side.
KotzigArraySet kas_column_glue(const KotzigArraySet& s, std::size_t b);

/// A single j x |g| Kotzig array (t = 1, no block sums required beyond the
/// columns): rows g, -g for even j; odd j also uses a complete mapping.
KotzigArraySet kotzig_array(const GroupSpec& g, std::size_t j);

IntKotzigArray int_kotzig(std::size_t j, std::size_t k, bool centered = false);

std::optional<std::string> check_kas(const KotzigArraySet& s);
inline bool verify_kas(const KotzigArraySet& s) { return !check_kas(s).has_value(); }

/// Like check_kas but without the per-array row-sum requirement (a plain
/// Kotzig array split into column blocks).
std::optional<std::string> check_kotzig_array(const KotzigArraySet& s);

std::optional<std::string> check_int_kotzig(const IntKotzigArray& a);
inline bool verify_int_kotzig(const IntKotzigArray& a) { return !check_int_kotzig(a).has_value(); }

}  // namespace cmrs
