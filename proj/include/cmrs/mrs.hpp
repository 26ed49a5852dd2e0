#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmrs/group.hpp"
#include "cmrs/kotzig.hpp"
#include "cmrs/search.hpp"

namespace cmrs {

/// c arrays a x b over `group` using every element once; every row sums to
/// omega and every column to delta. Entries and sums are element indices.
struct RectangleSet {
  GroupSpec group;
  std::size_t a = 0, b = 0, c = 0;
  std::vector<Array2> rects;
  std::size_t omega = 0;
  std::size_t delta = 0;
  std::vector<std::string> provenance;
};

std::optional<std::string> check_mrs(const RectangleSet& r);
inline bool verify_mrs(const RectangleSet& r) { return !check_mrs(r).has_value(); }

// ---- existence ------------------------------------------------------------

enum class Existence { Exists, NotExists, Unknown };
std::string to_string(Existence e);

struct Verdict {
  Existence status = Existence::Unknown;
  std::string rule;  // ThmMain, ThmRectangle, ObsDwa, ObsCodd, ThmLem2p, Unknown
  std::optional<RectangleSet> witness;
};

Verdict decide_existence(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c);

// ---- search ---------------------------------------------------------------

struct MrsSearchResult {
  search::Status status = search::Status::Infeasible;
  std::optional<RectangleSet> witness;
  std::uint64_t nodes = 0;
  std::vector<std::size_t> trace;
};

/// Exhaustive (up to symmetry) search. Infeasible means no rectangle set of
/// this shape exists on g.
MrsSearchResult mrs_search(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c,
                           const search::Options& opt = {});

/// The search problem behind mrs_search. Cells are filled rectangle by
/// rectangle in staircase order (row k, then column k); the last cell of a
/// row or column is forced once omega or delta is known. Symmetry breaking:
/// each rectangle's corner holds its smallest element (and the smallest
/// element not used by earlier rectangles), first row and first column
/// increasing.
class MrsProblem {
 public:
  using Witness = RectangleSet;

  MrsProblem(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c);

  bool complete() const { return filled_ == n_; }
  Witness witness() const;
  void candidates(std::vector<std::size_t>& out);
  void push(std::size_t v);
  void pop();

 private:
  struct Cell {
    std::size_t s, i, j;
  };
  bool admissible(const Cell& cell, std::size_t v) const;
  std::size_t& at(const Cell& cell) { return grid_[(cell.s * a_ + cell.i) * b_ + cell.j]; }
  std::size_t at(const Cell& cell) const { return grid_[(cell.s * a_ + cell.i) * b_ + cell.j]; }

  GroupSpec g_;
  std::size_t n_, a_, b_, c_;
  std::size_t total_;  // sum of all elements
  std::vector<Cell> order_;
  std::vector<std::size_t> grid_;
  std::vector<std::size_t> row_sum_, col_sum_;      // per (s, i) and (s, j)
  std::vector<std::size_t> row_left_, col_left_;    // empty cells remaining
  std::vector<char> used_;
  std::size_t filled_ = 0;
  std::optional<std::size_t> omega_, delta_;
  std::vector<char> set_omega_, set_delta_;  // per depth: did this push define the constant
};

// ---- structural operations --------------------------------------------------

RectangleSet mrs_transpose(const RectangleSet& r);
/// Stacks consecutive groups of f rectangles vertically (a -> a f).
RectangleSet mrs_glue_rows(const RectangleSet& r, std::size_t f);
/// Places consecutive groups of f rectangles side by side (b -> b f).
RectangleSet mrs_glue_cols(const RectangleSet& r, std::size_t f);

/// Base on G0, h of odd order: MRS on G0 + h with c |h| rectangles, cell
/// (base, (-1)^j K[i][u]) for an h-Kotzig array K. Needs b even.
RectangleSet mrs_lift_product(const RectangleSet& base, const GroupSpec& h);

/// Base on A + Z_{q/h} (component `slot` of base.group has order q/h, or
/// slot = nullopt when q = h and the cyclic part is absent): MRS on A + Z_q
/// with c h rectangles, embedding r -> h r and adding (-1)^j K[i][u] for a
/// centered integer Kotzig array K (a x h). Odd b uses the transposed
/// pattern, and when both sides are odd a 3 x 3 Latin core of a 3 x h array.
RectangleSet mrs_lift_cyclic(const RectangleSet& base, std::int64_t q, std::int64_t h,
                             std::optional<std::size_t> slot);

/// Lifts by a direct summand h in the class G for any a, b >= 2 using a
/// matrix of bijections of h with zero row and column sums. Used where the
/// rectangles have an odd side.
RectangleSet mrs_lift_summand(const RectangleSet& base, const GroupSpec& h);

/// MRS(3, 4; |delta|/4) on Z3 + delta for a 2-group delta in G with
/// exp(delta) <= 4.
RectangleSet mrs_p3(const GroupSpec& delta, const search::Options& opt = {});

/// MRS(p, m; |delta|/m) on Z_p + delta from a Kotzig array set, with the
/// first column's Z_p part twisted by f(x) = -(m-1)x. Falls back to search
/// when no admissible column-0 arrangement exists.
RectangleSet mrs_kas_based(std::int64_t p, const GroupSpec& delta, std::size_t m,
                           const search::Options& opt = {});

/// Without the search fallback: nullopt when no admissible arrangement exists.
std::optional<RectangleSet> mrs_kas_direct(std::int64_t p, const GroupSpec& delta, std::size_t m);

/// MRS(k, 2 exp(delta); |g| / (2 k exp(delta))) where delta is the Sylow-2
/// part of g and k > 1 divides the odd part.
RectangleSet mrs_exp_variant(const GroupSpec& g, std::size_t k, const search::Options& opt = {});

/// Dispatches on the existence verdict; every output is verified.
RectangleSet mrs_construct(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c,
                           const search::Options& opt = {});

}  // namespace cmrs
