#include <algorithm>

#include "cmrs/errors.hpp"
#include "cmrs/mrs.hpp"

namespace cmrs {

namespace {

std::string rect_locus(std::size_t s) { return "rects[" + std::to_string(s) + "]"; }

}  // namespace

std::optional<std::string> check_mrs(const RectangleSet& r) {
  const auto& g = r.group;
  const auto n = g.order();
  if (r.a == 0 || r.b == 0 || r.a * r.b * r.c != n)
    return "shape: " + std::to_string(r.a) + "x" + std::to_string(r.b) + "x" + std::to_string(r.c) +
           " does not match |G| = " + std::to_string(n);
  if (r.rects.size() != r.c) return "rects: expected " + std::to_string(r.c) + " rectangles";
  if (r.omega >= n || r.delta >= n) return std::string("omega/delta: index out of range");
  std::vector<char> seen(n, 0);
  for (std::size_t s = 0; s < r.c; ++s) {
    const auto& rect = r.rects[s];
    if (rect.size() != r.a) return rect_locus(s) + ": wrong number of rows";
    for (std::size_t i = 0; i < r.a; ++i) {
      if (rect[i].size() != r.b) return rect_locus(s) + "[" + std::to_string(i) + "]: wrong width";
      for (auto x : rect[i]) {
        if (x >= n) return rect_locus(s) + "[" + std::to_string(i) + "]: element index out of range";
        if (seen[x]) return rect_locus(s) + "[" + std::to_string(i) + "]: element " + std::to_string(x) + " used twice";
        seen[x] = 1;
      }
    }
  }
  for (std::size_t s = 0; s < r.c; ++s) {
    const auto& rect = r.rects[s];
    for (std::size_t i = 0; i < r.a; ++i)
      if (g.sum_indices(rect[i]) != r.omega)
        return rect_locus(s) + "[" + std::to_string(i) + "]: row sum differs from omega";
    for (std::size_t j = 0; j < r.b; ++j) {
      std::size_t acc = 0;
      for (std::size_t i = 0; i < r.a; ++i) acc = g.add_index(acc, rect[i][j]);
      if (acc != r.delta) return rect_locus(s) + ": column " + std::to_string(j) + " sum differs from delta";
    }
  }
  return std::nullopt;
}

std::string to_string(Existence e) {
  switch (e) {
    case Existence::Exists: return "Exists";
    case Existence::NotExists: return "NotExists";
    case Existence::Unknown: return "Unknown";
  }
  return "?";
}

Verdict decide_existence(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c) {
  if (a < 2 || b < 2) throw PreconditionError("decide_existence: a and b must be at least 2");
  if (c < 1 || a * b * c != g.order())
    throw PreconditionError("decide_existence: a*b*c = " + std::to_string(a * b * c) + " but |G| = " +
                            std::to_string(g.order()));
  const bool in_g = admits_complete_mapping(g);
  auto verdict = [](Existence e, const char* rule) { return Verdict{e, rule, std::nullopt}; };
  if (a % 2 == 0 && b % 2 == 0) return verdict(Existence::Exists, "ThmMain");
  if (a % 2 == 1 && b % 2 == 1) return verdict(in_g ? Existence::Exists : Existence::NotExists, "ThmMain");
  const std::size_t even = a % 2 == 0 ? a : b;
  if (even == 2) return verdict(Existence::NotExists, "ObsDwa");
  if (!is_power_of_two(even)) return verdict(in_g ? Existence::Exists : Existence::NotExists, "ThmMain");
  if (!in_g) return verdict(Existence::NotExists, "ObsCodd");
  if (g.exponent() % 8 != 0) return verdict(Existence::Exists, "ThmLem2p");
  if (c == 1) return verdict(Existence::Exists, "ThmRectangle");
  return verdict(Existence::Unknown, "Unknown");
}

RectangleSet mrs_transpose(const RectangleSet& r) {
  RectangleSet out{r.group, r.b, r.a, r.c, {}, r.delta, r.omega, r.provenance};
  for (const auto& rect : r.rects) {
    Array2 t(r.b, std::vector<std::size_t>(r.a));
    for (std::size_t i = 0; i < r.a; ++i)
      for (std::size_t j = 0; j < r.b; ++j) t[j][i] = rect[i][j];
    out.rects.push_back(std::move(t));
  }
  out.provenance.push_back("transpose");
  return out;
}

RectangleSet mrs_glue_rows(const RectangleSet& r, std::size_t f) {
  if (f == 0 || r.c % f != 0)
    throw PreconditionError("mrs_glue_rows: " + std::to_string(f) + " does not divide c = " + std::to_string(r.c));
  if (f == 1) return r;
  RectangleSet out{r.group, r.a * f, r.b, r.c / f, {}, r.omega,
                   r.group.mul_index(static_cast<std::int64_t>(f), r.delta), r.provenance};
  for (std::size_t s = 0; s < r.c; s += f) {
    Array2 rect;
    for (std::size_t u = s; u < s + f; ++u) rect.insert(rect.end(), r.rects[u].begin(), r.rects[u].end());
    out.rects.push_back(std::move(rect));
  }
  out.provenance.push_back("glue-rows:" + std::to_string(f));
  return out;
}

RectangleSet mrs_glue_cols(const RectangleSet& r, std::size_t f) {
  if (f == 0 || r.c % f != 0)
    throw PreconditionError("mrs_glue_cols: " + std::to_string(f) + " does not divide c = " + std::to_string(r.c));
  if (f == 1) return r;
  RectangleSet out{r.group, r.a, r.b * f, r.c / f, {},
                   r.group.mul_index(static_cast<std::int64_t>(f), r.omega), r.delta, r.provenance};
  for (std::size_t s = 0; s < r.c; s += f) {
    Array2 rect(r.a);
    for (std::size_t u = s; u < s + f; ++u)
      for (std::size_t i = 0; i < r.a; ++i) rect[i].insert(rect[i].end(), r.rects[u][i].begin(), r.rects[u][i].end());
    out.rects.push_back(std::move(rect));
  }
  out.provenance.push_back("glue-cols:" + std::to_string(f));
  return out;
}

// ---- search ---------------------------------------------------------------

namespace {
constexpr std::size_t kEmpty = static_cast<std::size_t>(-1);
}

MrsProblem::MrsProblem(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c)
    : g_(g), n_(g.order()), a_(a), b_(b), c_(c), total_(0) {
  if (a < 1 || b < 1 || a * b * c != n_) throw PreconditionError("mrs search: shape does not match the group order");
  for (std::size_t x = 0; x < n_; ++x) total_ = g_.add_index(total_, x);
  for (std::size_t s = 0; s < c; ++s)
    for (std::size_t k = 0; k < std::max(a, b); ++k) {
      if (k < a)
        for (std::size_t j = k; j < b; ++j) order_.push_back({s, k, j});
      if (k < b)
        for (std::size_t i = k + 1; i < a; ++i) order_.push_back({s, i, k});
    }
  grid_.assign(n_, kEmpty);
  row_sum_.assign(c * a, 0);
  col_sum_.assign(c * b, 0);
  row_left_.assign(c * a, b);
  col_left_.assign(c * b, a);
  used_.assign(n_, 0);
}

MrsProblem::Witness MrsProblem::witness() const {
  RectangleSet r{g_, a_, b_, c_, {}, omega_.value_or(0), delta_.value_or(0), {"search"}};
  for (std::size_t s = 0; s < c_; ++s) {
    Array2 rect(a_, std::vector<std::size_t>(b_));
    for (std::size_t i = 0; i < a_; ++i)
      for (std::size_t j = 0; j < b_; ++j) rect[i][j] = grid_[(s * a_ + i) * b_ + j];
    r.rects.push_back(std::move(rect));
  }
  return r;
}

bool MrsProblem::admissible(const Cell& cell, std::size_t v) const {
  if (used_[v]) return false;
  if (cell.i == 0 && cell.j > 0 && v <= at({cell.s, 0, cell.j - 1})) return false;
  if (cell.j == 0 && cell.i > 0 && v <= at({cell.s, cell.i - 1, 0})) return false;

  const std::size_t r = cell.s * a_ + cell.i;
  const std::size_t col = cell.s * b_ + cell.j;
  const std::size_t rs = g_.add_index(row_sum_[r], v);
  const std::size_t cs = g_.add_index(col_sum_[col], v);
  const std::size_t rl = row_left_[r] - 1;
  const std::size_t cl = col_left_[col] - 1;

  std::optional<std::size_t> omega = omega_, delta = delta_;
  bool new_omega = false, new_delta = false;
  if (rl == 0) {
    if (omega) {
      if (rs != *omega) return false;
    } else {
      if (g_.mul_index(static_cast<std::int64_t>(c_ * a_), rs) != total_) return false;
      omega = rs;
      new_omega = true;
    }
  }
  if (cl == 0) {
    if (delta) {
      if (cs != *delta) return false;
    } else {
      if (g_.mul_index(static_cast<std::int64_t>(c_ * b_), cs) != total_) return false;
      delta = cs;
      new_delta = true;
    }
  }

  // Cells left with one option: (position, value). Equal positions must
  // agree, distinct positions must differ.
  std::vector<std::pair<std::size_t, std::size_t>> forced;
  auto open_in_row = [&](std::size_t i) {
    for (std::size_t j = 0; j < b_; ++j)
      if (!(i == cell.i && j == cell.j) && at({cell.s, i, j}) == kEmpty) return (cell.s * a_ + i) * b_ + j;
    return kEmpty;
  };
  auto open_in_col = [&](std::size_t j) {
    for (std::size_t i = 0; i < a_; ++i)
      if (!(i == cell.i && j == cell.j) && at({cell.s, i, j}) == kEmpty) return (cell.s * a_ + i) * b_ + j;
    return kEmpty;
  };
  if (rl == 1 && omega) {
    const auto need = g_.sub_index(*omega, rs);
    if (cell.i == 0 && need <= v) return false;
    forced.emplace_back(open_in_row(cell.i), need);
  }
  if (cl == 1 && delta) {
    const auto need = g_.sub_index(*delta, cs);
    if (cell.j == 0 && need <= v) return false;
    forced.emplace_back(open_in_col(cell.j), need);
  }
  // A constant defined right now may force open cells elsewhere in this rectangle.
  if (new_delta)
    for (std::size_t j = 0; j < b_; ++j)
      if (j != cell.j && col_left_[cell.s * b_ + j] == 1)
        forced.emplace_back(open_in_col(j), g_.sub_index(*delta, col_sum_[cell.s * b_ + j]));
  if (new_omega)
    for (std::size_t i = 0; i < a_; ++i)
      if (i != cell.i && row_left_[cell.s * a_ + i] == 1)
        forced.emplace_back(open_in_row(i), g_.sub_index(*omega, row_sum_[cell.s * a_ + i]));
  for (std::size_t x = 0; x < forced.size(); ++x) {
    const auto [pos, val] = forced[x];
    if (used_[val] || val == v) return false;
    for (std::size_t y = 0; y < x; ++y)
      if ((forced[y].first == pos) != (forced[y].second == val)) return false;
  }
  return true;
}

void MrsProblem::candidates(std::vector<std::size_t>& out) {
  out.clear();
  const Cell& cell = order_[filled_];
  if (cell.i == 0 && cell.j == 0) {
    for (std::size_t x = 0; x < n_; ++x)
      if (!used_[x]) {
        if (admissible(cell, x)) out.push_back(x);
        return;
      }
    return;
  }
  const std::size_t r = cell.s * a_ + cell.i;
  const std::size_t col = cell.s * b_ + cell.j;
  std::size_t forced = kEmpty;
  if (row_left_[r] == 1 && omega_) forced = g_.sub_index(*omega_, row_sum_[r]);
  if (col_left_[col] == 1 && delta_) {
    const auto fc = g_.sub_index(*delta_, col_sum_[col]);
    if (forced != kEmpty && forced != fc) return;
    forced = fc;
  }
  if (forced != kEmpty) {
    if (admissible(cell, forced)) out.push_back(forced);
    return;
  }
  const std::size_t lo = at({cell.s, 0, 0}) + 1;
  for (std::size_t x = lo; x < n_; ++x)
    if (admissible(cell, x)) out.push_back(x);
}

void MrsProblem::push(std::size_t v) {
  const Cell& cell = order_[filled_];
  at(cell) = v;
  used_[v] = 1;
  const std::size_t r = cell.s * a_ + cell.i;
  const std::size_t col = cell.s * b_ + cell.j;
  row_sum_[r] = g_.add_index(row_sum_[r], v);
  col_sum_[col] = g_.add_index(col_sum_[col], v);
  --row_left_[r];
  --col_left_[col];
  const bool so = row_left_[r] == 0 && !omega_;
  const bool sd = col_left_[col] == 0 && !delta_;
  if (so) omega_ = row_sum_[r];
  if (sd) delta_ = col_sum_[col];
  set_omega_.push_back(so);
  set_delta_.push_back(sd);
  ++filled_;
}

void MrsProblem::pop() {
  --filled_;
  const Cell& cell = order_[filled_];
  const std::size_t v = at(cell);
  at(cell) = kEmpty;
  used_[v] = 0;
  const std::size_t r = cell.s * a_ + cell.i;
  const std::size_t col = cell.s * b_ + cell.j;
  row_sum_[r] = g_.sub_index(row_sum_[r], v);
  col_sum_[col] = g_.sub_index(col_sum_[col], v);
  ++row_left_[r];
  ++col_left_[col];
  if (set_omega_.back()) omega_.reset();
  if (set_delta_.back()) delta_.reset();
  set_omega_.pop_back();
  set_delta_.pop_back();
}

MrsSearchResult mrs_search(const GroupSpec& g, std::size_t a, std::size_t b, std::size_t c,
                           const search::Options& opt) {
  auto out = search::solve(MrsProblem(g, a, b, c), opt);
  MrsSearchResult res{out.status, std::move(out.witness), out.nodes, std::move(out.trace)};
  if (res.witness) {
    if (auto err = check_mrs(*res.witness)) throw VerificationError("mrs_search produced an invalid set: " + *err);
  }
  return res;
}

}  // namespace cmrs
