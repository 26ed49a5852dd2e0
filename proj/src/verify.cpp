#include "cmrs/verify.hpp"

#include <atomic>
#include <vector>

namespace cmrs::par {

namespace {

// Marks each index once; false if some index is out of range or repeated.
class Marker {
 public:
  explicit Marker(std::size_t n) : seen_(n) {}
  bool mark(std::size_t x) {
    if (x >= seen_.size()) return false;
    return !seen_[x].exchange(true, std::memory_order_relaxed);
  }

 private:
  std::vector<std::atomic<bool>> seen_;
};

}  // namespace

std::optional<std::string> check_mrs(const RectangleSet& r) {
  const auto& g = r.group;
  const auto n = g.order();
  if (r.a * r.b * r.c != n || r.rects.size() != r.c || r.omega >= n || r.delta >= n) return cmrs::check_mrs(r);
  for (const auto& rect : r.rects) {
    if (rect.size() != r.a) return cmrs::check_mrs(r);
    for (const auto& row : rect)
      if (row.size() != r.b) return cmrs::check_mrs(r);
  }

  Marker seen(n);
  bool ok = true;
  const auto c = static_cast<std::ptrdiff_t>(r.c);
#pragma omp parallel for reduction(&& : ok) schedule(static)
  for (std::ptrdiff_t s = 0; s < c; ++s) {
    const auto& rect = r.rects[static_cast<std::size_t>(s)];
    for (std::size_t i = 0; i < r.a; ++i) {
      std::size_t acc = 0;
      for (std::size_t j = 0; j < r.b; ++j) {
        ok = seen.mark(rect[i][j]) && ok;
        if (rect[i][j] < n) acc = g.add_index(acc, rect[i][j]);
      }
      ok = ok && acc == r.omega;
    }
    for (std::size_t j = 0; j < r.b && ok; ++j) {
      std::size_t acc = 0;
      for (std::size_t i = 0; i < r.a; ++i) acc = g.add_index(acc, rect[i][j]);
      ok = acc == r.delta;
    }
  }
  if (!ok) return cmrs::check_mrs(r);
  return std::nullopt;
}

std::optional<std::string> check_complete_mapping(const CompleteMapping& cm) {
  const auto& g = cm.group;
  const auto n = g.order();
  if (cm.table.size() != n) return cmrs::check_complete_mapping(cm);
  Marker img(n), theta(n);
  bool ok = true;
  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for reduction(&& : ok) schedule(static)
  for (std::ptrdiff_t x = 0; x < nn; ++x) {
    const auto y = cm.table[static_cast<std::size_t>(x)];
    const bool fresh = img.mark(y);
    ok = fresh && theta.mark(g.add_index(static_cast<std::size_t>(x), y)) && ok;
  }
  if (!ok) return cmrs::check_complete_mapping(cm);
  return std::nullopt;
}

std::optional<std::string> check_kas(const KotzigArraySet& s) {
  const auto& g = s.group;
  const auto n = g.order();
  if (s.j < 2 || s.m == 0 || s.arrays.size() * s.m != n) return cmrs::check_kas(s);
  for (const auto& arr : s.arrays) {
    if (arr.size() != s.j) return cmrs::check_kas(s);
    for (const auto& row : arr)
      if (row.size() != s.m) return cmrs::check_kas(s);
  }
  std::vector<Marker> rows;
  rows.reserve(s.j);
  for (std::size_t i = 0; i < s.j; ++i) rows.emplace_back(n);
  bool ok = true;
  const auto t = static_cast<std::ptrdiff_t>(s.arrays.size());
#pragma omp parallel for reduction(&& : ok) schedule(static)
  for (std::ptrdiff_t u = 0; u < t; ++u) {
    const auto& arr = s.arrays[static_cast<std::size_t>(u)];
    for (std::size_t i = 0; i < s.j; ++i) {
      std::size_t acc = 0;
      for (auto x : arr[i]) {
        ok = rows[i].mark(x) && ok;
        if (x < n) acc = g.add_index(acc, x);
      }
      ok = ok && acc == 0;
    }
    for (std::size_t col = 0; col < s.m && ok; ++col) {
      std::size_t acc = 0;
      for (std::size_t i = 0; i < s.j; ++i) acc = g.add_index(acc, arr[i][col]);
      ok = acc == 0;
    }
  }
  if (!ok) return cmrs::check_kas(s);
  return std::nullopt;
}

}  // namespace cmrs::par
