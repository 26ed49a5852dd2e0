#include "cmrs/zerosum.hpp"

#include <algorithm>

#include "cmrs/errors.hpp"

namespace cmrs {

ZeroSumProblem::ZeroSumProblem(const GroupSpec& g, std::size_t m, std::vector<std::size_t> anchors)
    : g_(g), n_(g.order()), m_(m), anchors_(std::move(anchors)), used_(n_, 0) {
  if (!anchors_.empty()) {
    anchor_mark_.assign(n_, 0);
    for (auto a : anchors_) anchor_mark_.at(a) = 1;
  }
  seq_.reserve(n_);
  sums_.reserve(n_);
}

ZeroSumProblem::Witness ZeroSumProblem::witness() const {
  Witness w;
  for (std::size_t k = 0; k * m_ < seq_.size(); ++k)
    w.emplace_back(seq_.begin() + static_cast<std::ptrdiff_t>(k * m_),
                   seq_.begin() + static_cast<std::ptrdiff_t>((k + 1) * m_));
  return w;
}

void ZeroSumProblem::candidates(std::vector<std::size_t>& out) {
  out.clear();
  const std::size_t pos = filled_ % m_;
  if (pos == 0) {
    const std::size_t k = filled_ / m_;
    if (!anchors_.empty()) {
      out.push_back(anchors_[k]);
      return;
    }
    for (std::size_t x = 0; x < n_; ++x)
      if (!used_[x]) {
        out.push_back(x);
        return;
      }
    return;
  }
  const std::size_t sum = sums_.back();
  // In anchored mode the anchor does not take part in the increasing order.
  const bool ordered = anchors_.empty() || pos >= 2;
  const std::size_t prev = seq_.back();
  if (pos == m_ - 1) {
    const std::size_t last = g_.neg_index(sum);
    if (usable(last) && (!ordered || last > prev)) out.push_back(last);
    return;
  }
  for (std::size_t x = ordered ? prev + 1 : 0; x < n_; ++x) {
    if (!usable(x)) continue;
    if (pos == m_ - 2) {
      const std::size_t last = g_.neg_index(g_.add_index(sum, x));
      if (!usable(last) || last <= x) continue;
    }
    out.push_back(x);
  }
}

void ZeroSumProblem::push(std::size_t v) {
  const std::size_t pos = filled_ % m_;
  used_[v] = 1;
  seq_.push_back(v);
  sums_.push_back(pos == 0 ? v : g_.add_index(sums_.back(), v));
  ++filled_;
}

void ZeroSumProblem::pop() {
  used_[seq_.back()] = 0;
  seq_.pop_back();
  sums_.pop_back();
  --filled_;
}

namespace {

void check_m(const GroupSpec& g, std::size_t m) {
  if (m <= 1) throw PreconditionError("class size m must be > 1");
  if (g.order() % m != 0)
    throw PreconditionError("m = " + std::to_string(m) + " does not divide |" + g.to_string() + "|");
}

}  // namespace

ZeroSumPartition zero_sum_partition(const GroupSpec& g, std::size_t m, const ZeroSumOptions& opt) {
  check_m(g, m);
  if (!admits_complete_mapping(g))
    throw InfeasibleError(g.to_string() + " is not in the class G: its elements do not sum to 0");
  if (m == 2) throw InfeasibleError("no zero-sum partition into pairs exists: 0 cannot be paired");
  ZeroSumPartition p{g, m, {}};
  if (m == g.order()) {
    p.classes.emplace_back();
    for (std::size_t x = 0; x < g.order(); ++x) p.classes.back().push_back(x);
    return p;
  }
  auto out = search::backtrack(ZeroSumProblem(g, m), {opt.budget, opt.seed, false});
  if (out.status == search::Status::BudgetExceeded)
    throw SearchBudgetError("zero_sum_partition(" + g.to_string() + ", " + std::to_string(m) + ") ran out of budget");
  if (out.status == search::Status::Infeasible)
    throw InfeasibleError("zero_sum_partition(" + g.to_string() + ", " + std::to_string(m) + ") exhausted");
  p.classes = std::move(*out.witness);
  if (auto err = check_zero_sum_partition(p)) throw VerificationError("zero_sum_partition: " + *err);
  return p;
}

std::optional<ZeroSumPartition> zero_sum_partition_with_anchors(
    const GroupSpec& g, std::size_t m, const std::vector<std::size_t>& anchors,
    const ZeroSumOptions& opt) {
  check_m(g, m);
  if (anchors.size() * m != g.order()) throw PreconditionError("need exactly |G|/m anchors");
  auto out = search::backtrack(ZeroSumProblem(g, m, anchors), {opt.budget, opt.seed, false});
  if (out.status == search::Status::BudgetExceeded)
    throw SearchBudgetError("anchored zero-sum partition ran out of budget");
  if (out.status != search::Status::Found) return std::nullopt;
  ZeroSumPartition p{g, m, std::move(*out.witness)};
  if (auto err = check_zero_sum_partition(p)) throw VerificationError("anchored zero-sum partition: " + *err);
  return p;
}

std::optional<std::string> check_zero_sum_partition(const ZeroSumPartition& p) {
  const auto n = p.group.order();
  if (p.m == 0 || p.m * p.classes.size() != n)
    return "class count " + std::to_string(p.classes.size()) + " * m " + std::to_string(p.m) +
           " != |G| " + std::to_string(n);
  std::vector<char> seen(n, 0);
  for (std::size_t k = 0; k < p.classes.size(); ++k) {
    const auto& cls = p.classes[k];
    if (cls.size() != p.m) return "classes[" + std::to_string(k) + "]: size " + std::to_string(cls.size());
    for (auto x : cls) {
      if (x >= n) return "classes[" + std::to_string(k) + "]: element index out of range";
      if (seen[x]) return "classes[" + std::to_string(k) + "]: element " + std::to_string(x) + " repeated";
      seen[x] = 1;
    }
    if (p.group.sum_indices(cls) != 0) return "classes[" + std::to_string(k) + "]: sum is not 0";
  }
  return std::nullopt;
}

}  // namespace cmrs
