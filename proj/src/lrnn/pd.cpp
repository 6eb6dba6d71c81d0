#include "rnnlab/pd.hpp"

#include <algorithm>

namespace rnnlab {
namespace {

void check(const PdStep& s) {
  if (s.perm.size() != s.diag.size()) throw DimensionError("pd step: permutation and diagonal sizes differ");
}

std::pair<PdStep, std::size_t> tree(std::span<const PdStep> steps, ScanStats& stats) {
  if (steps.size() == 1) return {steps.front(), 0};
  const std::size_t mid = steps.size() / 2;
  auto [l, dl] = tree(steps.subspan(0, mid), stats);
  auto [r, dr] = tree(steps.subspan(mid), stats);
  ++stats.combines;
  return {pd_multiply(l, r), std::max(dl, dr) + 1};
}

}  // namespace

RMatrix PdStep::matrix() const {
  check(*this);
  RMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(perm[i], i) = diag[i];
  return m;
}

LinStep pd_transition(const PdStep& s) { return pd_transition(s, RMatrix(s.diag.size(), s.diag.size())); }

LinStep pd_transition(const PdStep& s, RMatrix input) {
  if (input.rows() != s.diag.size() || input.cols() != s.diag.size()) throw DimensionError("pd step: input shape");
  return {s.matrix(), std::move(input)};
}

PdStep pd_identity(std::size_t d) {
  RVector ones(d);
  for (auto& x : ones) x = 1;
  return {RelaxedPermutation::identity(d), ones};
}

PdStep pd_multiply(const PdStep& a, const PdStep& b) {
  check(a);
  check(b);
  if (a.diag.size() != b.diag.size()) throw DimensionError("pd multiply: size mismatch");
  return {perm_compose(a.perm, b.perm), hadamard(perm_apply_diag(b.perm, a.diag), b.diag)};
}

PdStep pd_product_closed_form(std::span<const PdStep> steps) {
  if (steps.empty()) throw DimensionError("pd product of an empty sequence");
  const std::size_t d = steps.front().diag.size();
  for (const auto& s : steps) {
    check(s);
    if (s.diag.size() != d) throw DimensionError("pd product: size mismatch");
  }
  // route[k] = π_{j+1}(⋯π_n(k)), built from the back.
  std::vector<std::size_t> route(d);
  for (std::size_t k = 0; k < d; ++k) route[k] = k;
  RVector acc(d);
  for (auto& x : acc) x = 1;
  for (std::size_t j = steps.size(); j-- > 0;) {
    for (std::size_t k = 0; k < d; ++k) acc[k] *= steps[j].diag[route[k]];
    for (std::size_t k = 0; k < d; ++k) route[k] = steps[j].perm[route[k]];
  }
  return {RelaxedPermutation(std::move(route)), std::move(acc)};
}

std::pair<PdStep, ScanStats> pd_product_tree(std::span<const PdStep> steps) {
  if (steps.empty()) throw DimensionError("pd product of an empty sequence");
  ScanStats stats;
  auto [p, depth] = tree(steps, stats);
  stats.depth = depth;
  return {std::move(p), stats};
}

}  // namespace rnnlab
