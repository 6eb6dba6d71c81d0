#pragma once

#include <span>
#include <utility>

#include "rnnlab/lrnn.hpp"
#include "rnnlab/relaxed_perm.hpp"

namespace rnnlab {

/// Transition P·D with P a relaxed permutation and D diagonal.
struct PdStep {
  RelaxedPermutation perm;
  RVector diag;

  RMatrix matrix() const;
  friend bool operator==(const PdStep&, const PdStep&) = default;
};

/// LinStep with transition P·D and the given additive term (zero if omitted).
LinStep pd_transition(const PdStep& s);
LinStep pd_transition(const PdStep& s, RMatrix input);

/// The list-order product A_1·A_2⋯A_n of PD matrices is again PD:
/// P = P_1⋯P_n and D[k] = Π_j D_j[π_{j+1}(⋯π_n(k))].
PdStep pd_product_closed_form(std::span<const PdStep> steps);

/// Same product through a balanced reduction tree, with depth accounting.
std::pair<PdStep, ScanStats> pd_product_tree(std::span<const PdStep> steps);

/// (P,D)·(P',D') = (P P', π'(D) ⊙ D')
PdStep pd_multiply(const PdStep& a, const PdStep& b);

PdStep pd_identity(std::size_t d);

}  // namespace rnnlab
