#pragma once

#include "rnnlab/linalg.hpp"
#include "rnnlab/lrnn.hpp"

namespace rnnlab {

/// RWKV-7 style step: transition diag(decay) − strength · removal (replacement ⊙ removal)ᵀ,
/// additive term value · keyᵀ.
struct RwkvStep {
  RVector decay;
  RVector replacement;
  RVector removal;
  Rational strength;
  RVector value;
  RVector key;
};

LinStep rwkv_transition(const RwkvStep& s);

/// S ← S·A + value·keyᵀ without forming A.
void rwkv_update(RMatrix& state, const RwkvStep& s);

/// DeltaNet step: transition I − β·key·keyᵀ, additive term β·value·keyᵀ.
struct DeltaStep {
  Rational beta;
  RVector key;
  RVector value;
};

LinStep deltanet_transition(const DeltaStep& s);

/// S ← S·(I − β k kᵀ) + β v kᵀ without forming the matrix.
void deltanet_update(RMatrix& state, const DeltaStep& s);

/// r ← r·(I − β k kᵀ) for a row vector.
void householder_apply(RVector& r, const Rational& beta, const RVector& key);

}  // namespace rnnlab
