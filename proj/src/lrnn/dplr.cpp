#include "rnnlab/dplr.hpp"

namespace rnnlab {
namespace {

void check_rwkv(const RwkvStep& s) {
  const auto d = s.decay.size();
  if (s.replacement.size() != d || s.removal.size() != d || s.value.size() != d || s.key.size() != d) {
    throw DimensionError("rwkv step: vector sizes differ");
  }
}

void check_delta(const DeltaStep& s) {
  if (s.key.size() != s.value.size()) throw DimensionError("delta step: key and value sizes differ");
}

}  // namespace

LinStep rwkv_transition(const RwkvStep& s) {
  check_rwkv(s);
  const RMatrix a = RMatrix::diag(s.decay) - s.strength * RMatrix::outer(s.removal, hadamard(s.replacement, s.removal));
  return {a, RMatrix::outer(s.value, s.key)};
}

void rwkv_update(RMatrix& state, const RwkvStep& s) {
  check_rwkv(s);
  const std::size_t d = s.decay.size();
  if (state.rows() != d || state.cols() != d) throw DimensionError("rwkv update: state shape");
  const RVector mixed = hadamard(s.replacement, s.removal);
  for (std::size_t i = 0; i < d; ++i) {
    Rational proj;  // (S κ)_i
    for (std::size_t j = 0; j < d; ++j) {
      if (!s.removal[j].is_zero() && !state(i, j).is_zero()) proj += state(i, j) * s.removal[j];
    }
    proj *= s.strength;
    for (std::size_t j = 0; j < d; ++j) {
      Rational x = state(i, j) * s.decay[j];
      if (!proj.is_zero() && !mixed[j].is_zero()) x -= proj * mixed[j];
      if (!s.value[i].is_zero()) x += s.value[i] * s.key[j];
      state(i, j) = std::move(x);
    }
  }
}

LinStep deltanet_transition(const DeltaStep& s) {
  check_delta(s);
  const auto d = s.key.size();
  return {RMatrix::identity(d) - s.beta * RMatrix::outer(s.key, s.key), s.beta * RMatrix::outer(s.value, s.key)};
}

void householder_apply(RVector& r, const Rational& beta, const RVector& key) {
  if (beta.is_zero()) return;
  const Rational proj = beta * dot(r, key);
  if (proj.is_zero()) return;
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (!key[j].is_zero()) r[j] -= proj * key[j];
  }
}

void deltanet_update(RMatrix& state, const DeltaStep& s) {
  check_delta(s);
  const std::size_t d = s.key.size();
  if (state.rows() != d || state.cols() != d) throw DimensionError("delta update: state shape");
  for (std::size_t i = 0; i < d; ++i) {
    Rational proj;
    for (std::size_t j = 0; j < d; ++j) {
      if (!s.key[j].is_zero() && !state(i, j).is_zero()) proj += state(i, j) * s.key[j];
    }
    // row_i ← row_i − β (row_i·k − v_i) kᵀ
    const Rational coeff = s.beta * (proj - s.value[i]);
    if (coeff.is_zero()) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (!s.key[j].is_zero()) state(i, j) -= coeff * s.key[j];
    }
  }
}

}  // namespace rnnlab
