#pragma once

#include <span>
#include <vector>

#include "rnnlab/network.hpp"
#include "rnnlab/pd.hpp"
#include "rnnlab/wfa.hpp"

namespace rnnlab {

/// One-layer PD network recognizing {w : f(w) > 0} for a deterministic WFA.
/// Inputs are BOS followed by the word; the state after BOS is α and each
/// symbol σ applies the PD matrix Mσᵀ.
struct PdRecognizer {
  std::size_t alphabet = 0;
  std::vector<PdStep> symbol_steps;  // Mσᵀ as P·D
  LrnnNetwork net;

  /// One-hot embedding of BOS + word.
  std::vector<RVector> embed(std::span<const Symbol> w) const;
  Rational score(std::span<const Symbol> w) const;
  bool accepts(std::span<const Symbol> w) const;
};

/// Throws std::invalid_argument if the WFA is not deterministic.
PdRecognizer dwfa_to_pd(const Wfa& a);

/// The PD form of Mσᵀ for a deterministic transition matrix.
PdStep pd_from_deterministic(const RMatrix& m);

/// Deterministic WFA whose matrices are transposes of random PD steps with
/// entries in {-1, -1/2, 0, 1/2, 1}.
Wfa random_deterministic_wfa(Rng& rng, std::size_t states, std::size_t alphabet);

}  // namespace rnnlab
