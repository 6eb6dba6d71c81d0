#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rnnlab/linalg.hpp"
#include "rnnlab/random.hpp"

namespace rnnlab {

using Symbol = std::size_t;
using Word = std::vector<Symbol>;

/// Weighted finite automaton f(w) = α · M_{w1} ⋯ M_{wT} · ω, with α used as a
/// row vector and ω as a column vector.
struct Wfa {
  RVector initial;
  std::vector<RMatrix> transitions;  // one n×n matrix per symbol
  RVector final;

  std::size_t states() const noexcept { return initial.size(); }
  std::size_t alphabet() const noexcept { return transitions.size(); }
  /// Throws DimensionError on inconsistent shapes.
  void validate() const;
};

/// Product M_{w1} ⋯ M_{wk}; identity for the empty word.
RMatrix wfa_word_matrix(const Wfa& a, std::span<const Symbol> w);

/// Throws std::out_of_range on a symbol outside the alphabet.
Rational wfa_eval(const Wfa& a, std::span<const Symbol> w);

/// f(w_1..w_t) for t = 0..|w|.
std::vector<Rational> wfa_eval_prefixes(const Wfa& a, std::span<const Symbol> w);

/// At most one initial state, and every state has at most one successor per
/// symbol: α and each row of every M_σ have at most one nonzero entry.
bool wfa_is_deterministic(const Wfa& a);

/// Entries drawn uniformly from {-1/2, 0, 1/2}; α and ω are redrawn until nonzero.
Wfa random_wfa(Rng& rng, std::size_t states, std::size_t alphabet);

Word random_word(Rng& rng, std::size_t alphabet, std::size_t length);

}  // namespace rnnlab
