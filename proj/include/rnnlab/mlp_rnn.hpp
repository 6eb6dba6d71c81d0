#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rnnlab/counter_machine.hpp"
#include "rnnlab/relu_mlp.hpp"
#include "rnnlab/stack_machine.hpp"

namespace rnnlab {

/// h_t = update([h_{t-1} | x_t]); accepts iff acceptor(h_T) > 0.
struct MlpRnn {
  std::size_t state_dim = 0;
  std::size_t input_dim = 0;
  RVector initial;
  ReluMlp update;
  ReluMlp acceptor;

  void validate() const;
};

struct MlpRunResult {
  bool accept = false;
  std::vector<RVector> states;  // t = 0..T
  PrecisionReport precision;    // every pre-activation, state and acceptor value
};

MlpRunResult run_mlp_rnn(const MlpRnn& r, std::span<const RVector> inputs);
/// Inputs given as symbols, embedded one-hot.
MlpRunResult run_mlp_rnn(const MlpRnn& r, std::span<const std::size_t> symbols);

/// Hidden layout [state one-hot | c⁺ | c⁻] with c = c⁺ − c⁻.
struct CmRnn {
  MlpRnn rnn;
  std::size_t states = 0;
  std::size_t counters = 0;

  struct Config {
    std::size_t state;
    std::vector<std::int64_t> counters;
    bool operator==(const Config&) const = default;
  };
  /// Throws std::domain_error if h is not a valid configuration encoding.
  Config decode(const RVector& h) const;
};

/// A fixed piecewise-linear map cannot send (c, reset) to 0 for unbounded c,
/// so the construction is exact for runs whose counters stay within
/// `counter_bound` in absolute value. A real-time run of length T needs T.
CmRnn cm_to_mlp_rnn(const CounterMachine& m, std::int64_t counter_bound);

/// Hidden layout [state one-hot | stack encodings].
struct SmRnn {
  MlpRnn rnn;
  std::size_t states = 0;
  std::size_t stacks = 0;

  struct Config {
    std::size_t state;
    std::vector<Rational> stacks;
    bool operator==(const Config&) const = default;
  };
  Config decode(const RVector& h) const;
};

/// Exact for runs in which no stack grows deeper than `max_depth`; the head
/// and emptiness tests use the margin 2^{-max_depth}.
SmRnn sm_to_mlp_rnn(const StackMachine& m, std::size_t max_depth);

}  // namespace rnnlab
