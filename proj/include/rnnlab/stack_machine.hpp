#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rnnlab/random.hpp"
#include "rnnlab/rational.hpp"

namespace rnnlab {

enum class StackOp : std::uint8_t { push0, push1, pop, noop };
inline constexpr std::size_t kStackOps = 4;

/// Binary stacks are encoded as rationals in [0, 2]. The empty stack is 1 and
/// pushing bit v maps s to v + s/2, so the top bit is 1[s >= 1].
Rational stack_empty();
bool stack_head(const Rational& s);
bool stack_is_empty(const Rational& s);
Rational stack_push(const Rational& s, bool bit);
/// 2(s - head(s)); popping the empty stack leaves it unchanged.
Rational stack_pop(const Rational& s);
Rational apply_stack_op(StackOp op, const Rational& s);

struct SmAction {
  std::size_t next = 0;
  std::vector<StackOp> ops;
};

/// Real-time k-stack machine. A step reads (state, symbol, head-mask) where
/// bit i of the mask is the top bit of stack i.
class StackMachine {
 public:
  StackMachine(std::size_t states, std::size_t symbols, std::size_t stacks, std::size_t start);

  std::size_t states() const noexcept { return states_; }
  std::size_t symbols() const noexcept { return symbols_; }
  std::size_t stacks() const noexcept { return stacks_; }
  std::size_t start() const noexcept { return start_; }
  std::size_t masks() const noexcept { return std::size_t{1} << stacks_; }

  /// Unset entries default to "stay in place, leave every stack alone".
  void set(std::size_t state, std::size_t symbol, std::size_t head_mask, SmAction a);
  const SmAction& action(std::size_t state, std::size_t symbol, std::size_t head_mask) const;
  void set_accepting(std::size_t state, bool accept);
  bool accepting(std::size_t state) const;

 private:
  std::size_t index(std::size_t state, std::size_t symbol, std::size_t mask) const;

  std::size_t states_, symbols_, stacks_, start_;
  std::vector<SmAction> table_;
  std::vector<bool> accept_;
};

std::size_t head_mask(std::span<const Rational> stacks);

struct SmTrace {
  std::vector<std::size_t> states;              // t = 0..T
  std::vector<std::vector<Rational>> stacks;    // t = 0..T
  bool accept = false;
};

/// Throws std::out_of_range on a symbol outside the alphabet.
SmTrace sm_run(const StackMachine& m, std::span<const std::size_t> word);

/// Uniformly random transition table and accepting set.
StackMachine random_stack_machine(Rng& rng, std::size_t states, std::size_t symbols, std::size_t stacks);

/// Adds a padding symbol (index = old alphabet size) that leaves the state and
/// every stack unchanged.
StackMachine pad_stack_machine(const StackMachine& m);
/// w followed by |w|^power padding symbols.
std::vector<std::size_t> pad_word(std::span<const std::size_t> w, std::size_t pad_symbol, unsigned power);

}  // namespace rnnlab
