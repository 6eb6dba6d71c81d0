#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rnnlab {

/// Counter update: reset to zero, keep, increment, decrement.
enum class CounterOp : std::uint8_t { zero, keep, inc, dec };
inline constexpr std::size_t kCounterOps = 4;

struct CmAction {
  std::size_t next = 0;
  std::vector<CounterOp> ops;
};

/// Real-time counter machine. A step reads (state, symbol, zero-mask) where
/// bit i of the mask is set iff counter i is zero before the step.
class CounterMachine {
 public:
  CounterMachine(std::size_t states, std::size_t symbols, std::size_t counters, std::size_t start);

  std::size_t states() const noexcept { return states_; }
  std::size_t symbols() const noexcept { return symbols_; }
  std::size_t counters() const noexcept { return counters_; }
  std::size_t start() const noexcept { return start_; }
  std::size_t masks() const noexcept { return std::size_t{1} << counters_; }

  /// Unset entries default to "stay in place, keep all counters".
  void set(std::size_t state, std::size_t symbol, std::size_t mask, CmAction a);
  /// Same action for every mask.
  void set_all_masks(std::size_t state, std::size_t symbol, const CmAction& a);
  const CmAction& action(std::size_t state, std::size_t symbol, std::size_t mask) const;

  void set_accepting(std::size_t state, std::size_t mask, bool accept);
  void set_accepting_all_masks(std::size_t state, bool accept);
  bool accepting(std::size_t state, std::size_t mask) const;

 private:
  std::size_t index(std::size_t state, std::size_t symbol, std::size_t mask) const;

  std::size_t states_, symbols_, counters_, start_;
  std::vector<CmAction> table_;
  std::vector<bool> accept_;
};

std::size_t zero_mask(std::span<const std::int64_t> counters);
std::int64_t apply_counter_op(CounterOp op, std::int64_t c);

struct CmTrace {
  std::vector<std::size_t> states;                 // t = 0..T
  std::vector<std::vector<std::int64_t>> counters;  // t = 0..T
  bool accept = false;
};

/// Throws std::out_of_range on a symbol outside the alphabet.
CmTrace cm_run(const CounterMachine& m, std::span<const std::size_t> word);

/// States of the connectivity machine; counters are S (current node minus
/// consumed marks), I (pending source) and T (candidate target).
enum ConnCmState : std::size_t { cm_start, cm_source, cm_first, cm_match, cm_skip, cm_accept, cm_reject };
inline constexpr std::size_t kConnCmStates = 7;

/// Decides, over the unary connectivity alphabet, whether the out-edge chain
/// from the source ends at the target. This coincides with reachability
/// whenever the target has no out-edge.
CounterMachine build_conn_counter_machine();

std::string dump_counter_machine(const CounterMachine& m);

}  // namespace rnnlab
