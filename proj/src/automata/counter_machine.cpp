#include "rnnlab/counter_machine.hpp"

#include <sstream>
#include <stdexcept>

#include "rnnlab/conn.hpp"

namespace rnnlab {

CounterMachine::CounterMachine(std::size_t states, std::size_t symbols, std::size_t counters, std::size_t start)
    : states_(states), symbols_(symbols), counters_(counters), start_(start) {
  if (start >= states) throw std::invalid_argument("counter machine: start state out of range");
  if (counters > 16) throw std::invalid_argument("counter machine: too many counters");
  table_.resize(states * symbols * masks());
  for (std::size_t q = 0; q < states; ++q) {
    for (std::size_t k = 0; k < symbols * masks(); ++k) {
      table_[q * symbols * masks() + k] = CmAction{q, std::vector<CounterOp>(counters, CounterOp::keep)};
    }
  }
  accept_.assign(states * masks(), false);
}

std::size_t CounterMachine::index(std::size_t state, std::size_t symbol, std::size_t mask) const {
  if (state >= states_ || symbol >= symbols_ || mask >= masks()) {
    throw std::out_of_range("counter machine: (state, symbol, mask) out of range");
  }
  return (state * symbols_ + symbol) * masks() + mask;
}

void CounterMachine::set(std::size_t state, std::size_t symbol, std::size_t mask, CmAction a) {
  if (a.next >= states_ || a.ops.size() != counters_) throw std::invalid_argument("counter machine: bad action");
  table_[index(state, symbol, mask)] = std::move(a);
}

void CounterMachine::set_all_masks(std::size_t state, std::size_t symbol, const CmAction& a) {
  for (std::size_t m = 0; m < masks(); ++m) set(state, symbol, m, a);
}

const CmAction& CounterMachine::action(std::size_t state, std::size_t symbol, std::size_t mask) const {
  return table_[index(state, symbol, mask)];
}

void CounterMachine::set_accepting(std::size_t state, std::size_t mask, bool accept) {
  if (state >= states_ || mask >= masks()) throw std::out_of_range("counter machine: accept index");
  accept_[state * masks() + mask] = accept;
}

void CounterMachine::set_accepting_all_masks(std::size_t state, bool accept) {
  for (std::size_t m = 0; m < masks(); ++m) set_accepting(state, m, accept);
}

bool CounterMachine::accepting(std::size_t state, std::size_t mask) const {
  if (state >= states_ || mask >= masks()) throw std::out_of_range("counter machine: accept index");
  return accept_[state * masks() + mask];
}

std::size_t zero_mask(std::span<const std::int64_t> counters) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < counters.size(); ++i) {
    if (counters[i] == 0) m |= std::size_t{1} << i;
  }
  return m;
}

std::int64_t apply_counter_op(CounterOp op, std::int64_t c) {
  switch (op) {
    case CounterOp::zero: return 0;
    case CounterOp::keep: return c;
    case CounterOp::inc: return c + 1;
    case CounterOp::dec: return c - 1;
  }
  return c;
}

CmTrace cm_run(const CounterMachine& m, std::span<const std::size_t> word) {
  CmTrace tr;
  std::size_t q = m.start();
  std::vector<std::int64_t> c(m.counters(), 0);
  tr.states.reserve(word.size() + 1);
  tr.counters.reserve(word.size() + 1);
  tr.states.push_back(q);
  tr.counters.push_back(c);
  for (auto sym : word) {
    if (sym >= m.symbols()) throw std::out_of_range("cm_run: symbol outside alphabet");
    const auto& a = m.action(q, sym, zero_mask(c));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = apply_counter_op(a.ops[i], c[i]);
    q = a.next;
    tr.states.push_back(q);
    tr.counters.push_back(c);
  }
  tr.accept = m.accepting(q, zero_mask(c));
  return tr;
}

CounterMachine build_conn_counter_machine() {
  using enum CounterOp;
  constexpr auto bos = static_cast<std::size_t>(ConnToken::bos);
  constexpr auto mark = static_cast<std::size_t>(ConnToken::mark);
  constexpr auto sep = static_cast<std::size_t>(ConnToken::sep);
  constexpr auto end = static_cast<std::size_t>(ConnToken::end);
  constexpr std::size_t s_zero = 1;  // mask bit of counter S

  CounterMachine m(kConnCmStates, kConnAlphabet, 3, cm_start);
  auto act = [](std::size_t next, CounterOp s, CounterOp i, CounterOp t) { return CmAction{next, {s, i, t}}; };
  const CmAction reject = act(cm_reject, keep, keep, keep);
  for (std::size_t q = 0; q < kConnCmStates; ++q) {
    for (std::size_t sym = 0; sym < kConnAlphabet; ++sym) m.set_all_masks(q, sym, reject);
  }
  m.set_all_masks(cm_start, bos, act(cm_source, keep, keep, keep));

  m.set_all_masks(cm_source, mark, act(cm_source, inc, keep, keep));
  m.set_all_masks(cm_source, sep, act(cm_first, keep, keep, keep));

  // A block after a completed pair is either an edge source or the target;
  // its terminator tells which, so both readings are tracked together.
  m.set_all_masks(cm_first, mark, act(cm_first, dec, inc, inc));
  for (std::size_t mask = 0; mask < m.masks(); ++mask) {
    const bool at_node = (mask & s_zero) != 0;
    m.set(cm_first, sep, mask, act(at_node ? cm_match : cm_skip, keep, keep, zero));
    m.set(cm_first, end, mask, act(at_node ? cm_accept : cm_reject, keep, keep, keep));
  }

  m.set_all_masks(cm_match, mark, act(cm_match, inc, keep, keep));
  m.set_all_masks(cm_match, sep, act(cm_first, keep, zero, keep));

  constexpr std::size_t i_zero = 2;
  for (std::size_t mask = 0; mask < m.masks(); ++mask) {
    const bool drained = (mask & i_zero) != 0;
    m.set(cm_skip, mark, mask, drained ? act(cm_skip, keep, keep, keep) : act(cm_skip, inc, dec, keep));
  }
  m.set_all_masks(cm_skip, sep, act(cm_first, keep, zero, keep));

  for (std::size_t sym = 0; sym < kConnAlphabet; ++sym) {
    m.set_all_masks(cm_accept, sym, act(cm_accept, keep, keep, keep));
  }
  m.set_accepting_all_masks(cm_accept, true);
  return m;
}

std::string dump_counter_machine(const CounterMachine& m) {
  static constexpr const char* op_name[] = {"x0", "+0", "+1", "-1"};
  std::ostringstream os;
  os << "states=" << m.states() << " symbols=" << m.symbols() << " counters=" << m.counters()
     << " start=" << m.start() << '\n';
  for (std::size_t q = 0; q < m.states(); ++q) {
    for (std::size_t s = 0; s < m.symbols(); ++s) {
      for (std::size_t mask = 0; mask < m.masks(); ++mask) {
        const auto& a = m.action(q, s, mask);
        os << q << ' ' << s << ' ' << mask << " -> " << a.next;
        for (auto op : a.ops) os << ' ' << op_name[static_cast<int>(op)];
        os << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace rnnlab
