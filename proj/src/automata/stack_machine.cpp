#include "rnnlab/stack_machine.hpp"

#include <stdexcept>

namespace rnnlab {

Rational stack_empty() { return Rational(1); }

bool stack_head(const Rational& s) { return s >= Rational(1); }

bool stack_is_empty(const Rational& s) { return s == Rational(1); }

Rational stack_push(const Rational& s, bool bit) { return Rational(bit ? 1 : 0) + s * Rational(1, 2); }

Rational stack_pop(const Rational& s) {
  if (stack_is_empty(s)) return s;
  return Rational(2) * (s - Rational(stack_head(s) ? 1 : 0));
}

Rational apply_stack_op(StackOp op, const Rational& s) {
  switch (op) {
    case StackOp::push0: return stack_push(s, false);
    case StackOp::push1: return stack_push(s, true);
    case StackOp::pop: return stack_pop(s);
    case StackOp::noop: return s;
  }
  return s;
}

StackMachine::StackMachine(std::size_t states, std::size_t symbols, std::size_t stacks, std::size_t start)
    : states_(states), symbols_(symbols), stacks_(stacks), start_(start) {
  if (start >= states) throw std::invalid_argument("stack machine: start state out of range");
  if (stacks > 16) throw std::invalid_argument("stack machine: too many stacks");
  table_.resize(states * symbols * masks());
  for (std::size_t q = 0; q < states; ++q) {
    for (std::size_t k = 0; k < symbols * masks(); ++k) {
      table_[q * symbols * masks() + k] = SmAction{q, std::vector<StackOp>(stacks, StackOp::noop)};
    }
  }
  accept_.assign(states, false);
}

std::size_t StackMachine::index(std::size_t state, std::size_t symbol, std::size_t mask) const {
  if (state >= states_ || symbol >= symbols_ || mask >= masks()) {
    throw std::out_of_range("stack machine: (state, symbol, mask) out of range");
  }
  return (state * symbols_ + symbol) * masks() + mask;
}

void StackMachine::set(std::size_t state, std::size_t symbol, std::size_t head_mask, SmAction a) {
  if (a.next >= states_ || a.ops.size() != stacks_) throw std::invalid_argument("stack machine: bad action");
  table_[index(state, symbol, head_mask)] = std::move(a);
}

const SmAction& StackMachine::action(std::size_t state, std::size_t symbol, std::size_t head_mask) const {
  return table_[index(state, symbol, head_mask)];
}

void StackMachine::set_accepting(std::size_t state, bool accept) { accept_.at(state) = accept; }

bool StackMachine::accepting(std::size_t state) const { return accept_.at(state); }

std::size_t head_mask(std::span<const Rational> stacks) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < stacks.size(); ++i) {
    if (stack_head(stacks[i])) m |= std::size_t{1} << i;
  }
  return m;
}

SmTrace sm_run(const StackMachine& m, std::span<const std::size_t> word) {
  SmTrace tr;
  std::size_t q = m.start();
  std::vector<Rational> s(m.stacks(), stack_empty());
  tr.states.push_back(q);
  tr.stacks.push_back(s);
  for (auto sym : word) {
    if (sym >= m.symbols()) throw std::out_of_range("sm_run: symbol outside alphabet");
    const auto& a = m.action(q, sym, head_mask(s));
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = apply_stack_op(a.ops[i], s[i]);
    q = a.next;
    tr.states.push_back(q);
    tr.stacks.push_back(s);
  }
  tr.accept = m.accepting(q);
  return tr;
}

StackMachine random_stack_machine(Rng& rng, std::size_t states, std::size_t symbols, std::size_t stacks) {
  StackMachine m(states, symbols, stacks, 0);
  for (std::size_t q = 0; q < states; ++q) {
    for (std::size_t s = 0; s < symbols; ++s) {
      for (std::size_t h = 0; h < m.masks(); ++h) {
        SmAction a{rng.index(states), {}};
        for (std::size_t i = 0; i < stacks; ++i) a.ops.push_back(static_cast<StackOp>(rng.index(kStackOps)));
        m.set(q, s, h, std::move(a));
      }
    }
    m.set_accepting(q, rng.bernoulli(0.5));
  }
  return m;
}

StackMachine pad_stack_machine(const StackMachine& m) {
  StackMachine out(m.states(), m.symbols() + 1, m.stacks(), m.start());
  for (std::size_t q = 0; q < m.states(); ++q) {
    for (std::size_t h = 0; h < m.masks(); ++h) {
      for (std::size_t s = 0; s < m.symbols(); ++s) out.set(q, s, h, m.action(q, s, h));
      out.set(q, m.symbols(), h, SmAction{q, std::vector<StackOp>(m.stacks(), StackOp::noop)});
    }
    out.set_accepting(q, m.accepting(q));
  }
  return out;
}

std::vector<std::size_t> pad_word(std::span<const std::size_t> w, std::size_t pad_symbol, unsigned power) {
  std::size_t pads = 1;
  for (unsigned k = 0; k < power; ++k) pads *= w.size();
  std::vector<std::size_t> out(w.begin(), w.end());
  out.insert(out.end(), pads, pad_symbol);
  return out;
}

}  // namespace rnnlab
