#include "rnnlab/mlp_rnn.hpp"

#include <array>
#include <stdexcept>

namespace rnnlab {
namespace {

using Terms = MlpBuilder::Terms;

std::vector<std::size_t> carry_all(MlpBuilder& b, const std::vector<std::size_t>& units) {
  std::vector<std::size_t> out;
  out.reserve(units.size());
  for (auto u : units) out.push_back(b.carry(u));
  return out;
}

std::vector<std::size_t> range(std::size_t from, std::size_t count) {
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = from + i;
  return out;
}

// One unit per (state, symbol, mask) that fires exactly on its key, given
// one-hot q and x and 0/1 bits.
struct KeyUnits {
  std::vector<std::size_t> unit;  // indexed by (q·symbols + x)·masks + mask
};

KeyUnits add_key_units(MlpBuilder& b, const std::vector<std::size_t>& q, const std::vector<std::size_t>& x,
                       const std::vector<std::size_t>& bits) {
  KeyUnits out;
  const std::size_t masks = std::size_t{1} << bits.size();
  const std::size_t xs = x.empty() ? 1 : x.size();
  for (std::size_t qi = 0; qi < q.size(); ++qi) {
    for (std::size_t xi = 0; xi < xs; ++xi) {
      for (std::size_t mask = 0; mask < masks; ++mask) {
        Terms t{{q[qi], 1}};
        std::int64_t bias = 1 - static_cast<std::int64_t>(1 + bits.size() + (x.empty() ? 0 : 1));
        if (!x.empty()) t.emplace_back(x[xi], 1);
        for (std::size_t i = 0; i < bits.size(); ++i) {
          if (mask >> i & 1) {
            t.emplace_back(bits[i], 1);
          } else {
            t.emplace_back(bits[i], -1);
            bias += 1;
          }
        }
        out.unit.push_back(b.add(std::move(t), Rational(bias)));
      }
    }
  }
  return out;
}

std::size_t hot_index(const RVector& h, std::size_t count) {
  std::size_t hot = count;
  for (std::size_t i = 0; i < count; ++i) {
    if (h[i] == Rational(1)) {
      if (hot != count) throw std::domain_error("decode: state is not one-hot");
      hot = i;
    } else if (!h[i].is_zero()) {
      throw std::domain_error("decode: state is not one-hot");
    }
  }
  if (hot == count) throw std::domain_error("decode: no active state");
  return hot;
}

}  // namespace

void MlpRnn::validate() const {
  if (initial.size() != state_dim) throw DimensionError("mlp rnn: initial state dimension");
  if (update.input_dim() != state_dim + input_dim || update.output_dim() != state_dim) {
    throw DimensionError("mlp rnn: update network shape");
  }
  if (acceptor.input_dim() != state_dim || acceptor.output_dim() != 1) {
    throw DimensionError("mlp rnn: acceptor network shape");
  }
}

MlpRunResult run_mlp_rnn(const MlpRnn& r, std::span<const RVector> inputs) {
  r.validate();
  MlpRunResult res;
  PrecisionMeter meter;
  meter.add(r.initial);
  res.states.reserve(inputs.size() + 1);
  res.states.push_back(r.initial);
  for (const auto& x : inputs) {
    if (x.size() != r.input_dim) throw DimensionError("mlp rnn: input dimension");
    res.states.push_back(r.update.forward(concat(res.states.back(), x), &meter));
  }
  res.accept = r.acceptor.forward(res.states.back(), &meter)[0].sign() > 0;
  res.precision = meter.report();
  return res;
}

MlpRunResult run_mlp_rnn(const MlpRnn& r, std::span<const std::size_t> symbols) {
  std::vector<RVector> xs;
  xs.reserve(symbols.size());
  for (auto s : symbols) {
    if (s >= r.input_dim) throw std::out_of_range("mlp rnn: symbol outside alphabet");
    xs.push_back(RVector::unit(r.input_dim, s));
  }
  return run_mlp_rnn(r, xs);
}

CmRnn::Config CmRnn::decode(const RVector& h) const {
  if (h.size() != states + 2 * counters) throw DimensionError("cm rnn: state dimension");
  Config c{hot_index(h, states), {}};
  for (std::size_t i = 0; i < counters; ++i) {
    const Rational& p = h[states + i];
    const Rational& n = h[states + counters + i];
    if (!p.is_integer() || !n.is_integer() || p.sign() < 0 || n.sign() < 0 || (!p.is_zero() && !n.is_zero()) ||
        !p.is_small() || !n.is_small()) {
      throw std::domain_error("cm rnn: malformed counter encoding");
    }
    c.counters.push_back(p.num().get_si() - n.num().get_si());
  }
  return c;
}

CmRnn cm_to_mlp_rnn(const CounterMachine& m, std::int64_t counter_bound) {
  if (counter_bound < 0) throw std::invalid_argument("cm rnn: negative counter bound");
  const std::size_t nq = m.states(), ns = m.symbols(), k = m.counters();
  const Rational big(counter_bound + 1);

  MlpBuilder b(nq + 2 * k + ns);
  // mask: |c| scaled by 3, then 1 − ReLU(3c) − ReLU(−3c)
  auto q = carry_all(b, range(0, nq));
  auto x = carry_all(b, range(nq + 2 * k, ns));
  auto cp = carry_all(b, range(nq, k));
  auto cn = carry_all(b, range(nq + k, k));
  std::vector<std::size_t> pos(k), neg(k);
  for (std::size_t i = 0; i < k; ++i) {
    pos[i] = b.add({{nq + i, 3}, {nq + k + i, -3}});
    neg[i] = b.add({{nq + i, -3}, {nq + k + i, 3}});
  }
  b.next_layer();
  q = carry_all(b, q);
  x = carry_all(b, x);
  cp = carry_all(b, cp);
  cn = carry_all(b, cn);
  std::vector<std::size_t> zero(k);
  for (std::size_t i = 0; i < k; ++i) zero[i] = b.add({{pos[i], -1}, {neg[i], -1}}, 1);
  b.next_layer();

  // tables
  const auto keys = add_key_units(b, q, x, zero);
  cp = carry_all(b, cp);
  cn = carry_all(b, cn);
  b.next_layer();

  // branches: next state, op one-hots, and c + δ split into signed parts
  std::vector<Terms> next_terms(nq);
  std::vector<std::vector<Terms>> op_terms(k, std::vector<Terms>(kCounterOps));
  for (std::size_t qi = 0; qi < nq; ++qi) {
    for (std::size_t xi = 0; xi < ns; ++xi) {
      for (std::size_t mask = 0; mask < m.masks(); ++mask) {
        const auto unit = keys.unit[(qi * ns + xi) * m.masks() + mask];
        const auto& a = m.action(qi, xi, mask);
        next_terms[a.next].emplace_back(unit, 1);
        for (std::size_t i = 0; i < k; ++i) op_terms[i][static_cast<std::size_t>(a.ops[i])].emplace_back(unit, 1);
      }
    }
  }
  std::vector<std::size_t> next(nq);
  for (std::size_t qi = 0; qi < nq; ++qi) next[qi] = b.add(std::move(next_terms[qi]));
  constexpr CounterOp kept_ops[] = {CounterOp::keep, CounterOp::inc, CounterOp::dec};
  std::vector<std::vector<std::size_t>> u(k), bp(k), bn(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (auto op : kept_ops) {
      const std::int64_t delta = op == CounterOp::inc ? 1 : op == CounterOp::dec ? -1 : 0;
      u[i].push_back(b.add(std::move(op_terms[i][static_cast<std::size_t>(op)])));
      bp[i].push_back(b.add({{cp[i], 1}, {cn[i], -1}}, Rational(delta)));
      bn[i].push_back(b.add({{cp[i], -1}, {cn[i], 1}}, Rational(-delta)));
    }
  }
  b.next_layer();

  // selector; a reset selects no branch and leaves zero
  next = carry_all(b, next);
  std::vector<std::vector<std::size_t>> gp(k), gn(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t o = 0; o < 3; ++o) {
      gp[i].push_back(b.add({{bp[i][o], 1}, {u[i][o], big}}, -big));
      gn[i].push_back(b.add({{bn[i][o], 1}, {u[i][o], big}}, -big));
    }
  }
  b.next_layer();
  for (auto n : next) b.add({{n, 1}});
  for (std::size_t i = 0; i < k; ++i) {
    Terms t;
    for (auto g : gp[i]) t.emplace_back(g, 1);
    b.add(std::move(t));
  }
  for (std::size_t i = 0; i < k; ++i) {
    Terms t;
    for (auto g : gn[i]) t.emplace_back(g, 1);
    b.add(std::move(t));
  }

  CmRnn out;
  out.states = nq;
  out.counters = k;
  out.rnn.state_dim = nq + 2 * k;
  out.rnn.input_dim = ns;
  out.rnn.initial = RVector::unit(nq + 2 * k, m.start());
  out.rnn.update = b.build();

  MlpBuilder acc(nq + 2 * k);
  auto aq = carry_all(acc, range(0, nq));
  std::vector<std::size_t> apos(k), aneg(k);
  for (std::size_t i = 0; i < k; ++i) {
    apos[i] = acc.add({{nq + i, 3}, {nq + k + i, -3}});
    aneg[i] = acc.add({{nq + i, -3}, {nq + k + i, 3}});
  }
  acc.next_layer();
  aq = carry_all(acc, aq);
  std::vector<std::size_t> az(k);
  for (std::size_t i = 0; i < k; ++i) az[i] = acc.add({{apos[i], -1}, {aneg[i], -1}}, 1);
  acc.next_layer();
  const auto akeys = add_key_units(acc, aq, {}, az);
  acc.next_layer();
  Terms accept_terms;
  for (std::size_t qi = 0; qi < nq; ++qi) {
    for (std::size_t mask = 0; mask < m.masks(); ++mask) {
      if (m.accepting(qi, mask)) accept_terms.emplace_back(akeys.unit[qi * m.masks() + mask], 1);
    }
  }
  acc.add(std::move(accept_terms));
  out.rnn.acceptor = acc.build();
  out.rnn.validate();
  return out;
}

SmRnn::Config SmRnn::decode(const RVector& h) const {
  if (h.size() != states + stacks) throw DimensionError("sm rnn: state dimension");
  Config c{hot_index(h, states), {}};
  for (std::size_t i = 0; i < stacks; ++i) c.stacks.push_back(h[states + i]);
  return c;
}

SmRnn sm_to_mlp_rnn(const StackMachine& m, std::size_t max_depth) {
  const std::size_t nq = m.states(), ns = m.symbols(), k = m.stacks();
  const Rational inv = Rational(mpz_class(1) << static_cast<mp_bitcnt_t>(max_depth));
  const Rational big(4);  // every branch value lies in [0, 4)

  MlpBuilder b(nq + k + ns);
  auto q = carry_all(b, range(0, nq));
  auto x = carry_all(b, range(nq + k, ns));
  auto s = carry_all(b, range(nq, k));
  std::vector<std::size_t> above(k), at_or_above(k), below(k);
  for (std::size_t i = 0; i < k; ++i) {
    at_or_above[i] = b.add({{nq + i, inv}}, Rational(1) - inv);
    above[i] = b.add({{nq + i, inv}}, -inv);
    below[i] = b.add({{nq + i, -inv}}, inv);
  }
  b.next_layer();
  q = carry_all(b, q);
  x = carry_all(b, x);
  s = carry_all(b, s);
  std::vector<std::size_t> head(k), empty(k);
  for (std::size_t i = 0; i < k; ++i) {
    head[i] = b.add({{at_or_above[i], 1}, {above[i], -1}});
    empty[i] = b.add({{above[i], -1}, {below[i], -1}}, 1);
  }
  b.next_layer();

  const auto keys = add_key_units(b, q, x, head);
  s = carry_all(b, s);
  head = carry_all(b, head);
  empty = carry_all(b, empty);
  b.next_layer();

  std::vector<Terms> next_terms(nq);
  std::vector<std::vector<Terms>> op_terms(k, std::vector<Terms>(kStackOps));
  for (std::size_t qi = 0; qi < nq; ++qi) {
    for (std::size_t xi = 0; xi < ns; ++xi) {
      for (std::size_t mask = 0; mask < m.masks(); ++mask) {
        const auto unit = keys.unit[(qi * ns + xi) * m.masks() + mask];
        const auto& a = m.action(qi, xi, mask);
        next_terms[a.next].emplace_back(unit, 1);
        for (std::size_t i = 0; i < k; ++i) op_terms[i][static_cast<std::size_t>(a.ops[i])].emplace_back(unit, 1);
      }
    }
  }
  std::vector<std::size_t> next(nq);
  for (std::size_t qi = 0; qi < nq; ++qi) next[qi] = b.add(std::move(next_terms[qi]));
  // per stack: u (4 ops), head, empty, and branch values push0 push1 pop0 pop1 noop
  struct StackUnits {
    std::array<std::size_t, kStackOps> u;
    std::size_t head, empty;
    std::array<std::size_t, 5> value;
  };
  std::vector<StackUnits> su(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t o = 0; o < kStackOps; ++o) su[i].u[o] = b.add(std::move(op_terms[i][o]));
    su[i].head = b.carry(head[i]);
    su[i].empty = b.carry(empty[i]);
    su[i].value[0] = b.add({{s[i], Rational(1, 2)}});
    su[i].value[1] = b.add({{s[i], Rational(1, 2)}}, 1);
    su[i].value[2] = b.add({{s[i], 2}});
    su[i].value[3] = b.add({{s[i], 2}}, -2);
    su[i].value[4] = b.carry(s[i]);
  }
  b.next_layer();

  next = carry_all(b, next);
  struct Selected {
    std::array<std::size_t, 6> flag;  // push0 push1 pop0 pop1 noop noop-on-empty-pop
    std::array<std::size_t, 5> value;
  };
  std::vector<Selected> sel(k);
  const auto op = [](StackOp o) { return static_cast<std::size_t>(o); };
  for (std::size_t i = 0; i < k; ++i) {
    const auto& t = su[i];
    sel[i].flag[0] = b.carry(t.u[op(StackOp::push0)]);
    sel[i].flag[1] = b.carry(t.u[op(StackOp::push1)]);
    sel[i].flag[2] = b.add({{t.u[op(StackOp::pop)], 1}, {t.head, -1}});
    sel[i].flag[3] = b.add({{t.u[op(StackOp::pop)], 1}, {t.head, 1}, {t.empty, -1}}, -1);
    sel[i].flag[4] = b.carry(t.u[op(StackOp::noop)]);
    sel[i].flag[5] = b.add({{t.u[op(StackOp::pop)], 1}, {t.empty, 1}}, -1);
    for (std::size_t v = 0; v < 5; ++v) sel[i].value[v] = b.carry(t.value[v]);
  }
  b.next_layer();

  next = carry_all(b, next);
  std::vector<std::vector<std::size_t>> gated(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t v = 0; v < 4; ++v) {
      gated[i].push_back(b.add({{sel[i].value[v], 1}, {sel[i].flag[v], big}}, -big));
    }
    gated[i].push_back(b.add({{sel[i].value[4], 1}, {sel[i].flag[4], big}, {sel[i].flag[5], big}}, -big));
  }
  b.next_layer();
  for (auto n : next) b.add({{n, 1}});
  for (std::size_t i = 0; i < k; ++i) {
    Terms t;
    for (auto g : gated[i]) t.emplace_back(g, 1);
    b.add(std::move(t));
  }

  SmRnn out;
  out.states = nq;
  out.stacks = k;
  out.rnn.state_dim = nq + k;
  out.rnn.input_dim = ns;
  out.rnn.initial = RVector::unit(nq + k, m.start());
  for (std::size_t i = 0; i < k; ++i) out.rnn.initial[nq + i] = stack_empty();
  out.rnn.update = b.build();

  MlpBuilder acc(nq + k);
  Terms accept_terms;
  for (std::size_t qi = 0; qi < nq; ++qi) {
    if (m.accepting(qi)) accept_terms.emplace_back(qi, 1);
  }
  acc.add(std::move(accept_terms));
  out.rnn.acceptor = acc.build();
  out.rnn.validate();
  return out;
}

}  // namespace rnnlab
