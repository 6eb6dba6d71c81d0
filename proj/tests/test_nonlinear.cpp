#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rnnlab/conn.hpp"
#include "rnnlab/mlp_rnn.hpp"
#include "rnnlab/wfa.hpp"

using namespace rnnlab;

namespace {

Rational eval1(const ReluMlp& net, const Rational& x) { return net.forward(RVector{x})[0]; }

CounterMachine random_counter_machine(Rng& rng, std::size_t states, std::size_t symbols, std::size_t counters) {
  CounterMachine m(states, symbols, counters, rng.index(states));
  for (std::size_t q = 0; q < states; ++q) {
    for (std::size_t mask = 0; mask < m.masks(); ++mask) {
      m.set_accepting(q, mask, rng.bernoulli(0.5));
      for (std::size_t s = 0; s < symbols; ++s) {
        CmAction a{rng.index(states), std::vector<CounterOp>(counters)};
        for (auto& op : a.ops) op = static_cast<CounterOp>(rng.index(kCounterOps));
        m.set(q, s, mask, a);
      }
    }
  }
  return m;
}

void require_cm_trace(const CounterMachine& m, const Word& w) {
  const auto net = cm_to_mlp_rnn(m, static_cast<std::int64_t>(w.size()));
  const auto want = cm_run(m, w);
  const auto got = run_mlp_rnn(net.rnn, std::span<const std::size_t>(w));
  REQUIRE(got.states.size() == w.size() + 1);
  for (std::size_t t = 0; t <= w.size(); ++t) {
    REQUIRE(net.decode(got.states[t]) == CmRnn::Config{want.states[t], want.counters[t]});
  }
  REQUIRE(got.accept == want.accept);
}

void require_sm_trace(const StackMachine& m, const Word& w) {
  const auto net = sm_to_mlp_rnn(m, std::max<std::size_t>(w.size(), 1));
  const auto want = sm_run(m, w);
  const auto got = run_mlp_rnn(net.rnn, std::span<const std::size_t>(w));
  for (std::size_t t = 0; t <= w.size(); ++t) {
    REQUIRE(net.decode(got.states[t]) == SmRnn::Config{want.states[t], want.stacks[t]});
  }
  REQUIRE(got.accept == want.accept);
}

}  // namespace

TEST_CASE("relu mlp evaluates layer by layer") {
  const ReluMlp net({DenseLayer{RMatrix{{1, -1}, {-1, 1}}, RVector{0, 0}}, DenseLayer{RMatrix{{1, 1}}, RVector{2}}});
  // |a - b| + 2
  CHECK(net.forward(RVector{5, 3})[0] == Rational(4));
  CHECK(net.forward(RVector{Rational(1, 2), 3})[0] == Rational(9, 2));
  CHECK(net.input_dim() == 2);
  CHECK(net.output_dim() == 1);
  CHECK(net.hidden_units() == 2);
  PrecisionMeter meter;
  net.forward(RVector{5, 3}, &meter);
  CHECK(meter.report().values == 3);
  CHECK_THROWS(net.forward(RVector{1}));
  CHECK_THROWS(ReluMlp({DenseLayer{RMatrix(2, 2), RVector(2)}, DenseLayer{RMatrix(1, 3), RVector(1)}}));
}

TEST_CASE("builder wiring") {
  MlpBuilder b(2);
  const auto neg = b.add({{0, Rational(-1)}});
  const auto pos = b.add({{0, Rational(1)}, {1, Rational(1)}}, Rational(-1));
  b.next_layer();
  b.add({{neg, Rational(1)}, {pos, Rational(2)}});
  const auto net = b.build();
  CHECK(net.forward(RVector{-3, 0})[0] == Rational(3));
  CHECK(net.forward(RVector{2, 2})[0] == Rational(6));
}

TEST_CASE("threshold gadget") {
  const auto g = gadget_threshold(Rational(2), Rational(1, 4));
  for (int k = -40; k <= 40; ++k) {
    const Rational x(k, 8);
    if (x > Rational(7, 4) && x < Rational(2)) continue;
    REQUIRE(eval1(g, x) == Rational(x >= Rational(2) ? 1 : 0));
  }
}

TEST_CASE("eq-zero gadget") {
  const auto g = gadget_eq_zero();
  CHECK(g.layers().size() == 3);
  CHECK(eval1(g, Rational()) == Rational(1));
  CHECK(eval1(g, Rational(1)) == Rational());
  CHECK(eval1(g, Rational(-1)) == Rational());
  for (int k = -60; k <= 60; ++k) {
    const Rational x(k, 6);
    if (k != 0 && abs(x) < Rational(1, 3)) continue;
    REQUIRE(eval1(g, x) == Rational(k == 0 ? 1 : 0));
  }
  const auto fine = gadget_eq_zero(Rational(1, 1024));
  CHECK(eval1(fine, Rational(1, 1024)) == Rational());
  CHECK(eval1(fine, Rational()) == Rational(1));
}

TEST_CASE("lookup gadget reproduces an arbitrary table") {
  Rng rng(1);
  const std::vector<std::size_t> groups{3, 4};
  std::vector<RVector> table(12);
  for (auto& row : table) row = RVector{Rational(rng.uniform(-5, 5), 3), Rational(rng.uniform(-5, 5))};
  const auto g = gadget_lookup(groups, 2, [&](std::span<const std::size_t> key) { return table[4 * key[0] + key[1]]; });
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      RVector x(7);
      x[a] = Rational(1);
      x[3 + b] = Rational(1);
      REQUIRE(g.forward(x) == table[4 * a + b]);
    }
  }
}

TEST_CASE("select gadget") {
  const Rational bound(10);
  const auto g = gadget_select(3, 2, bound);
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const std::size_t hot = rng.index(3);
    RVector x(3 + 6);
    x[hot] = Rational(1);
    for (std::size_t k = 3; k < 9; ++k) x[k] = Rational(rng.uniform(0, 40), 4);
    REQUIRE(g.forward(x) == RVector{x[3 + 2 * hot], x[4 + 2 * hot]});
  }
}

TEST_CASE("counter machine rnn replays random machines") {
  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    const auto m = random_counter_machine(rng, 1 + rng.index(4), 1 + rng.index(3), 1 + rng.index(3));
    require_cm_trace(m, random_word(rng, m.symbols(), rng.index(40)));
  }
}

TEST_CASE("counter machine rnn edge cases") {
  // a machine that only ever keeps
  CounterMachine keep(2, 2, 2, 1);
  keep.set_accepting(1, 0b11, true);
  require_cm_trace(keep, Word{0, 1, 1, 0});
  CHECK(run_mlp_rnn(cm_to_mlp_rnn(keep, 4).rnn, std::span<const std::size_t>(Word{0, 1})).accept);

  // a machine with no accepting pair never accepts
  CounterMachine none(1, 1, 1, 0);
  none.set_all_masks(0, 0, {0, {CounterOp::inc}});
  CHECK_FALSE(run_mlp_rnn(cm_to_mlp_rnn(none, 8).rnn, std::span<const std::size_t>(Word{0, 0, 0})).accept);

  // counters swing negative and get reset
  CounterMachine swing(1, 3, 1, 0);
  swing.set_all_masks(0, 0, {0, {CounterOp::inc}});
  swing.set_all_masks(0, 1, {0, {CounterOp::dec}});
  swing.set_all_masks(0, 2, {0, {CounterOp::zero}});
  swing.set_accepting(0, 1, true);
  require_cm_trace(swing, Word{1, 1, 1, 2, 0, 0, 1, 2, 1, 0});

  const auto net = cm_to_mlp_rnn(swing, 4);
  CHECK_THROWS_AS(net.decode(RVector{Rational(1, 2), 0, 0}), std::domain_error);
}

TEST_CASE("counter machine rnn on connectivity inputs") {
  const auto cm = build_conn_counter_machine();
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto inst = random_sorted_instance(rng, 12);
    Word w;
    for (auto t : encode_conn_unary(inst)) w.push_back(static_cast<std::size_t>(t));
    require_cm_trace(cm, w);
  }
}

TEST_CASE("stack machine rnn replays random machines") {
  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    const auto m = random_stack_machine(rng, 1 + rng.index(4), 1 + rng.index(3), 1 + rng.index(2));
    require_sm_trace(m, random_word(rng, m.symbols(), rng.index(30)));
  }
}

TEST_CASE("stack machine rnn push then pop") {
  StackMachine m(1, 2, 1, 0);
  for (std::size_t mask = 0; mask < m.masks(); ++mask) {
    m.set(0, 0, mask, SmAction{0, {StackOp::push1}});
    m.set(0, 1, mask, SmAction{0, {StackOp::pop}});
  }
  m.set_accepting(0, true);
  const Word w{0, 0, 0, 1, 1, 1, 1};
  require_sm_trace(m, w);
  const auto net = sm_to_mlp_rnn(m, w.size());
  const auto run = run_mlp_rnn(net.rnn, std::span<const std::size_t>(w));
  CHECK(net.decode(run.states[3]).stacks[0] == Rational(1) + Rational(1, 2) + Rational(1, 4) + Rational(1, 8));
  CHECK(net.decode(run.states.back()).stacks[0] == stack_empty());
}

TEST_CASE("stack machine rnn on a padded stream") {
  Rng rng(6);
  const auto m = random_stack_machine(rng, 3, 2, 2);
  const auto padded = pad_stack_machine(m);
  const auto w = pad_word(random_word(rng, 2, 15), 2, 1);
  require_sm_trace(padded, w);
}

TEST_CASE("explicit vector inputs") {
  CounterMachine keep(1, 2, 1, 0);
  keep.set_accepting(0, 1, true);
  const auto net = cm_to_mlp_rnn(keep, 2);
  const std::vector<RVector> xs{RVector{1, 0}, RVector{0, 1}};
  const auto r = run_mlp_rnn(net.rnn, std::span<const RVector>(xs));
  CHECK(r.accept);
  CHECK(r.precision.max_value_bits >= 1);
  const std::vector<RVector> wrong{RVector{1, 0, 0}};
  CHECK_THROWS(run_mlp_rnn(net.rnn, std::span<const RVector>(wrong)));
}
