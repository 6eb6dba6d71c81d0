#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rnnlab/conn.hpp"
#include "rnnlab/counter_machine.hpp"
#include "rnnlab/hankel.hpp"
#include "rnnlab/stack_machine.hpp"
#include "rnnlab/wfa.hpp"

using namespace rnnlab;

namespace {

// Sum over every state path, weight α[q0]·Π M_{w_t}[q_{t-1}][q_t]·ω[q_T].
Rational path_sum(const Wfa& a, const Word& w, std::size_t t, std::size_t q, const Rational& acc) {
  if (acc.is_zero()) return Rational();
  if (t == w.size()) return acc * a.final[q];
  Rational total;
  for (std::size_t r = 0; r < a.states(); ++r) total += path_sum(a, w, t + 1, r, acc * a.transitions[w[t]](q, r));
  return total;
}

Rational path_sum(const Wfa& a, const Word& w) {
  Rational total;
  for (std::size_t q = 0; q < a.states(); ++q) total += path_sum(a, w, 0, q, a.initial[q]);
  return total;
}

std::vector<std::size_t> as_symbols(const std::vector<ConnToken>& toks) {
  std::vector<std::size_t> w;
  for (auto t : toks) w.push_back(static_cast<std::size_t>(t));
  return w;
}

}  // namespace

TEST_CASE("wfa evaluation equals the path-sum oracle") {
  Rng rng(1);
  for (int i = 0; i < 150; ++i) {
    const std::size_t n = 1 + rng.index(3), sigma = 1 + rng.index(3);
    const Wfa a = random_wfa(rng, n, sigma);
    const Word w = random_word(rng, sigma, rng.index(7));
    REQUIRE(wfa_eval(a, w) == path_sum(a, w));
    const auto prefixes = wfa_eval_prefixes(a, w);
    REQUIRE(prefixes.size() == w.size() + 1);
    for (std::size_t t = 0; t <= w.size(); ++t) {
      REQUIRE(prefixes[t] == path_sum(a, Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(t))));
    }
  }
}

TEST_CASE("wfa empty word and validation") {
  const Wfa a{RVector{1, 2}, {RMatrix{{0, 1}, {1, 0}}}, RVector{3, 4}};
  CHECK(wfa_eval(a, Word{}) == Rational(11));
  CHECK(wfa_eval(a, Word{0}) == Rational(1 * 4 + 2 * 3));
  CHECK_THROWS_AS(wfa_eval(a, Word{1}), std::out_of_range);
  const Wfa bad{RVector{1, 2}, {RMatrix{{1}}}, RVector{1, 1}};
  CHECK_THROWS_AS(bad.validate(), DimensionError);
}

TEST_CASE("determinism is one successor per state and symbol") {
  const Wfa det{RVector{1, 0}, {RMatrix{{0, 2}, {1, 0}}}, RVector{1, 1}};
  CHECK(wfa_is_deterministic(det));
  const Wfa fork{RVector{1, 0}, {RMatrix{{1, 1}, {0, 0}}}, RVector{1, 1}};
  CHECK_FALSE(wfa_is_deterministic(fork));
  const Wfa two_starts{RVector{1, 1}, {RMatrix::identity(2)}, RVector{1, 1}};
  CHECK_FALSE(wfa_is_deterministic(two_starts));
}

TEST_CASE("counter machine basics") {
  CHECK(apply_counter_op(CounterOp::zero, 7) == 0);
  CHECK(apply_counter_op(CounterOp::dec, 0) == -1);
  CHECK(zero_mask(std::vector<std::int64_t>{0, 3, 0}) == 0b101);

  // a^n b^n with one counter: state 0 reading a's, 1 reading b's, 2 dead
  CounterMachine m(3, 2, 1, 0);
  m.set_all_masks(0, 0, {0, {CounterOp::inc}});
  m.set_all_masks(0, 1, {1, {CounterOp::dec}});
  m.set_all_masks(1, 0, {2, {CounterOp::keep}});
  m.set_all_masks(1, 1, {1, {CounterOp::dec}});
  m.set_all_masks(2, 0, {2, {CounterOp::keep}});
  m.set_all_masks(2, 1, {2, {CounterOp::keep}});
  m.set_accepting(0, 1, true);
  m.set_accepting(1, 1, true);
  auto accepts = [&](std::vector<std::size_t> w) { return cm_run(m, w).accept; };
  CHECK(accepts({}));
  CHECK(accepts({0, 0, 1, 1}));
  CHECK_FALSE(accepts({0, 1, 1}));
  CHECK_FALSE(accepts({0, 1, 0, 1}));
  const auto tr = cm_run(m, std::vector<std::size_t>{0, 0, 1});
  CHECK(tr.counters.back() == std::vector<std::int64_t>{1});
  CHECK(tr.states.size() == 4);
  CHECK_THROWS_AS(cm_run(m, std::vector<std::size_t>{2}), std::out_of_range);
}

TEST_CASE("connectivity counter machine matches the chain and BFS oracles") {
  const auto cm = build_conn_counter_machine();
  Rng rng(9);
  for (int i = 0; i < 300; ++i) {
    const auto inst = random_sorted_instance(rng, 40);
    REQUIRE(inst.target_is_sink());
    const bool chain = conn_oracle(inst);
    const DetGraph g{inst.n, inst.edges};
    REQUIRE(chain == det_graph_reachable(g, inst.source, inst.target));
    REQUIRE(cm_run(cm, as_symbols(encode_conn_unary(inst))).accept == chain);
  }
}

TEST_CASE("connectivity machine hand examples") {
  const auto cm = build_conn_counter_machine();
  auto run = [&](SortedConnInstance inst) { return cm_run(cm, as_symbols(encode_conn_unary(inst))).accept; };
  CHECK(run({1, 1, 1, {}}));
  CHECK(run({5, 1, 5, {{1, 3}, {3, 5}}}));
  CHECK_FALSE(run({3, 1, 3, {{2, 3}}}));
  CHECK(run({4, 0, 4, {{0, 2}, {2, 4}}}));
  CHECK_FALSE(run({4, 0, 4, {{0, 1}, {2, 4}}}));
  CHECK(!dump_counter_machine(cm).empty());
}

TEST_CASE("stack encoding formulas") {
  CHECK(stack_empty() == Rational(1));
  CHECK(stack_is_empty(stack_empty()));
  CHECK(stack_pop(stack_empty()) == stack_empty());
  CHECK(stack_pop(stack_push(stack_empty(), true)) == stack_empty());
  CHECK(stack_pop(stack_push(stack_empty(), false)) == stack_empty());
  CHECK(stack_head(stack_push(Rational(1, 4), true)));
  CHECK_FALSE(stack_head(stack_push(Rational(3, 2), false)));

  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<bool> bits(8);
    Rational s = stack_empty();
    for (auto&& b : bits) {
      b = rng.bernoulli(0.5);
      s = stack_push(s, b);
    }
    // most recent push has weight 1, the one before 1/2, …, plus 2^-8
    Rational want(1, 256);
    for (std::size_t j = 0; j < 8; ++j) {
      if (bits[7 - j]) want += Rational(1, std::int64_t{1} << j);
    }
    REQUIRE(s == want);
    for (std::size_t j = 8; j-- > 0;) {
      REQUIRE(stack_head(s) == bits[j]);
      s = stack_pop(s);
    }
    REQUIRE(s == stack_empty());
  }
}

TEST_CASE("stack machine run and padding") {
  Rng rng(8);
  const auto m = random_stack_machine(rng, 3, 2, 2);
  const auto w = random_word(rng, 2, 30);
  const auto tr = sm_run(m, w);
  REQUIRE(tr.states.size() == 31);
  // replay by hand from the table
  std::size_t q = m.start();
  std::vector<Rational> st(2, stack_empty());
  for (std::size_t t = 0; t < w.size(); ++t) {
    const auto& a = m.action(q, w[t], head_mask(st));
    for (std::size_t i = 0; i < 2; ++i) st[i] = apply_stack_op(a.ops[i], st[i]);
    q = a.next;
    REQUIRE(tr.states[t + 1] == q);
    REQUIRE(tr.stacks[t + 1] == st);
  }
  CHECK(tr.accept == m.accepting(q));

  const auto padded = pad_stack_machine(m);
  const auto pw = pad_word(w, m.symbols(), 1);
  CHECK(pw.size() == 2 * w.size());
  const auto ptr = sm_run(padded, pw);
  CHECK(ptr.states.back() == tr.states.back());
  CHECK(ptr.stacks.back() == tr.stacks.back());
  CHECK(ptr.accept == tr.accept);
}

TEST_CASE("hankel identity block has full rank") {
  for (std::size_t k = 1; k <= 32; ++k) {
    const RMatrix h = conn_hankel_block(k);
    REQUIRE(h == RMatrix::identity(k));
    REQUIRE(hankel_identity_rank(k) == k);
  }
}
