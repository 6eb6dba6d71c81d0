#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rnnlab/rwkv_gadgets.hpp"

using namespace rnnlab;

namespace {

Rational weight(Rng& rng) { return Rational(rng.uniform(-3, 3), 2); }

RVector random_vector(Rng& rng, std::size_t n) {
  RVector v(n);
  for (auto& x : v) x = weight(rng);
  return v;
}

RMatrix random_matrix(Rng& rng, std::size_t n) {
  RMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = weight(rng);
  }
  return m;
}

// f(w_1..w_t) by explicit row-vector propagation, t = 0..|w|
std::vector<Rational> prefix_values(const Wfa& a, const Word& w) {
  std::vector<Rational> out;
  RVector row = a.initial;
  out.push_back(dot(row, a.final));
  for (auto s : w) {
    RVector next(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      for (std::size_t i = 0; i < row.size(); ++i) next[j] += row[i] * a.transitions[s](i, j);
    }
    row = std::move(next);
    out.push_back(dot(row, a.final));
  }
  return out;
}

RMatrix product_of(const std::vector<RMatrix>& ms) {
  RMatrix p = RMatrix::identity(3);
  for (const auto& m : ms) p = p * m;
  return p;
}

}  // namespace

TEST_CASE("overwrite gadget") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 2 + rng.index(5);
    Overwrite u{rng.index(d), random_vector(rng, d)};
    u.coeffs[u.dst] = Rational();
    const RMatrix m = overwrite_matrix(u);
    RVector r = random_vector(rng, d);
    const RVector r0 = r;
    overwrite_apply_row(r, u);
    REQUIRE(r == row_apply(r0, m));
    for (std::size_t k = 0; k < d; ++k) REQUIRE(r[k] == (k == u.dst ? dot(r0, u.coeffs) : r0[k]));
    RVector v = r0;
    overwrite_apply_col(v, u);
    REQUIRE(v == mat_vec(m, r0));
    const LinStep ls = rwkv_transition(rwkv_params_for_overwrite(u));
    REQUIRE(ls.transition == m);
    REQUIRE(ls.input == RMatrix(d, d));
  }
  Overwrite bad{0, RVector{1, 0}};
  CHECK_THROWS_AS(rwkv_params_for_overwrite(bad), std::invalid_argument);
}

TEST_CASE("overwrite factors apply a matrix to both halves") {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng.index(4);
    const RMatrix p = random_matrix(rng, n);
    const auto factors = factor_apply_matrix(p);
    REQUIRE(factors.size() == 2 * n);
    RVector x = random_vector(rng, n);
    RVector state = concat(x, random_vector(rng, n));
    for (const auto& f : factors) overwrite_apply_row(state, f);
    const RVector xp = row_apply(x, p);
    REQUIRE(state == concat(xp, xp));
  }
}

TEST_CASE("window tracker and block split") {
  WindowTracker<int> tr(4, 4);
  CHECK_THROWS(WindowTracker<int>(0, 1));
  tr.push(7);
  auto v = split_blocks(tr.key(), 2);
  CHECK(v.offset == 1);
  CHECK(v.first_position);
  CHECK(v.current == std::vector<int>{7});
  CHECK_FALSE(v.previous.has_value());
  for (int x : {8, 9}) tr.push(x);
  v = split_blocks(tr.key(), 2);
  CHECK(v.offset == 1);
  CHECK(v.current == std::vector<int>{9});
  CHECK(v.previous == std::vector<int>{7, 8});
  tr.push(10);
  v = split_blocks(tr.key(), 2);
  CHECK(v.offset == 2);
  CHECK(v.current == std::vector<int>{9, 10});
  CHECK(v.previous == std::vector<int>{7, 8});
}

TEST_CASE("rwkv wfa net reproduces every prefix value") {
  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 1 + rng.index(3), sigma = 1 + rng.index(3);
    const Wfa a = random_wfa(rng, n, sigma);
    const RwkvWfaNet net(a);
    const Word w = random_word(rng, sigma, 3 * net.block() + rng.index(net.block()));
    const auto want = prefix_values(a, w);
    const auto got = rwkv_wfa_forward(net, w);
    REQUIRE(got.size() == w.size());
    for (std::size_t t = 0; t < w.size(); ++t) REQUIRE(got[t] == want[t + 1]);
  }
}

TEST_CASE("rwkv wfa net is an lrnn with right action") {
  Rng rng(4);
  const Wfa a = random_wfa(rng, 2, 2);
  const RwkvWfaNet net(a);
  const Word w = random_word(rng, 2, 30);
  const auto tr = net.forward(w, true);
  std::vector<LinStep> steps;
  for (const auto& s : tr.steps) steps.push_back(rwkv_transition(s));
  const RMatrix zero(net.dim(), net.dim());
  CHECK(lrnn_run_sequential(steps, zero, Action::right) == tr.states);
  CHECK(lrnn_run_scan(steps, zero, Action::right).states == tr.states);
}

TEST_CASE("routes are a pure function of the key") {
  Rng rng(5);
  const Wfa a = random_wfa(rng, 2, 2);
  const RwkvWfaNet net(a);
  WindowTracker<Symbol> tracker(net.period(), net.window());
  for (auto s : random_word(rng, 2, 20)) {
    tracker.push(s);
    const auto r1 = net.route(tracker.key());
    const auto r2 = RwkvWfaNet(a).route(tracker.key());
    REQUIRE(r1.completion == r2.completion);
    REQUIRE(rwkv_transition(r1.step).transition == rwkv_transition(r2.step).transition);
  }
  CHECK_THROWS_AS(net.forward(Word{5}), std::out_of_range);
}

TEST_CASE("3x3 block embedding") {
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const RMatrix x = random_matrix(rng, 3), a = random_matrix(rng, 3);
    RVector vx(9), vxa(9);
    const RMatrix xa = x * a;
    for (std::size_t k = 0; k < 9; ++k) {
      vx[k] = x(k / 3, k % 3);
      vxa[k] = xa(k / 3, k % 3);
    }
    REQUIRE(row_apply(vx, imm_block_matrix(a)) == vxa);
  }
  const std::vector<RMatrix> ms{RMatrix{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}};
  CHECK(imm_matrices(imm_stream(ms)) == ms);
  CHECK_THROWS(imm_matrices(std::vector<Rational>(4)));
}

TEST_CASE("rwkv iterated multiplication is exact on every prefix") {
  Rng rng(7);
  const RwkvImmNet net;
  for (int i = 0; i < 15; ++i) {
    std::vector<Rational> stream(9 * (1 + rng.index(12)));
    for (auto& x : stream) x = Rational(rng.uniform(-1, 1));
    const auto mats = imm_matrices(stream);
    for (std::size_t k = 1; k <= mats.size(); ++k) {
      const std::vector<Rational> prefix(stream.begin(), stream.begin() + static_cast<std::ptrdiff_t>(9 * k));
      REQUIRE(rwkv_imm_forward(net, prefix) == product_of({mats.begin(), mats.begin() + static_cast<std::ptrdiff_t>(k)}));
    }
  }
  CHECK_THROWS_AS(net.forward(std::vector<Rational>(10)), std::invalid_argument);
}

TEST_CASE("each rwkv multiplication step rewrites at most one coordinate") {
  Rng rng(8);
  const RwkvImmNet net;
  std::vector<Rational> stream(9 * 6);
  for (auto& x : stream) x = Rational(rng.uniform(-1, 1));
  const auto tr = net.forward(stream);
  REQUIRE(tr.rows.size() == stream.size());
  for (std::size_t t = 1; t < tr.rows.size(); ++t) {
    std::size_t changed = 0;
    for (std::size_t k = 0; k < RwkvImmNet::kDim; ++k) changed += tr.rows[t][k] != tr.rows[t - 1][k];
    REQUIRE(changed <= 1);
    REQUIRE(tr.routes[t].active_half < 2);
  }
}
