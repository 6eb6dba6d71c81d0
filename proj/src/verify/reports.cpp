#include "rnnlab/reports.hpp"

#include <cmath>
#include <stdexcept>

#include "rnnlab/conn.hpp"
#include "rnnlab/counter_machine.hpp"
#include "rnnlab/mlp_rnn.hpp"
#include "rnnlab/random.hpp"
#include "rnnlab/stack_machine.hpp"
#include "rnnlab/wfa.hpp"

namespace rnnlab {

DepthRow depth_of_trace(std::span<const LinStep> steps) {
  if (steps.empty()) return {};
  const auto& a = steps.front().transition;
  const RMatrix s0(a.rows(), steps.front().input.cols());
  const auto res = lrnn_run_scan(steps, s0);
  return {steps.size(), res.stats.depth, steps.size()};
}

std::vector<DepthRow> depth_report(std::span<const std::size_t> lengths, std::uint64_t seed, std::size_t dim) {
  std::vector<DepthRow> rows;
  for (auto n : lengths) {
    Rng rng(child_seed(seed, n));
    std::vector<LinStep> steps;
    steps.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      RMatrix a(dim, dim), b(dim, dim);
      for (std::size_t r = 0; r < dim; ++r) {
        // diagonal-ish entries keep the exact values small over long traces
        a(r, r) = rng.bernoulli(0.5) ? Rational(1) : Rational(-1);
        b(r, rng.index(dim)) = Rational(static_cast<std::int64_t>(rng.index(3)) - 1);
      }
      steps.push_back({std::move(a), std::move(b)});
    }
    rows.push_back(depth_of_trace(steps));
  }
  return rows;
}

PrecisionRow conn_precision(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> best;
  for (std::size_t nodes = 1;; ++nodes) {
    Rng rng(child_seed(seed, nodes));
    const auto tokens = encode_conn_unary(gen_conn(rng, nodes, 0.5, true));
    if (tokens.size() > n) break;
    best.clear();
    for (auto t : tokens) best.push_back(static_cast<std::size_t>(t));
  }
  if (best.empty()) throw std::invalid_argument("conn precision: n is below the smallest instance");
  const auto cm = build_conn_counter_machine();
  const auto net = cm_to_mlp_rnn(cm, static_cast<std::int64_t>(n));
  const auto run = run_mlp_rnn(net.rnn, std::span<const std::size_t>(best));
  return {n, best.size(), run.precision.max_value_bits};
}

PrecisionRow stack_precision(std::size_t n, std::uint64_t seed) {
  StackMachine m(1, 2, 2, 0);
  for (std::size_t sym = 0; sym < 2; ++sym) {
    for (std::size_t mask = 0; mask < m.masks(); ++mask) {
      m.set(0, sym, mask, SmAction{0, {sym ? StackOp::push1 : StackOp::push0, StackOp::noop}});
    }
  }
  m.set_accepting(0, true);
  Rng rng(child_seed(seed, n));
  const auto w = random_word(rng, 2, n);
  const auto net = sm_to_mlp_rnn(m, n);
  const auto run = run_mlp_rnn(net.rnn, std::span<const std::size_t>(w));
  return {n, n, run.precision.max_value_bits};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit: need at least two points");
  const double k = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = k * sxx - sx * sx;
  if (den == 0) throw std::invalid_argument("fit: degenerate abscissae");
  const double slope = (k * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / k};
}

LineFit fit_log2(std::span<const PrecisionRow> rows) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(std::log2(static_cast<double>(r.n)));
    y.push_back(static_cast<double>(r.max_value_bits));
  }
  return fit_line(x, y);
}

}  // namespace rnnlab
