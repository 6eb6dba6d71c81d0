#include "rnnlab/lrnn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace rnnlab {
namespace {

void check_steps(std::span<const LinStep> steps, std::size_t d) {
  for (const auto& s : steps) {
    if (s.transition.rows() != d || s.transition.cols() != d || s.input.rows() != d || s.input.cols() != d) {
      throw DimensionError("lrnn: step shape differs from state shape");
    }
  }
}

RMatrix advance(const RMatrix& s, const LinStep& step, Action action) {
  return (action == Action::left ? step.transition * s : s * step.transition) + step.input;
}

RVector read_state(const RVector& q, const RMatrix& s) { return row_apply(q, s); }

struct Node {
  LinStep step;
  std::size_t depth = 0;
};

void scan_range(std::vector<Node>& xs, std::size_t lo, std::size_t hi, Action action, ScanStats& stats) {
  if (hi - lo <= 1) return;
  const std::size_t mid = lo + (hi - lo + 1) / 2;
  scan_range(xs, lo, mid, action, stats);
  scan_range(xs, mid, hi, action, stats);
  const Node& carry = xs[mid - 1];
  for (std::size_t i = mid; i < hi; ++i) {
    xs[i].step = combine(carry.step, xs[i].step, action);
    xs[i].depth = std::max(carry.depth, xs[i].depth) + 1;
    ++stats.combines;
  }
}

}  // namespace

LinStep combine(const LinStep& earlier, const LinStep& later, Action action) {
  if (action == Action::left) {
    return {later.transition * earlier.transition, later.transition * earlier.input + later.input};
  }
  return {earlier.transition * later.transition, earlier.input * later.transition + later.input};
}

std::vector<RMatrix> lrnn_run_sequential(std::span<const LinStep> steps, const RMatrix& s0, Action action) {
  if (!s0.is_square()) throw DimensionError("lrnn: initial state must be square");
  check_steps(steps, s0.rows());
  std::vector<RMatrix> out;
  out.reserve(steps.size());
  RMatrix s = s0;
  for (const auto& step : steps) {
    s = advance(s, step, action);
    out.push_back(s);
  }
  return out;
}

ScanResult lrnn_run_scan(std::span<const LinStep> steps, const RMatrix& s0, Action action) {
  if (!s0.is_square()) throw DimensionError("lrnn: initial state must be square");
  const std::size_t d = s0.rows();
  check_steps(steps, d);
  const bool seed = !std::all_of(s0.values().begin(), s0.values().end(), [](const Rational& r) { return r.is_zero(); });
  std::vector<Node> xs;
  xs.reserve(steps.size() + 1);
  if (seed) xs.push_back({LinStep{RMatrix(d, d), s0}, 0});
  for (const auto& s : steps) xs.push_back({s, 0});

  ScanResult res;
  scan_range(xs, 0, xs.size(), action, res.stats);
  for (std::size_t i = seed ? 1 : 0; i < xs.size(); ++i) {
    res.states.push_back(xs[i].step.input);
    res.stats.depth = std::max(res.stats.depth, xs[i].depth);
  }
  return res;
}

std::vector<RVector> lrnn_readout(std::span<const LinStep> steps, std::span<const RVector> queries,
                                  std::span<const RVector> inputs, ReadPosition read, Action action) {
  if (queries.size() != steps.size() || inputs.size() != steps.size()) {
    throw DimensionError("lrnn_readout: steps, queries and inputs must have equal length");
  }
  std::vector<RVector> out;
  if (steps.empty()) return out;
  const std::size_t d = steps.front().transition.rows();
  RMatrix s(d, d);
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const RMatrix prev = s;
    s = advance(s, steps[t], action);
    out.push_back(inputs[t] + read_state(queries[t], read == ReadPosition::current ? s : prev));
  }
  return out;
}

std::vector<RVector> lrnn_run_conv(std::span<const LinStep> steps, std::span<const RVector> queries,
                                   std::span<const RVector> inputs, ReadPosition read, Action action) {
  if (queries.size() != steps.size() || inputs.size() != steps.size()) {
    throw DimensionError("lrnn_run_conv: steps, queries and inputs must have equal length");
  }
  std::vector<RVector> out;
  if (steps.empty()) return out;
  const std::size_t d = steps.front().transition.rows();
  check_steps(steps, d);
  for (std::size_t t = 0; t < steps.size(); ++t) {
    // Reading S_{t-1} means summing inputs up to t-1 through transitions up to t-1.
    const std::size_t last = read == ReadPosition::current ? t + 1 : t;
    RVector y = inputs[t];
    RMatrix carry = RMatrix::identity(d);  // A_last ⋯ A_{j+1} (or its right-action mirror)
    for (std::size_t j = last; j-- > 0;) {
      const RMatrix term = action == Action::left ? carry * steps[j].input : steps[j].input * carry;
      y = y + read_state(queries[t], term);
      carry = action == Action::left ? carry * steps[j].transition : steps[j].transition * carry;
    }
    out.push_back(std::move(y));
  }
  return out;
}

std::string dump_trace(std::span<const LinStep> steps) {
  std::ostringstream os;
  for (const auto& s : steps) {
    for (const auto& x : s.transition.values()) os << x << ' ';
    os << '|';
    for (const auto& x : s.input.values()) os << ' ' << x;
    os << '\n';
  }
  return os.str();
}

std::vector<LinStep> parse_trace(std::istream& in) {
  std::vector<LinStep> steps;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    const auto bar = line.find('|');
    if (bar == std::string::npos) throw std::invalid_argument("trace line " + std::to_string(lineno) + ": missing '|'");
    auto read_all = [&](const std::string& part) {
      std::istringstream is(part);
      std::vector<Rational> xs;
      std::string tok;
      while (is >> tok) xs.push_back(Rational::parse(tok));
      return xs;
    };
    const auto a = read_all(line.substr(0, bar));
    const auto b = read_all(line.substr(bar + 1));
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(a.size()))));
    if (d == 0 || d * d != a.size() || b.size() != a.size()) {
      throw std::invalid_argument("trace line " + std::to_string(lineno) + ": expected two d×d blocks");
    }
    LinStep s{RMatrix(d, d), RMatrix(d, d)};
    for (std::size_t k = 0; k < a.size(); ++k) {
      s.transition(k / d, k % d) = a[k];
      s.input(k / d, k % d) = b[k];
    }
    if (!steps.empty() && steps.front().transition.rows() != d) {
      throw std::invalid_argument("trace line " + std::to_string(lineno) + ": dimension changes mid-trace");
    }
    steps.push_back(std::move(s));
  }
  return steps;
}

}  // namespace rnnlab
