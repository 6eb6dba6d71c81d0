#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rnnlab/lrnn.hpp"

namespace rnnlab {

struct DepthRow {
  std::size_t n = 0;
  std::size_t scan_depth = 0;
  std::size_t sequential_steps = 0;
};

/// Runs the prefix scan over a given trace (zero initial state).
DepthRow depth_of_trace(std::span<const LinStep> steps);
/// Random d×d traces of each length.
std::vector<DepthRow> depth_report(std::span<const std::size_t> lengths, std::uint64_t seed, std::size_t dim);

struct PrecisionRow {
  std::size_t n = 0;       // requested size
  std::size_t tokens = 0;  // tokens actually fed to the network
  std::size_t max_value_bits = 0;
};

/// Connectivity MLP RNN on the largest generated instance whose unary
/// encoding has at most n tokens, with counter bound n.
PrecisionRow conn_precision(std::size_t n, std::uint64_t seed);
/// Stack MLP RNN on an n-step run that pushes a random bit every step.
PrecisionRow stack_precision(std::size_t n, std::uint64_t seed);

/// Least-squares fit bits ≈ slope·x + intercept.
struct LineFit {
  double slope = 0;
  double intercept = 0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);
/// Fit against log₂ n.
LineFit fit_log2(std::span<const PrecisionRow> rows);

}  // namespace rnnlab
