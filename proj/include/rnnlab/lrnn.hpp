#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rnnlab/linalg.hpp"

namespace rnnlab {

/// One recurrence step. The additive term is always a full d×d matrix; a
/// vector input v is stored as v·e₁ᵀ.
struct LinStep {
  RMatrix transition;
  RMatrix input;
};

/// left:  S_t = A_t S_{t-1} + b_t
/// right: S_t = S_{t-1} A_t + b_t   (row-state convention used by the gadgets)
enum class Action { left, right };

/// Which state a head reads at step t.
enum class ReadPosition { current, previous };

/// Composite of `earlier` followed by `later`, as a single step.
LinStep combine(const LinStep& earlier, const LinStep& later, Action action = Action::left);

/// States S_1..S_n by direct iteration from S_0.
std::vector<RMatrix> lrnn_run_sequential(std::span<const LinStep> steps, const RMatrix& s0,
                                         Action action = Action::left);

struct ScanStats {
  std::size_t depth = 0;     // longest chain of combines feeding any output
  std::size_t combines = 0;  // total combine calls
};

struct ScanResult {
  std::vector<RMatrix> states;  // S_1..S_n
  ScanStats stats;
};

/// All prefix states via a divide-and-conquer prefix scan of depth ⌈log₂ n⌉.
/// A nonzero S_0 is folded in as an extra leading step.
ScanResult lrnn_run_scan(std::span<const LinStep> steps, const RMatrix& s0, Action action = Action::left);

/// y_t = x_t + q_tᵀ S, with S the current or previous state, from the recurrence.
std::vector<RVector> lrnn_readout(std::span<const LinStep> steps, std::span<const RVector> queries,
                                  std::span<const RVector> inputs, ReadPosition read = ReadPosition::current,
                                  Action action = Action::left);

/// Same outputs evaluated as an explicit sum over earlier inputs,
/// y_t = x_t + Σ_{j≤t} q_tᵀ (A_t ⋯ A_{j+1}) b_j, with S_0 = 0.
std::vector<RVector> lrnn_run_conv(std::span<const LinStep> steps, std::span<const RVector> queries,
                                   std::span<const RVector> inputs, ReadPosition read = ReadPosition::current,
                                   Action action = Action::left);

/// Trace text format: one step per line, "<A row-major> | <b row-major>",
/// entries as num/den. Blank lines and lines starting with '#' are skipped.
std::string dump_trace(std::span<const LinStep> steps);
std::vector<LinStep> parse_trace(std::istream& in);

}  // namespace rnnlab
