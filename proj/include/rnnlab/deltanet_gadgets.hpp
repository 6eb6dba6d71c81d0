#pragma once

#include <array>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "rnnlab/dplr.hpp"
#include "rnnlab/router.hpp"
#include "rnnlab/wfa.hpp"

namespace rnnlab {

/// Generalized Householder factor H(β, k) = I − β k kᵀ.
struct HStep {
  Rational beta;
  RVector key;
};

RMatrix h_matrix(const HStep& h);
/// r ← r·H; H is symmetric, so this also computes H·v for a column vector.
void h_apply(RVector& r, const HStep& h);
/// H(0, 0): the identity, used as padding.
HStep h_identity(std::size_t d);
/// DeltaNet parameters realizing H with no additive write.
DeltaStep delta_params(const HStep& h);

/// Three factors whose product is I + e_src e_dstᵀ (adds coordinate src into dst).
std::array<HStep, 3> unit_transvection(std::size_t src, std::size_t dst, std::size_t d);

/// Eight factors adding λ·r_src into r_dst through the zeroed scratch coordinate tmp.
std::array<HStep, 8> scaled_add(std::size_t src, std::size_t dst, std::size_t tmp, const Rational& lambda,
                                std::size_t d);

/// Factor sequence taking [x | s | 0] (dimension 2n+1) to [xP | xP | 0]:
/// clear scratch and temp, accumulate xP into scratch, clear x, copy back.
struct ApplyMatrixProgram {
  std::size_t n = 0;
  std::vector<HStep> steps;
  std::array<std::size_t, 5> phase_start{};  // phase p covers [phase_start[p], phase_start[p+1])

  /// 1-based phase index of a 0-based step index.
  std::size_t phase_of(std::size_t step) const;
};

ApplyMatrixProgram apply_matrix_program(const RMatrix& p);
constexpr std::size_t apply_matrix_program_length(std::size_t n) { return 8 * n * n + 5 * n + 1; }

/// DeltaNet simulation of a WFA with n states; blocks have length 8n²+5n+1
/// and dimension 2n+1. Same delayed-block scheme as the RWKV net.
class DnetWfaNet {
 public:
  explicit DnetWfaNet(Wfa a);

  const Wfa& wfa() const noexcept { return a_; }
  std::size_t block() const noexcept { return apply_matrix_program_length(a_.states()); }
  std::size_t dim() const noexcept { return 2 * a_.states() + 1; }
  std::size_t period() const noexcept { return 2 * block(); }
  std::size_t window() const noexcept { return 2 * block(); }

  struct Route {
    DeltaStep step;
    RVector completion;
    std::size_t offset = 0;  // τ, 1-based
  };
  Route route(const WindowKey<Symbol>& key) const;

  struct Trace {
    std::vector<Rational> outputs;
    std::vector<DeltaStep> steps;
    std::vector<std::size_t> offsets;
  };
  Trace forward(std::span<const Symbol> w) const;

  const ApplyMatrixProgram& program(const std::optional<std::vector<Symbol>>& prev) const;

 private:
  Wfa a_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<Symbol>, ApplyMatrixProgram> programs_;
};

std::vector<Rational> dnet_wfa_forward(const DnetWfaNet& net, std::span<const Symbol> w);

/// DeltaNet iterated 3×3 multiplication. Superblocks hold 78 matrices
/// (702 tokens); each superblock replays the 694-step program of the
/// previous superblock's product, padded with 8 identity factors.
class DnetImmNet {
 public:
  static constexpr std::size_t kDim = 19;
  static constexpr std::size_t kMatrices = 78;
  static constexpr std::size_t kTokens = 9 * kMatrices;
  static constexpr std::size_t kArithmetic = apply_matrix_program_length(9);
  static constexpr std::size_t kPads = kTokens - kArithmetic;

  struct Route {
    DeltaStep step;
    std::size_t offset = 0;
    bool pad = false;
  };
  Route route(const WindowKey<Rational>& key) const;
  /// Nine readout vectors at a matrix boundary; nullopt elsewhere.
  std::optional<std::vector<RVector>> completions(const WindowKey<Rational>& key) const;

  struct Trace {
    std::vector<Route> routes;
    RMatrix product;
  };
  Trace forward(std::span<const Rational> stream) const;

  /// The 702-step factor sequence replayed for a given previous-superblock product.
  std::vector<HStep> superblock_factors(const RMatrix& product) const;

 private:
  const std::vector<HStep>& factors_for(const std::optional<std::vector<Rational>>& prev) const;

  mutable std::mutex mu_;
  mutable std::map<std::vector<Rational>, std::vector<HStep>> factors_;
};

RMatrix dnet_imm_forward(const DnetImmNet& net, std::span<const Rational> stream);

/// t mod 2m from two DeltaNet layers: a 1-D parity head and a head that
/// alternates two rational reflections whose product is a rotation of order m.
/// Exact rational rotations of finite order exist only for m in {1,2,3,4,6};
/// other m throw std::domain_error.
class ModCounter {
 public:
  explicit ModCounter(std::size_t m);

  std::size_t period() const noexcept { return 2 * m_; }
  std::size_t dim() const noexcept { return 3; }

  DeltaStep parity_step(bool first) const;
  /// `parity` is the parity head's output at the same position (+1 on odd t).
  DeltaStep rotation_step(bool first, const Rational& parity) const;
  /// t mod 2m for a reachable rotation-head row; throws std::out_of_range otherwise.
  std::size_t decode(const RVector& row) const;

  /// Runs both heads for t steps; returns the rotation-head row after each.
  std::vector<RVector> run(std::size_t steps) const;

 private:
  std::size_t m_;
  RVector first_, second_, start_;
  std::map<std::vector<Rational>, std::size_t> table_;
};

/// Token buffer head: slot j lives in column symbols + j and holds a one-hot
/// token, written by a single β = 1 step.
class ColumnBuffer {
 public:
  ColumnBuffer(std::size_t symbols, std::size_t slots);
  std::size_t dim() const noexcept { return symbols_ + slots_; }
  DeltaStep write(std::size_t slot, std::size_t token) const;
  /// nullopt for a never-written slot.
  std::optional<std::size_t> read(const RMatrix& state, std::size_t slot) const;

 private:
  std::size_t symbols_, slots_;
};

}  // namespace rnnlab
