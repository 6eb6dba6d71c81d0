#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "rnnlab/dplr.hpp"
#include "rnnlab/router.hpp"
#include "rnnlab/wfa.hpp"

namespace rnnlab {

/// Column overwrite U(dst; c) = I − e_dst e_dstᵀ + c e_dstᵀ. Right-multiplying
/// a row vector replaces coordinate dst by r·c and leaves the rest alone.
struct Overwrite {
  std::size_t dst = 0;
  RVector coeffs;  // coeffs[dst] must be zero
};

RMatrix overwrite_matrix(const Overwrite& u);
/// r ← r·U
void overwrite_apply_row(RVector& r, const Overwrite& u);
/// v ← U·v
void overwrite_apply_col(RVector& v, const Overwrite& u);

/// decay = 1, replacement = e_dst, removal = e_dst − c, strength = 1, no additive term.
/// Throws std::invalid_argument when coeffs[dst] != 0.
RwkvStep rwkv_params_for_overwrite(const Overwrite& u);

/// 2n overwrites on [x | s] (dimension 2n) taking it to [xP | xP]: the first n
/// write (xP)_j into s_j, the last n copy s_j back into x_j.
std::vector<Overwrite> factor_apply_matrix(const RMatrix& p);

/// RWKV simulation of a WFA with n states. Blocks have length 2n; while
/// reading block ℓ the head applies the factors of the previous block's
/// transition product, one per token. The router sees only the window key.
class RwkvWfaNet {
 public:
  explicit RwkvWfaNet(Wfa a);

  const Wfa& wfa() const noexcept { return a_; }
  std::size_t block() const noexcept { return 2 * a_.states(); }
  std::size_t dim() const noexcept { return 2 * a_.states(); }
  std::size_t period() const noexcept { return 2 * block(); }
  std::size_t window() const noexcept { return 2 * block(); }

  struct Route {
    RwkvStep step;
    RVector completion;  // the readout vector
  };
  /// Pure function of the key.
  Route route(const WindowKey<Symbol>& key) const;

  struct Trace {
    std::vector<Rational> outputs;  // y_1..y_T
    std::vector<RwkvStep> steps;
    std::vector<RMatrix> states;
  };
  Trace forward(std::span<const Symbol> w, bool keep_states = false) const;

 private:
  const std::vector<Overwrite>& program(const std::optional<std::vector<Symbol>>& prev) const;

  Wfa a_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<Symbol>, std::vector<Overwrite>> programs_;
};

/// f(w_1..w_t) for t = 1..|w|.
std::vector<Rational> rwkv_wfa_forward(const RwkvWfaNet& net, std::span<const Symbol> w);

/// 3×3 block embedding: vec(X)·blocks(A) = vec(X A) with row-major vec.
RMatrix imm_block_matrix(const RMatrix& a);
/// Row-major flattening of the 3×3 matrices in a stream of 9-entry blocks.
std::vector<RMatrix> imm_matrices(std::span<const Rational> stream);
std::vector<Rational> imm_stream(std::span<const RMatrix> mats);

/// RWKV iterated 3×3 multiplication over a stream of 9-token blocks, one
/// entry per token in row-major order. State is two halves of vec form;
/// each block writes the product so far into the inactive half.
class RwkvImmNet {
 public:
  static constexpr std::size_t kDim = 18;
  static constexpr std::size_t kBlock = 9;
  static constexpr std::size_t kPeriod = 18;

  struct Route {
    RwkvStep step;
    Overwrite overwrite;
    std::size_t active_half = 0;
  };
  Route route(const WindowKey<Rational>& key) const;
  /// Readout vectors for the nine entries at a block end; nullopt mid-block.
  std::optional<std::vector<RVector>> completions(const WindowKey<Rational>& key) const;

  struct Trace {
    std::vector<Route> routes;
    std::vector<RVector> rows;  // first state row after each step
    RMatrix product;            // A_1 ⋯ A_N read out at the final position
  };
  /// Requires a nonempty stream whose length is a multiple of 9.
  Trace forward(std::span<const Rational> stream) const;
};

RMatrix rwkv_imm_forward(const RwkvImmNet& net, std::span<const Rational> stream);

}  // namespace rnnlab
