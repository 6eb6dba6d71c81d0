#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "rnnlab/linalg.hpp"
#include "rnnlab/precision.hpp"

namespace rnnlab {

struct DenseLayer {
  RMatrix weight;  // out × in
  RVector bias;    // out
};

/// Exact ReLU network: ReLU after every layer except the last, which is affine.
class ReluMlp {
 public:
  ReluMlp() = default;
  explicit ReluMlp(std::vector<DenseLayer> layers);

  std::size_t input_dim() const noexcept { return in_; }
  std::size_t output_dim() const noexcept { return out_; }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::size_t hidden_units() const;

  /// Every pre-activation and the output are fed to `meter` when given.
  RVector forward(const RVector& x, PrecisionMeter* meter = nullptr) const;

 private:
  struct Column {
    std::vector<std::pair<std::size_t, Rational>> entries;
  };
  std::vector<DenseLayer> layers_;
  std::vector<std::vector<Column>> columns_;  // sparse column view per layer
  std::size_t in_ = 0;
  std::size_t out_ = 0;
};

/// Layer-by-layer wiring helper. Units of the layer being built read units of
/// the previous layer (the inputs, for the first layer).
class MlpBuilder {
 public:
  using Terms = std::vector<std::pair<std::size_t, Rational>>;

  explicit MlpBuilder(std::size_t inputs);

  /// Closes the current layer and opens a new one.
  void next_layer();
  std::size_t add(Terms terms, Rational bias = Rational());
  /// Copies a nonnegative unit of the previous layer through the ReLU.
  std::size_t carry(std::size_t unit) { return add({{unit, Rational(1)}}); }
  std::size_t previous_size() const noexcept { return prev_size_; }

  /// The last opened layer becomes the affine output layer.
  ReluMlp build();

 private:
  struct Pending {
    Terms terms;
    Rational bias;
  };
  std::vector<DenseLayer> done_;
  std::vector<Pending> cur_;
  std::size_t prev_size_;
};

/// 1[x ≥ θ] for inputs outside the open interval (θ − ε, θ).
ReluMlp gadget_threshold(const Rational& theta, const Rational& eps);
/// 1[x = 0] for inputs with x = 0 or |x| ≥ ε; two hidden layers. Default ε = 1/3.
ReluMlp gadget_eq_zero(const Rational& eps = Rational(1, 3));

/// Table lookup over a tuple of one-hot groups. Input is the concatenation of
/// the groups; output is table(key) where key[g] is the hot index of group g.
using LookupTable = std::function<RVector(std::span<const std::size_t>)>;
ReluMlp gadget_lookup(std::span<const std::size_t> group_sizes, std::size_t out_dim, const LookupTable& table);

/// Input [u (one-hot over B branches) | y_1 | … | y_B], each y_b of length
/// `width` with entries in [0, bound]; output y_b for the hot branch.
ReluMlp gadget_select(std::size_t branches, std::size_t width, const Rational& bound);

}  // namespace rnnlab
