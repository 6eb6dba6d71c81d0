#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "rnnlab/lrnn.hpp"

namespace rnnlab {

using Normalizer = std::function<RVector(const RVector&)>;

/// Exact networks keep the normalization slot but leave it as the identity.
RVector identity_norm(const RVector& x);

/// One LRNN head. Its step parameters and query are functions of the
/// normalized residual-stream vector.
struct LrnnHead {
  std::size_t state_dim = 0;
  std::function<LinStep(const RVector&)> step;
  RMatrix query;  // state_dim × model_dim
  Action action = Action::left;
  ReadPosition read = ReadPosition::current;
};

/// x + O·concat(head outputs)
struct MultiheadSublayer {
  std::vector<LrnnHead> heads;
  RMatrix out;  // model_dim × Σ state_dim
  Normalizer norm = identity_norm;
};

/// x + W·ReLU(U·norm(x) + c)
struct FfnSublayer {
  RMatrix up;
  RVector up_bias;
  RMatrix down;
  Normalizer norm = identity_norm;
};

using Sublayer = std::variant<MultiheadSublayer, FfnSublayer>;

std::vector<RVector> sublayer_apply(const Sublayer& layer, const std::vector<RVector>& xs);

/// Stack of sublayers with a linear readout on the final position.
struct LrnnNetwork {
  std::vector<Sublayer> layers;
  RVector readout;
};

std::vector<RVector> network_forward(const LrnnNetwork& net, std::vector<RVector> xs);
/// o·y at the last position.
Rational network_score(const LrnnNetwork& net, const std::vector<RVector>& xs);
/// Accepts iff the score is strictly positive.
bool network_recognize(const LrnnNetwork& net, const std::vector<RVector>& xs);

RVector relu(const RVector& x);

}  // namespace rnnlab
