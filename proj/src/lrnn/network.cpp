#include "rnnlab/network.hpp"

#include <stdexcept>

namespace rnnlab {
namespace {

std::vector<RVector> apply_multihead(const MultiheadSublayer& layer, const std::vector<RVector>& xs) {
  std::vector<RVector> concat_out(xs.size());
  for (const auto& head : layer.heads) {
    RMatrix s(head.state_dim, head.state_dim);
    for (std::size_t t = 0; t < xs.size(); ++t) {
      const RVector x = layer.norm(xs[t]);
      const LinStep step = head.step(x);
      const RMatrix prev = s;
      s = (head.action == Action::left ? step.transition * s : s * step.transition) + step.input;
      const RVector q = mat_vec(head.query, x);
      concat_out[t] = concat(concat_out[t], row_apply(q, head.read == ReadPosition::current ? s : prev));
    }
  }
  std::vector<RVector> ys;
  ys.reserve(xs.size());
  for (std::size_t t = 0; t < xs.size(); ++t) ys.push_back(xs[t] + mat_vec(layer.out, concat_out[t]));
  return ys;
}

std::vector<RVector> apply_ffn(const FfnSublayer& layer, const std::vector<RVector>& xs) {
  std::vector<RVector> ys;
  ys.reserve(xs.size());
  for (const auto& x : xs) {
    RVector h = mat_vec(layer.up, layer.norm(x));
    if (layer.up_bias.size() != 0) h = h + layer.up_bias;
    ys.push_back(x + mat_vec(layer.down, relu(h)));
  }
  return ys;
}

}  // namespace

RVector identity_norm(const RVector& x) { return x; }

RVector relu(const RVector& x) {
  RVector out = x;
  for (auto& v : out) {
    if (v.sign() < 0) v = Rational();
  }
  return out;
}

std::vector<RVector> sublayer_apply(const Sublayer& layer, const std::vector<RVector>& xs) {
  return std::visit(
      [&](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, MultiheadSublayer>) {
          return apply_multihead(l, xs);
        } else {
          return apply_ffn(l, xs);
        }
      },
      layer);
}

std::vector<RVector> network_forward(const LrnnNetwork& net, std::vector<RVector> xs) {
  for (const auto& layer : net.layers) xs = sublayer_apply(layer, xs);
  return xs;
}

Rational network_score(const LrnnNetwork& net, const std::vector<RVector>& xs) {
  if (xs.empty()) throw std::invalid_argument("network_score: empty input");
  return dot(net.readout, network_forward(net, xs).back());
}

bool network_recognize(const LrnnNetwork& net, const std::vector<RVector>& xs) {
  return network_score(net, xs).sign() > 0;
}

}  // namespace rnnlab
