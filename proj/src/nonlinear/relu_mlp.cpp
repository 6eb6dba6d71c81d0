#include "rnnlab/relu_mlp.hpp"

#include <stdexcept>

namespace rnnlab {

ReluMlp::ReluMlp(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw std::invalid_argument("relu mlp: no layers");
  in_ = layers_.front().weight.cols();
  std::size_t width = in_;
  for (const auto& l : layers_) {
    if (l.weight.cols() != width || l.bias.size() != l.weight.rows()) {
      throw DimensionError("relu mlp: layer shapes do not chain");
    }
    width = l.weight.rows();
    std::vector<Column> cols(l.weight.cols());
    for (std::size_t i = 0; i < l.weight.rows(); ++i) {
      for (std::size_t j = 0; j < l.weight.cols(); ++j) {
        if (!l.weight(i, j).is_zero()) cols[j].entries.emplace_back(i, l.weight(i, j));
      }
    }
    columns_.push_back(std::move(cols));
  }
  out_ = width;
}

std::size_t ReluMlp::hidden_units() const {
  std::size_t n = 0;
  for (std::size_t k = 0; k + 1 < layers_.size(); ++k) n += layers_[k].weight.rows();
  return n;
}

RVector ReluMlp::forward(const RVector& x, PrecisionMeter* meter) const {
  if (x.size() != in_) throw DimensionError("relu mlp: input dimension");
  RVector cur = x;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    RVector next = layers_[k].bias;
    for (std::size_t j = 0; j < cur.size(); ++j) {
      if (cur[j].is_zero()) continue;
      for (const auto& [i, w] : columns_[k][j].entries) next[i] += w * cur[j];
    }
    if (meter) meter->add(next);
    if (k + 1 < layers_.size()) {
      for (auto& v : next) {
        if (v.sign() < 0) v = Rational();
      }
    }
    cur = std::move(next);
  }
  return cur;
}

MlpBuilder::MlpBuilder(std::size_t inputs) : prev_size_(inputs) {}

void MlpBuilder::next_layer() {
  DenseLayer l{RMatrix(cur_.size(), prev_size_), RVector(cur_.size())};
  for (std::size_t i = 0; i < cur_.size(); ++i) {
    for (const auto& [j, w] : cur_[i].terms) l.weight(i, j) += w;
    l.bias[i] = cur_[i].bias;
  }
  prev_size_ = cur_.size();
  done_.push_back(std::move(l));
  cur_.clear();
}

std::size_t MlpBuilder::add(Terms terms, Rational bias) {
  for (const auto& t : terms) {
    if (t.first >= prev_size_) throw std::out_of_range("mlp builder: reference past the previous layer");
  }
  cur_.push_back(Pending{std::move(terms), std::move(bias)});
  return cur_.size() - 1;
}

ReluMlp MlpBuilder::build() {
  next_layer();
  return ReluMlp(std::move(done_));
}

ReluMlp gadget_threshold(const Rational& theta, const Rational& eps) {
  if (eps.sign() <= 0) throw std::invalid_argument("threshold: margin must be positive");
  const Rational inv = Rational(1) / eps;
  MlpBuilder b(1);
  const auto lo = b.add({{0, inv}}, (eps - theta) * inv);
  const auto hi = b.add({{0, inv}}, -theta * inv);
  b.next_layer();
  b.add({{lo, 1}, {hi, -1}});
  return b.build();
}

ReluMlp gadget_eq_zero(const Rational& eps) {
  if (eps.sign() <= 0) throw std::invalid_argument("eq_zero: margin must be positive");
  const Rational inv = Rational(1) / eps;
  MlpBuilder b(1);
  const auto pos = b.add({{0, inv}});
  const auto neg = b.add({{0, -inv}});
  b.next_layer();
  const auto z = b.add({{pos, -1}, {neg, -1}}, 1);
  b.next_layer();
  b.add({{z, 1}});
  return b.build();
}

ReluMlp gadget_lookup(std::span<const std::size_t> group_sizes, std::size_t out_dim, const LookupTable& table) {
  std::vector<std::size_t> offset;
  std::size_t in = 0;
  std::size_t keys = 1;
  for (auto g : group_sizes) {
    if (g == 0) throw std::invalid_argument("lookup: empty group");
    offset.push_back(in);
    in += g;
    keys *= g;
  }
  MlpBuilder b(in);
  std::vector<std::size_t> key(group_sizes.size(), 0);
  std::vector<RVector> values;
  for (std::size_t k = 0; k < keys; ++k) {
    MlpBuilder::Terms terms;
    for (std::size_t g = 0; g < key.size(); ++g) terms.emplace_back(offset[g] + key[g], Rational(1));
    b.add(std::move(terms), Rational(1) - Rational(static_cast<std::int64_t>(key.size())));
    values.push_back(table(key));
    if (values.back().size() != out_dim) throw DimensionError("lookup: table value has the wrong length");
    for (std::size_t g = key.size(); g-- > 0;) {
      if (++key[g] < group_sizes[g]) break;
      key[g] = 0;
    }
  }
  b.next_layer();
  for (std::size_t o = 0; o < out_dim; ++o) {
    MlpBuilder::Terms terms;
    for (std::size_t k = 0; k < keys; ++k) {
      if (!values[k][o].is_zero()) terms.emplace_back(k, values[k][o]);
    }
    b.add(std::move(terms));
  }
  return b.build();
}

ReluMlp gadget_select(std::size_t branches, std::size_t width, const Rational& bound) {
  MlpBuilder b(branches * (1 + width));
  std::vector<std::vector<std::size_t>> gated(branches);
  for (std::size_t br = 0; br < branches; ++br) {
    for (std::size_t i = 0; i < width; ++i) {
      gated[br].push_back(b.add({{branches + br * width + i, 1}, {br, bound}}, -bound));
    }
  }
  b.next_layer();
  for (std::size_t i = 0; i < width; ++i) {
    MlpBuilder::Terms terms;
    for (std::size_t br = 0; br < branches; ++br) terms.emplace_back(gated[br][i], Rational(1));
    b.add(std::move(terms));
  }
  return b.build();
}

}  // namespace rnnlab
