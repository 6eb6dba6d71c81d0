#include "rnnlab/rwkv_gadgets.hpp"

#include <stdexcept>

namespace rnnlab {
namespace {

RVector ones(std::size_t d) {
  RVector v(d);
  for (auto& x : v) x = 1;
  return v;
}

RwkvStep with_first_write(RwkvStep s, const RVector& key) {
  s.value = RVector::unit(key.size(), 0);
  s.key = key;
  return s;
}

RMatrix word_product(const Wfa& a, std::span<const Symbol> w) { return wfa_word_matrix(a, w); }

}  // namespace

RMatrix overwrite_matrix(const Overwrite& u) {
  const std::size_t d = u.coeffs.size();
  RMatrix m = RMatrix::identity(d);
  for (std::size_t i = 0; i < d; ++i) m(i, u.dst) = u.coeffs[i];
  return m;
}

void overwrite_apply_row(RVector& r, const Overwrite& u) { r[u.dst] = dot(r, u.coeffs); }

void overwrite_apply_col(RVector& v, const Overwrite& u) {
  const Rational x = v[u.dst];
  v[u.dst] = Rational();
  if (x.is_zero()) return;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!u.coeffs[i].is_zero()) v[i] += u.coeffs[i] * x;
  }
}

RwkvStep rwkv_params_for_overwrite(const Overwrite& u) {
  const std::size_t d = u.coeffs.size();
  if (u.dst >= d) throw std::invalid_argument("overwrite: destination out of range");
  if (!u.coeffs[u.dst].is_zero()) throw std::invalid_argument("overwrite: coefficient on the destination must be zero");
  const RVector e = RVector::unit(d, u.dst);
  return RwkvStep{ones(d), e, e - u.coeffs, Rational(1), RVector(d), RVector(d)};
}

std::vector<Overwrite> factor_apply_matrix(const RMatrix& p) {
  if (!p.is_square()) throw DimensionError("factor_apply_matrix: matrix must be square");
  const std::size_t n = p.rows();
  std::vector<Overwrite> out;
  out.reserve(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    Overwrite u{n + j, RVector(2 * n)};
    for (std::size_t i = 0; i < n; ++i) u.coeffs[i] = p(i, j);
    out.push_back(std::move(u));
  }
  for (std::size_t j = 0; j < n; ++j) out.push_back(Overwrite{j, RVector::unit(2 * n, n + j)});
  return out;
}

RwkvWfaNet::RwkvWfaNet(Wfa a) : a_(std::move(a)) {
  a_.validate();
  if (a_.states() == 0) throw std::invalid_argument("rwkv wfa net: automaton has no states");
}

const std::vector<Overwrite>& RwkvWfaNet::program(const std::optional<std::vector<Symbol>>& prev) const {
  // Padding blocks act as the identity and share the empty-word entry.
  const std::vector<Symbol> key = prev ? *prev : std::vector<Symbol>{};
  std::lock_guard lock(mu_);
  auto it = programs_.find(key);
  if (it == programs_.end()) it = programs_.emplace(key, factor_apply_matrix(word_product(a_, key))).first;
  return it->second;
}

RwkvWfaNet::Route RwkvWfaNet::route(const WindowKey<Symbol>& key) const {
  const auto view = split_blocks(key, block());
  const auto& prog = program(view.previous);
  const std::size_t n = a_.states();

  Route r;
  r.step = rwkv_params_for_overwrite(prog[view.offset - 1]);
  if (view.first_position) r.step = with_first_write(std::move(r.step), concat(a_.initial, a_.initial));

  RVector tail = concat(mat_vec(word_product(a_, view.current), a_.final), RVector(n));
  for (std::size_t i = block(); i > view.offset; --i) overwrite_apply_col(tail, prog[i - 1]);
  r.completion = std::move(tail);
  return r;
}

RwkvWfaNet::Trace RwkvWfaNet::forward(std::span<const Symbol> w, bool keep_states) const {
  for (auto s : w) {
    if (s >= a_.alphabet()) throw std::out_of_range("rwkv wfa net: symbol outside alphabet");
  }
  Trace tr;
  WindowTracker<Symbol> tracker(period(), window());
  RMatrix state(dim(), dim());
  for (auto s : w) {
    tracker.push(s);
    const Route r = route(tracker.key());
    rwkv_update(state, r.step);
    tr.outputs.push_back(dot(state.row(0), r.completion));
    tr.steps.push_back(r.step);
    if (keep_states) tr.states.push_back(state);
  }
  return tr;
}

std::vector<Rational> rwkv_wfa_forward(const RwkvWfaNet& net, std::span<const Symbol> w) {
  return net.forward(w).outputs;
}

RMatrix imm_block_matrix(const RMatrix& a) {
  if (a.rows() != 3 || a.cols() != 3) throw DimensionError("imm: expected a 3×3 matrix");
  RMatrix b(9, 9);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t j = 0; j < 3; ++j) b(3 * i + k, 3 * i + j) = a(k, j);
    }
  }
  return b;
}

std::vector<RMatrix> imm_matrices(std::span<const Rational> stream) {
  if (stream.size() % 9 != 0) throw std::invalid_argument("imm stream length is not a multiple of 9");
  std::vector<RMatrix> out;
  for (std::size_t b = 0; b < stream.size(); b += 9) {
    RMatrix m(3, 3);
    for (std::size_t k = 0; k < 9; ++k) m(k / 3, k % 3) = stream[b + k];
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<Rational> imm_stream(std::span<const RMatrix> mats) {
  std::vector<Rational> out;
  for (const auto& m : mats) {
    if (m.rows() != 3 || m.cols() != 3) throw DimensionError("imm: expected 3×3 matrices");
    out.insert(out.end(), m.values().begin(), m.values().end());
  }
  return out;
}

RwkvImmNet::Route RwkvImmNet::route(const WindowKey<Rational>& key) const {
  const auto view = split_blocks(key, kBlock);
  const RMatrix prev = view.previous ? imm_matrices(*view.previous).front() : RMatrix::identity(3);
  // Block ℓ (1-based) reads the half written by block ℓ-1.
  const std::size_t phase = key.phase == 0 ? kPeriod : key.phase;
  const std::size_t active = phase > kBlock ? 1 : 0;
  const std::size_t i = (view.offset - 1) / 3;
  const std::size_t j = (view.offset - 1) % 3;

  Route r;
  r.active_half = active;
  r.overwrite.dst = 9 * (1 - active) + view.offset - 1;
  r.overwrite.coeffs = RVector(kDim);
  for (std::size_t k = 0; k < 3; ++k) r.overwrite.coeffs[9 * active + 3 * i + k] = prev(k, j);
  r.step = rwkv_params_for_overwrite(r.overwrite);
  if (view.first_position) {
    RVector init(kDim);
    for (std::size_t d = 0; d < 3; ++d) {
      init[3 * d + d] = 1;
      init[9 + 3 * d + d] = 1;
    }
    r.step = with_first_write(std::move(r.step), init);
  }
  return r;
}

std::optional<std::vector<RVector>> RwkvImmNet::completions(const WindowKey<Rational>& key) const {
  const auto view = split_blocks(key, kBlock);
  if (view.offset != kBlock) return std::nullopt;
  const RMatrix cur = imm_matrices(view.current).front();
  const std::size_t phase = key.phase == 0 ? kPeriod : key.phase;
  const std::size_t written = phase > kBlock ? 0 : 1;
  std::vector<RVector> out;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      RVector v(kDim);
      for (std::size_t k = 0; k < 3; ++k) v[9 * written + 3 * i + k] = cur(k, j);
      out.push_back(std::move(v));
    }
  }
  return out;
}

RwkvImmNet::Trace RwkvImmNet::forward(std::span<const Rational> stream) const {
  if (stream.empty() || stream.size() % kBlock != 0) {
    throw std::invalid_argument("rwkv imm net: stream length must be a positive multiple of 9");
  }
  Trace tr;
  WindowTracker<Rational> tracker(kPeriod, kPeriod);
  RMatrix state(kDim, kDim);
  for (const auto& x : stream) {
    tracker.push(x);
    Route r = route(tracker.key());
    rwkv_update(state, r.step);
    tr.rows.push_back(state.row(0));
    tr.routes.push_back(std::move(r));
  }
  const auto reads = completions(tracker.key());
  tr.product = RMatrix(3, 3);
  const RVector row = state.row(0);
  for (std::size_t e = 0; e < 9; ++e) tr.product(e / 3, e % 3) = dot(row, (*reads)[e]);
  return tr;
}

RMatrix rwkv_imm_forward(const RwkvImmNet& net, std::span<const Rational> stream) {
  return net.forward(stream).product;
}

}  // namespace rnnlab
