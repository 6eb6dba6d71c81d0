#include "rnnlab/deltanet_gadgets.hpp"

#include <algorithm>
#include <stdexcept>

#include "rnnlab/rwkv_gadgets.hpp"

namespace rnnlab {
namespace {

HStep h(const Rational& beta, RVector key) { return HStep{beta, std::move(key)}; }

RVector basis_sum(std::size_t d, std::size_t a, const Rational& wa, std::size_t b, const Rational& wb) {
  RVector v(d);
  v[a] += wa;
  v[b] += wb;
  return v;
}

DeltaStep first_write(const RVector& row) { return DeltaStep{Rational(1), row, RVector::unit(row.size(), 0)}; }

}  // namespace

RMatrix h_matrix(const HStep& s) {
  const std::size_t d = s.key.size();
  return RMatrix::identity(d) - s.beta * RMatrix::outer(s.key, s.key);
}

void h_apply(RVector& r, const HStep& s) { householder_apply(r, s.beta, s.key); }

HStep h_identity(std::size_t d) { return HStep{Rational(), RVector(d)}; }

DeltaStep delta_params(const HStep& s) { return DeltaStep{s.beta, s.key, RVector(s.key.size())}; }

std::array<HStep, 3> unit_transvection(std::size_t src, std::size_t dst, std::size_t d) {
  if (src == dst || src >= d || dst >= d) throw std::invalid_argument("unit_transvection: bad coordinates");
  return {h(2, basis_sum(d, src, 1, dst, 1)), h(Rational(1, 2), RVector::unit(d, src)),
          h(Rational(1, 3), basis_sum(d, src, 1, dst, 2))};
}

std::array<HStep, 8> scaled_add(std::size_t src, std::size_t dst, std::size_t tmp, const Rational& lambda,
                                std::size_t d) {
  if (tmp == src || tmp == dst) throw std::invalid_argument("scaled_add: scratch must differ from src and dst");
  const auto to_tmp = unit_transvection(src, tmp, d);
  const auto to_dst = unit_transvection(tmp, dst, d);
  return {to_tmp[0], to_tmp[1], to_tmp[2], h(Rational(1) - lambda, RVector::unit(d, tmp)),
          to_dst[0], to_dst[1], to_dst[2], h(1, RVector::unit(d, tmp))};
}

std::size_t ApplyMatrixProgram::phase_of(std::size_t step) const {
  for (std::size_t p = 0; p < 4; ++p) {
    if (step < phase_start[p + 1]) return p + 1;
  }
  throw std::out_of_range("apply matrix program: step index past the end");
}

ApplyMatrixProgram apply_matrix_program(const RMatrix& p) {
  if (!p.is_square()) throw DimensionError("apply_matrix_program: matrix must be square");
  const std::size_t n = p.rows();
  const std::size_t d = 2 * n + 1;
  const std::size_t tmp = 2 * n;
  ApplyMatrixProgram prog;
  prog.n = n;
  auto& s = prog.steps;
  s.reserve(apply_matrix_program_length(n));

  prog.phase_start[0] = s.size();
  for (std::size_t j = 0; j < n; ++j) s.push_back(h(1, RVector::unit(d, n + j)));
  s.push_back(h(1, RVector::unit(d, tmp)));

  prog.phase_start[1] = s.size();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& f : scaled_add(i, n + j, tmp, p(i, j), d)) s.push_back(std::move(f));
    }
  }

  prog.phase_start[2] = s.size();
  for (std::size_t i = 0; i < n; ++i) s.push_back(h(1, RVector::unit(d, i)));

  prog.phase_start[3] = s.size();
  for (std::size_t j = 0; j < n; ++j) {
    for (auto& f : unit_transvection(n + j, j, d)) s.push_back(std::move(f));
  }
  prog.phase_start[4] = s.size();
  return prog;
}

DnetWfaNet::DnetWfaNet(Wfa a) : a_(std::move(a)) {
  a_.validate();
  if (a_.states() == 0) throw std::invalid_argument("dnet wfa net: automaton has no states");
}

const ApplyMatrixProgram& DnetWfaNet::program(const std::optional<std::vector<Symbol>>& prev) const {
  const std::vector<Symbol> key = prev ? *prev : std::vector<Symbol>{};
  std::lock_guard lock(mu_);
  auto it = programs_.find(key);
  if (it == programs_.end()) it = programs_.emplace(key, apply_matrix_program(wfa_word_matrix(a_, key))).first;
  return it->second;
}

DnetWfaNet::Route DnetWfaNet::route(const WindowKey<Symbol>& key) const {
  const auto view = split_blocks(key, block());
  const auto& prog = program(view.previous);
  const std::size_t n = a_.states();

  Route r;
  r.offset = view.offset;
  r.step = view.first_position ? first_write(concat(a_.initial, RVector(n + 1)))
                               : delta_params(prog.steps[view.offset - 1]);
  RVector tail = concat(mat_vec(wfa_word_matrix(a_, view.current), a_.final), RVector(n + 1));
  for (std::size_t s = block(); s > view.offset; --s) h_apply(tail, prog.steps[s - 1]);
  r.completion = std::move(tail);
  return r;
}

DnetWfaNet::Trace DnetWfaNet::forward(std::span<const Symbol> w) const {
  for (auto s : w) {
    if (s >= a_.alphabet()) throw std::out_of_range("dnet wfa net: symbol outside alphabet");
  }
  Trace tr;
  WindowTracker<Symbol> tracker(period(), window());
  RMatrix state(dim(), dim());
  for (auto s : w) {
    tracker.push(s);
    Route r = route(tracker.key());
    deltanet_update(state, r.step);
    tr.outputs.push_back(dot(state.row(0), r.completion));
    tr.offsets.push_back(r.offset);
    tr.steps.push_back(std::move(r.step));
  }
  return tr;
}

std::vector<Rational> dnet_wfa_forward(const DnetWfaNet& net, std::span<const Symbol> w) {
  return net.forward(w).outputs;
}

std::vector<HStep> DnetImmNet::superblock_factors(const RMatrix& product) const {
  auto prog = apply_matrix_program(imm_block_matrix(product));
  std::vector<HStep> out = std::move(prog.steps);
  out.resize(kTokens, h_identity(kDim));
  return out;
}

const std::vector<HStep>& DnetImmNet::factors_for(const std::optional<std::vector<Rational>>& prev) const {
  const std::vector<Rational> key = prev ? *prev : std::vector<Rational>{};
  std::lock_guard lock(mu_);
  auto it = factors_.find(key);
  if (it != factors_.end()) return it->second;
  std::vector<HStep> f;
  if (!prev) {
    f.assign(kTokens, h_identity(kDim));
  } else {
    RMatrix prod = RMatrix::identity(3);
    for (const auto& m : imm_matrices(*prev)) prod = prod * m;
    f = superblock_factors(prod);
  }
  return factors_.emplace(key, std::move(f)).first->second;
}

DnetImmNet::Route DnetImmNet::route(const WindowKey<Rational>& key) const {
  const auto view = split_blocks(key, kTokens);
  const auto& f = factors_for(view.previous);
  Route r;
  r.offset = view.offset;
  r.pad = view.offset > kArithmetic;
  if (view.first_position) {
    RVector init(kDim);
    for (std::size_t d = 0; d < 3; ++d) init[3 * d + d] = 1;
    r.step = first_write(init);
  } else {
    r.step = delta_params(f[view.offset - 1]);
  }
  return r;
}

std::optional<std::vector<RVector>> DnetImmNet::completions(const WindowKey<Rational>& key) const {
  const auto view = split_blocks(key, kTokens);
  if (view.offset % 9 != 0) return std::nullopt;
  const auto& f = factors_for(view.previous);
  RMatrix prod = RMatrix::identity(3);
  for (const auto& m : imm_matrices(view.current)) prod = prod * m;
  const RMatrix lifted = imm_block_matrix(prod);
  std::vector<RVector> out;
  for (std::size_t j = 0; j < 9; ++j) {
    RVector v(kDim);
    for (std::size_t i = 0; i < 9; ++i) v[i] = lifted(i, j);
    for (std::size_t s = kTokens; s > view.offset; --s) h_apply(v, f[s - 1]);
    out.push_back(std::move(v));
  }
  return out;
}

DnetImmNet::Trace DnetImmNet::forward(std::span<const Rational> stream) const {
  if (stream.empty() || stream.size() % 9 != 0) {
    throw std::invalid_argument("dnet imm net: stream length must be a positive multiple of 9");
  }
  Trace tr;
  WindowTracker<Rational> tracker(2 * kTokens, 2 * kTokens);
  RMatrix state(kDim, kDim);
  for (const auto& x : stream) {
    tracker.push(x);
    Route r = route(tracker.key());
    deltanet_update(state, r.step);
    tr.routes.push_back(std::move(r));
  }
  const auto reads = completions(tracker.key());
  const RVector row = state.row(0);
  tr.product = RMatrix(3, 3);
  for (std::size_t e = 0; e < 9; ++e) tr.product(e / 3, e % 3) = dot(row, (*reads)[e]);
  return tr;
}

RMatrix dnet_imm_forward(const DnetImmNet& net, std::span<const Rational> stream) {
  return net.forward(stream).product;
}

ModCounter::ModCounter(std::size_t m) : m_(m) {
  auto v = [](int a, int b, int c) { return RVector{Rational(a), Rational(b), Rational(c)}; };
  switch (m) {
    case 1: first_ = v(1, -1, 0); second_ = v(1, -1, 0); break;
    case 2: first_ = v(1, 0, 0); second_ = v(0, 1, 0); break;
    case 3: first_ = v(1, -1, 0); second_ = v(0, 1, -1); break;
    case 4: first_ = v(1, 0, 0); second_ = v(1, 1, 0); break;
    case 6: first_ = v(1, -1, 0); second_ = v(1, -2, 1); break;
    default:
      throw std::domain_error("mod counter: no rational rotation of order " + std::to_string(m));
  }
  start_ = v(1, 2, 4);
  const auto rows = run(2 * m + 1);
  for (std::size_t t = 1; t <= 2 * m; ++t) {
    if (!table_.emplace(rows[t - 1].values(), t % (2 * m)).second) {
      throw std::logic_error("mod counter: states collide within one period");
    }
  }
  if (rows[2 * m] != rows[0]) throw std::logic_error("mod counter: orbit does not close after 2m steps");
}

DeltaStep ModCounter::parity_step(bool first) const {
  if (first) return DeltaStep{Rational(1), RVector{Rational(1)}, RVector{Rational(1)}};
  return DeltaStep{Rational(2), RVector{Rational(1)}, RVector{Rational(0)}};
}

DeltaStep ModCounter::rotation_step(bool first, const Rational& parity) const {
  if (first) return first_write(start_);
  const RVector& k = parity.sign() < 0 ? first_ : second_;
  return DeltaStep{Rational(2) / dot(k, k), k, RVector(3)};
}

std::vector<RVector> ModCounter::run(std::size_t steps) const {
  RMatrix parity(1, 1);
  RMatrix rot(3, 3);
  std::vector<RVector> rows;
  for (std::size_t t = 1; t <= steps; ++t) {
    deltanet_update(parity, parity_step(t == 1));
    deltanet_update(rot, rotation_step(t == 1, parity(0, 0)));
    rows.push_back(rot.row(0));
  }
  return rows;
}

std::size_t ModCounter::decode(const RVector& row) const {
  const auto it = table_.find(row.values());
  if (it == table_.end()) throw std::out_of_range("mod counter: unreachable state");
  return it->second;
}

ColumnBuffer::ColumnBuffer(std::size_t symbols, std::size_t slots) : symbols_(symbols), slots_(slots) {
  if (symbols == 0 || slots == 0) throw std::invalid_argument("column buffer: empty alphabet or no slots");
}

DeltaStep ColumnBuffer::write(std::size_t slot, std::size_t token) const {
  if (slot >= slots_ || token >= symbols_) throw std::out_of_range("column buffer: slot or token out of range");
  return DeltaStep{Rational(1), RVector::unit(dim(), symbols_ + slot), RVector::unit(dim(), token)};
}

std::optional<std::size_t> ColumnBuffer::read(const RMatrix& state, std::size_t slot) const {
  if (slot >= slots_) throw std::out_of_range("column buffer: slot out of range");
  const RVector col = state.col(symbols_ + slot);
  std::optional<std::size_t> tok;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (col[i].is_zero()) continue;
    if (col[i] != Rational(1) || i >= symbols_ || tok) throw std::logic_error("column buffer: slot is not one-hot");
    tok = i;
  }
  return tok;
}

}  // namespace rnnlab
