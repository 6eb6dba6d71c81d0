#include "rnnlab/dwfa_pd.hpp"

#include <stdexcept>

namespace rnnlab {
namespace {

std::size_t hot_index(const RVector& x, std::size_t limit) {
  for (std::size_t i = 0; i < limit; ++i) {
    if (x[i] == Rational(1)) return i;
  }
  throw std::invalid_argument("pd recognizer: input has no hot token coordinate");
}

Rational draw(Rng& rng) { return Rational(rng.uniform(-2, 2), 2); }

}  // namespace

PdStep pd_from_deterministic(const RMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> targets(n);
  RVector diag(n);
  for (std::size_t q = 0; q < n; ++q) {
    targets[q] = q;
    for (std::size_t r = 0; r < n; ++r) {
      if (m(q, r).is_zero()) continue;
      if (!diag[q].is_zero()) throw std::invalid_argument("pd_from_deterministic: state with two successors");
      targets[q] = r;
      diag[q] = m(q, r);
    }
  }
  return {RelaxedPermutation(std::move(targets)), std::move(diag)};
}

PdRecognizer dwfa_to_pd(const Wfa& a) {
  a.validate();
  if (!wfa_is_deterministic(a)) throw std::invalid_argument("dwfa_to_pd: automaton is not deterministic");
  const std::size_t n = a.states();
  const std::size_t k = a.alphabet();
  const std::size_t bos = k;
  const std::size_t result = k + 1;
  const std::size_t model = k + 2;

  PdRecognizer r;
  r.alphabet = k;
  for (const auto& m : a.transitions) r.symbol_steps.push_back(pd_from_deterministic(m));

  const RMatrix start = RMatrix::outer(a.initial, RVector::unit(n, 0));
  std::vector<LinStep> per_token;
  for (const auto& s : r.symbol_steps) per_token.push_back(pd_transition(s));
  per_token.push_back(LinStep{RMatrix::identity(n), start});

  LrnnHead head;
  head.state_dim = n;
  head.step = [per_token, bos](const RVector& x) { return per_token[hot_index(x, bos + 1)]; };
  head.query = RMatrix(n, model);
  for (std::size_t tok = 0; tok <= bos; ++tok) {
    for (std::size_t i = 0; i < n; ++i) head.query(i, tok) = a.final[i];
  }

  MultiheadSublayer layer;
  layer.heads.push_back(std::move(head));
  layer.out = RMatrix(model, n);
  layer.out(result, 0) = 1;
  r.net.layers.emplace_back(std::move(layer));
  r.net.readout = RVector::unit(model, result);
  return r;
}

std::vector<RVector> PdRecognizer::embed(std::span<const Symbol> w) const {
  const std::size_t model = alphabet + 2;
  std::vector<RVector> xs{RVector::unit(model, alphabet)};
  for (auto s : w) {
    if (s >= alphabet) throw std::out_of_range("pd recognizer: symbol outside alphabet");
    xs.push_back(RVector::unit(model, s));
  }
  return xs;
}

Rational PdRecognizer::score(std::span<const Symbol> w) const { return network_score(net, embed(w)); }

bool PdRecognizer::accepts(std::span<const Symbol> w) const { return score(w).sign() > 0; }

Wfa random_deterministic_wfa(Rng& rng, std::size_t states, std::size_t alphabet) {
  Wfa a;
  a.initial = RVector(states);
  a.initial[rng.index(states)] = Rational(1 + rng.index(2), 2);
  for (std::size_t s = 0; s < alphabet; ++s) {
    std::vector<std::size_t> targets(states);
    RVector diag(states);
    for (std::size_t q = 0; q < states; ++q) {
      targets[q] = rng.index(states);
      diag[q] = draw(rng);
    }
    a.transitions.push_back(PdStep{RelaxedPermutation(std::move(targets)), std::move(diag)}.matrix().transpose());
  }
  a.final = RVector(states);
  for (auto& x : a.final) x = draw(rng);
  return a;
}

}  // namespace rnnlab
