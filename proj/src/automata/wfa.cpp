#include "rnnlab/wfa.hpp"

#include <stdexcept>
#include <string>

namespace rnnlab {
namespace {

void check_symbol(const Wfa& a, Symbol s) {
  if (s >= a.alphabet()) {
    throw std::out_of_range("symbol " + std::to_string(s) + " outside alphabet of size " +
                            std::to_string(a.alphabet()));
  }
}

Rational draw_half(Rng& rng) { return Rational(rng.uniform(-1, 1), 2); }

}  // namespace

void Wfa::validate() const {
  const auto n = states();
  if (final.size() != n) throw DimensionError("wfa: final vector size differs from initial");
  for (const auto& m : transitions) {
    if (m.rows() != n || m.cols() != n) throw DimensionError("wfa: transition matrix shape");
  }
}

RMatrix wfa_word_matrix(const Wfa& a, std::span<const Symbol> w) {
  RMatrix p = RMatrix::identity(a.states());
  for (auto s : w) {
    check_symbol(a, s);
    p = p * a.transitions[s];
  }
  return p;
}

Rational wfa_eval(const Wfa& a, std::span<const Symbol> w) {
  RVector r = a.initial;
  for (auto s : w) {
    check_symbol(a, s);
    r = row_apply(r, a.transitions[s]);
  }
  return dot(r, a.final);
}

std::vector<Rational> wfa_eval_prefixes(const Wfa& a, std::span<const Symbol> w) {
  std::vector<Rational> out;
  out.reserve(w.size() + 1);
  RVector r = a.initial;
  out.push_back(dot(r, a.final));
  for (auto s : w) {
    check_symbol(a, s);
    r = row_apply(r, a.transitions[s]);
    out.push_back(dot(r, a.final));
  }
  return out;
}

bool wfa_is_deterministic(const Wfa& a) {
  auto at_most_one = [](auto&& get, std::size_t n) {
    std::size_t nz = 0;
    for (std::size_t i = 0; i < n; ++i) nz += !get(i).is_zero();
    return nz <= 1;
  };
  if (!at_most_one([&](std::size_t i) { return a.initial[i]; }, a.states())) return false;
  for (const auto& m : a.transitions) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (!at_most_one([&](std::size_t j) { return m(r, j); }, m.cols())) return false;
    }
  }
  return true;
}

Wfa random_wfa(Rng& rng, std::size_t states, std::size_t alphabet) {
  Wfa a;
  auto draw_vec = [&] {
    RVector v(states);
    do {
      for (auto& x : v) x = draw_half(rng);
    } while (v.is_zero());
    return v;
  };
  a.initial = draw_vec();
  for (std::size_t s = 0; s < alphabet; ++s) {
    RMatrix m(states, states);
    for (std::size_t i = 0; i < states; ++i) {
      for (std::size_t j = 0; j < states; ++j) m(i, j) = draw_half(rng);
    }
    a.transitions.push_back(std::move(m));
  }
  a.final = draw_vec();
  return a;
}

Word random_word(Rng& rng, std::size_t alphabet, std::size_t length) {
  Word w(length);
  for (auto& s : w) s = rng.index(alphabet);
  return w;
}

}  // namespace rnnlab
