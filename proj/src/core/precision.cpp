#include "rnnlab/precision.hpp"

namespace rnnlab {

std::size_t encoded_bits(const Rational& r) {
  if (r.is_zero()) return 1;
  return r.num_bits() + r.den_bits();
}

PrecisionReport precision_of(std::span<const Rational> values) {
  PrecisionMeter m;
  for (const auto& v : values) m.add(v);
  return m.report();
}

}  // namespace rnnlab
