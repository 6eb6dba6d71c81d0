#pragma once

#include <cstddef>
#include <span>

#include "rnnlab/linalg.hpp"

namespace rnnlab {

/// Encoded size of a rational: bits(|num|) + bits(den). Zero is encoded as a
/// single one-bit token, so encoded_bits(0) == 1.
std::size_t encoded_bits(const Rational& r);

struct PrecisionReport {
  std::size_t max_value_bits = 0;
  std::size_t total_bits = 0;
  std::size_t values = 0;
};

PrecisionReport precision_of(std::span<const Rational> values);

/// Running maximum over every value fed to it.
class PrecisionMeter {
 public:
  void add(const Rational& r) {
    const auto b = encoded_bits(r);
    if (b > rep_.max_value_bits) rep_.max_value_bits = b;
    rep_.total_bits += b;
    ++rep_.values;
  }
  void add(const RVector& v) {
    for (const auto& x : v) add(x);
  }
  void merge(const PrecisionReport& o) {
    if (o.max_value_bits > rep_.max_value_bits) rep_.max_value_bits = o.max_value_bits;
    rep_.total_bits += o.total_bits;
    rep_.values += o.values;
  }
  const PrecisionReport& report() const noexcept { return rep_; }

 private:
  PrecisionReport rep_;
};

}  // namespace rnnlab
