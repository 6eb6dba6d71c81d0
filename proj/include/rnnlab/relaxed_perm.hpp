#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rnnlab/linalg.hpp"

namespace rnnlab {

/// A map {0..d-1} -> {0..d-1} (not necessarily injective). As a matrix it is
/// column-one-hot: column i has its single 1 in row target(i).
class RelaxedPermutation {
 public:
  RelaxedPermutation() = default;
  /// Throws DimensionError if any target is out of range.
  explicit RelaxedPermutation(std::vector<std::size_t> targets);

  static RelaxedPermutation identity(std::size_t d);

  std::size_t size() const noexcept { return t_.size(); }
  std::size_t operator[](std::size_t i) const { return t_[i]; }
  const std::vector<std::size_t>& targets() const noexcept { return t_; }

  bool is_bijective() const;
  RMatrix to_matrix() const;
  std::string str() const;

  friend bool operator==(const RelaxedPermutation&, const RelaxedPermutation&) = default;

 private:
  std::vector<std::size_t> t_;
};

/// Map composition k -> p(q(k)); matches the matrix product P_p · P_q.
RelaxedPermutation perm_compose(const RelaxedPermutation& p, const RelaxedPermutation& q);

/// Moves a diagonal across a relaxed permutation: D·P = P·diag(result),
/// with result[k] = d[p(k)].
RVector perm_apply_diag(const RelaxedPermutation& p, const RVector& d);

}  // namespace rnnlab
