#pragma once

#include <cstddef>

#include "rnnlab/linalg.hpp"

namespace rnnlab {

/// k×k block of the connectivity Hankel matrix: row s is the prefix that
/// declares source s, column t the suffix that declares target t, with no
/// edges in between. Entries are membership bits.
RMatrix conn_hankel_block(std::size_t k);

/// Rank of conn_hankel_block(k).
std::size_t hankel_identity_rank(std::size_t k);

}  // namespace rnnlab
