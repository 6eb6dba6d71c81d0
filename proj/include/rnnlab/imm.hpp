#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "rnnlab/random.hpp"

namespace rnnlab {

using IntMatrix3 = std::array<std::array<std::int64_t, 3>, 3>;

IntMatrix3 int_identity3();

bool is_prime(std::uint64_t m);

/// Prefix products over Z_m; target v_t is entry `query` (row-major, 0..8) of P_t.
struct ImmModInstance {
  std::uint64_t modulus = 2;
  std::size_t query = 0;
  std::vector<IntMatrix3> matrices;
};

std::int64_t det_mod(const IntMatrix3& a, std::uint64_t m);

/// Entries uniform over {−1, 0, 1}; each matrix is resampled until invertible
/// mod m. Throws std::invalid_argument for non-prime m or query ≥ 9.
ImmModInstance gen_imm_mod(Rng& rng, std::size_t blocks, std::uint64_t m, std::size_t query);
/// v_1..v_T in [0, m).
std::vector<std::int64_t> imm_mod_oracle(const ImmModInstance& inst);

/// Product over Z; label 1 iff (P_T)_{0,0} = 0.
struct ImmZInstance {
  std::vector<IntMatrix3> matrices;
};

/// Entries −1, 0, 1 with probabilities 0.45, 0.10, 0.45.
ImmZInstance gen_imm_z(Rng& rng, std::size_t blocks);
/// Rejection-samples until the label equals `label`. Throws std::runtime_error
/// if `max_tries` draws all miss.
ImmZInstance gen_imm_z_with_label(Rng& rng, std::size_t blocks, bool label, std::optional<std::int64_t> clip,
                                  std::size_t max_tries = 100000);

std::array<std::array<mpz_class, 3>, 3> imm_z_product(const ImmZInstance& inst);
/// Exact label, or the label of the product with every intermediate entry
/// saturated to [−cap, cap] when `clip` is set.
bool imm_z_oracle(const ImmZInstance& inst, std::optional<std::int64_t> clip = std::nullopt);

}  // namespace rnnlab
