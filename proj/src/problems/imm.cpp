#include "rnnlab/imm.hpp"

#include <algorithm>
#include <stdexcept>

namespace rnnlab {
namespace {

std::int64_t mod_floor(std::int64_t a, std::uint64_t m) {
  const auto mm = static_cast<std::int64_t>(m);
  const std::int64_t r = a % mm;
  return r < 0 ? r + mm : r;
}

IntMatrix3 mul_mod(const IntMatrix3& a, const IntMatrix3& b, std::uint64_t m) {
  IntMatrix3 c{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      __int128 s = 0;
      for (int k = 0; k < 3; ++k) s += static_cast<__int128>(a[i][k]) * b[k][j];
      c[i][j] = static_cast<std::int64_t>(s % static_cast<__int128>(m));
      if (c[i][j] < 0) c[i][j] += static_cast<std::int64_t>(m);
    }
  }
  return c;
}

IntMatrix3 sample_matrix(Rng& rng, const double (&p)[3]) {
  IntMatrix3 a{};
  for (auto& row : a) {
    for (auto& x : row) {
      const double u = rng.unit();
      x = u < p[0] ? -1 : (u < p[0] + p[1] ? 0 : 1);
    }
  }
  return a;
}

}  // namespace

IntMatrix3 int_identity3() {
  IntMatrix3 a{};
  for (int i = 0; i < 3; ++i) a[i][i] = 1;
  return a;
}

bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) return false;
  }
  return true;
}

std::int64_t det_mod(const IntMatrix3& a, std::uint64_t m) {
  __int128 d = 0;
  d += static_cast<__int128>(a[0][0]) * (static_cast<__int128>(a[1][1]) * a[2][2] - static_cast<__int128>(a[1][2]) * a[2][1]);
  d -= static_cast<__int128>(a[0][1]) * (static_cast<__int128>(a[1][0]) * a[2][2] - static_cast<__int128>(a[1][2]) * a[2][0]);
  d += static_cast<__int128>(a[0][2]) * (static_cast<__int128>(a[1][0]) * a[2][1] - static_cast<__int128>(a[1][1]) * a[2][0]);
  __int128 r = d % static_cast<__int128>(m);
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

ImmModInstance gen_imm_mod(Rng& rng, std::size_t blocks, std::uint64_t m, std::size_t query) {
  if (!is_prime(m)) throw std::invalid_argument("imm-mod: modulus must be prime");
  if (query >= 9) throw std::invalid_argument("imm-mod: query index must be in [0, 9)");
  ImmModInstance inst{m, query, {}};
  constexpr double uniform[3] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  for (std::size_t t = 0; t < blocks; ++t) {
    IntMatrix3 a;
    do {
      a = sample_matrix(rng, uniform);
    } while (det_mod(a, m) == 0);
    inst.matrices.push_back(a);
  }
  return inst;
}

std::vector<std::int64_t> imm_mod_oracle(const ImmModInstance& inst) {
  if (inst.modulus < 2 || inst.query >= 9) throw std::invalid_argument("imm-mod: malformed instance");
  std::vector<std::int64_t> out;
  IntMatrix3 p = int_identity3();
  for (const auto& a : inst.matrices) {
    IntMatrix3 reduced{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) reduced[i][j] = mod_floor(a[i][j], inst.modulus);
    }
    p = mul_mod(p, reduced, inst.modulus);
    out.push_back(p[inst.query / 3][inst.query % 3]);
  }
  return out;
}

ImmZInstance gen_imm_z(Rng& rng, std::size_t blocks) {
  constexpr double probs[3] = {0.45, 0.10, 0.45};
  ImmZInstance inst;
  for (std::size_t t = 0; t < blocks; ++t) inst.matrices.push_back(sample_matrix(rng, probs));
  return inst;
}

ImmZInstance gen_imm_z_with_label(Rng& rng, std::size_t blocks, bool label, std::optional<std::int64_t> clip,
                                  std::size_t max_tries) {
  for (std::size_t i = 0; i < max_tries; ++i) {
    auto inst = gen_imm_z(rng, blocks);
    if (imm_z_oracle(inst, clip) == label) return inst;
  }
  throw std::runtime_error("imm-z: rejection sampling exhausted its budget");
}

std::array<std::array<mpz_class, 3>, 3> imm_z_product(const ImmZInstance& inst) {
  std::array<std::array<mpz_class, 3>, 3> p;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) p[i][j] = i == j ? 1 : 0;
  }
  for (const auto& a : inst.matrices) {
    std::array<std::array<mpz_class, 3>, 3> q;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        mpz_class s = 0;
        for (int k = 0; k < 3; ++k) s += p[i][k] * a[k][j];
        q[i][j] = std::move(s);
      }
    }
    p = std::move(q);
  }
  return p;
}

bool imm_z_oracle(const ImmZInstance& inst, std::optional<std::int64_t> clip) {
  if (!clip) return imm_z_product(inst)[0][0] == 0;
  const __int128 cap = *clip;
  if (cap < 0) throw std::invalid_argument("imm-z: negative clip cap");
  std::array<std::array<__int128, 3>, 3> p{};
  for (int i = 0; i < 3; ++i) p[i][i] = 1;
  for (const auto& a : inst.matrices) {
    std::array<std::array<__int128, 3>, 3> q{};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        __int128 s = 0;
        for (int k = 0; k < 3; ++k) s += p[i][k] * a[k][j];
        q[i][j] = std::clamp(s, -cap, cap);
      }
    }
    p = q;
  }
  return p[0][0] == 0;
}

}  // namespace rnnlab
