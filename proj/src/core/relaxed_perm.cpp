#include "rnnlab/relaxed_perm.hpp"

namespace rnnlab {

RelaxedPermutation::RelaxedPermutation(std::vector<std::size_t> targets) : t_(std::move(targets)) {
  for (auto x : t_) {
    if (x >= t_.size()) throw DimensionError("relaxed permutation target out of range");
  }
}

RelaxedPermutation RelaxedPermutation::identity(std::size_t d) {
  std::vector<std::size_t> t(d);
  for (std::size_t i = 0; i < d; ++i) t[i] = i;
  return RelaxedPermutation(std::move(t));
}

bool RelaxedPermutation::is_bijective() const {
  std::vector<bool> hit(t_.size(), false);
  for (auto x : t_) {
    if (hit[x]) return false;
    hit[x] = true;
  }
  return true;
}

RMatrix RelaxedPermutation::to_matrix() const {
  RMatrix m(t_.size(), t_.size());
  for (std::size_t i = 0; i < t_.size(); ++i) m(t_[i], i) = 1;
  return m;
}

std::string RelaxedPermutation::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(t_[i]);
  }
  return out + ")";
}

RelaxedPermutation perm_compose(const RelaxedPermutation& p, const RelaxedPermutation& q) {
  if (p.size() != q.size()) throw DimensionError("perm_compose: size mismatch");
  std::vector<std::size_t> t(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) t[k] = p[q[k]];
  return RelaxedPermutation(std::move(t));
}

RVector perm_apply_diag(const RelaxedPermutation& p, const RVector& d) {
  if (p.size() != d.size()) throw DimensionError("perm_apply_diag: size mismatch");
  RVector out(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) out[k] = d[p[k]];
  return out;
}

}  // namespace rnnlab
