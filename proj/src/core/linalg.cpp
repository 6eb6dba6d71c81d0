#include "rnnlab/linalg.hpp"

#include <sstream>

namespace rnnlab {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace

RVector RVector::unit(std::size_t n, std::size_t i) {
  require(i < n, "unit vector index out of range");
  RVector v(n);
  v[i] = 1;
  return v;
}

bool RVector::is_zero() const {
  for (const auto& x : v_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

std::string RVector::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (i) out += ' ';
    out += v_[i].str();
  }
  return out + "]";
}

RVector operator+(const RVector& a, const RVector& b) {
  require(a.size() == b.size(), "vector add: size mismatch");
  RVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RVector operator-(const RVector& a, const RVector& b) {
  require(a.size() == b.size(), "vector sub: size mismatch");
  RVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

RVector operator*(const Rational& s, const RVector& v) {
  RVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

Rational dot(const RVector& a, const RVector& b) {
  require(a.size() == b.size(), "dot: size mismatch");
  Rational acc;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_zero() && !b[i].is_zero()) acc += a[i] * b[i];
  }
  return acc;
}

RVector hadamard(const RVector& a, const RVector& b) {
  require(a.size() == b.size(), "hadamard: size mismatch");
  RVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

RVector concat(const RVector& a, const RVector& b) {
  std::vector<Rational> xs(a.begin(), a.end());
  xs.insert(xs.end(), b.begin(), b.end());
  return RVector(std::move(xs));
}

RMatrix::RMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  a_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, "matrix literal: ragged rows");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

RMatrix RMatrix::identity(std::size_t n) {
  RMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RMatrix RMatrix::diag(const RVector& d) {
  RMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

RMatrix RMatrix::outer(const RVector& u, const RVector& v) {
  RMatrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i].is_zero()) continue;
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
  }
  return m;
}

RVector RMatrix::row(std::size_t i) const {
  require(i < rows_, "row index out of range");
  return RVector(std::vector<Rational>(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                                       a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)));
}

RVector RMatrix::col(std::size_t j) const {
  require(j < cols_, "column index out of range");
  RVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

RMatrix RMatrix::transpose() const {
  RMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

std::string RMatrix::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ' ';
      os << (*this)(i, j);
    }
  }
  os << ']';
  return os.str();
}

RMatrix operator+(const RMatrix& a, const RMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix add: shape mismatch");
  RMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  }
  return out;
}

RMatrix operator-(const RMatrix& a, const RMatrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sub: shape mismatch");
  RMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  }
  return out;
}

RMatrix operator*(const Rational& s, const RMatrix& m) {
  RMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = s * m(i, j);
  }
  return out;
}

RMatrix mat_mul(const RMatrix& a, const RMatrix& b) {
  require(a.cols() == b.rows(), "mat_mul: inner dimension mismatch");
  RMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const Rational& bkj = b(k, j);
        if (!bkj.is_zero()) out(i, j) += aik * bkj;
      }
    }
  }
  return out;
}

RVector row_apply(const RVector& r, const RMatrix& m) {
  require(r.size() == m.rows(), "row_apply: dimension mismatch");
  RVector out(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (r[i].is_zero()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_zero()) out[j] += r[i] * m(i, j);
    }
  }
  return out;
}

RVector mat_vec(const RMatrix& m, const RVector& v) {
  require(v.size() == m.cols(), "mat_vec: dimension mismatch");
  RVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Rational acc;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_zero() && !v[j].is_zero()) acc += m(i, j) * v[j];
    }
    out[i] = acc;
  }
  return out;
}

std::size_t rank(RMatrix m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t pivot = r;
    while (pivot < m.rows() && m(pivot, c).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(r, j));
    }
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c).is_zero()) continue;
      const Rational f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

}  // namespace rnnlab
