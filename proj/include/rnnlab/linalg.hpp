#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnnlab/rational.hpp"

namespace rnnlab {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RVector {
 public:
  RVector() = default;
  explicit RVector(std::size_t n) : v_(n) {}
  RVector(std::initializer_list<Rational> xs) : v_(xs) {}
  explicit RVector(std::vector<Rational> xs) : v_(std::move(xs)) {}

  static RVector unit(std::size_t n, std::size_t i);

  std::size_t size() const noexcept { return v_.size(); }
  Rational& operator[](std::size_t i) { return v_[i]; }
  const Rational& operator[](std::size_t i) const { return v_[i]; }
  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }
  const std::vector<Rational>& values() const noexcept { return v_; }

  bool is_zero() const;
  std::string str() const;

  friend bool operator==(const RVector&, const RVector&) = default;

 private:
  std::vector<Rational> v_;
};

RVector operator+(const RVector& a, const RVector& b);
RVector operator-(const RVector& a, const RVector& b);
RVector operator*(const Rational& s, const RVector& v);
Rational dot(const RVector& a, const RVector& b);
RVector hadamard(const RVector& a, const RVector& b);
RVector concat(const RVector& a, const RVector& b);

/// Dense row-major rational matrix.
class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  /// Row-wise literal; all rows must have equal length.
  RMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RMatrix identity(std::size_t n);
  static RMatrix diag(const RVector& d);
  /// u vᵀ
  static RMatrix outer(const RVector& u, const RVector& v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  RVector row(std::size_t i) const;
  RVector col(std::size_t j) const;
  RMatrix transpose() const;
  const std::vector<Rational>& values() const noexcept { return a_; }

  std::string str() const;

  friend bool operator==(const RMatrix&, const RMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> a_;
};

RMatrix operator+(const RMatrix& a, const RMatrix& b);
RMatrix operator-(const RMatrix& a, const RMatrix& b);
RMatrix operator*(const Rational& s, const RMatrix& m);
RMatrix mat_mul(const RMatrix& a, const RMatrix& b);
inline RMatrix operator*(const RMatrix& a, const RMatrix& b) { return mat_mul(a, b); }

/// r·M for a row vector r.
RVector row_apply(const RVector& r, const RMatrix& m);
/// M·v for a column vector v.
RVector mat_vec(const RMatrix& m, const RVector& v);

/// Exact rank by Gaussian elimination over the rationals.
std::size_t rank(RMatrix m);

}  // namespace rnnlab
