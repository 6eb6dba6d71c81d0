#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rnnlab {

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact rational number in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in 63 bits are held inline;
/// anything larger lives in an immutable, shared GMP pair. The representation
/// is canonical, so equality is structural. Zero is 0/1.
class Rational {
 public:
  Rational() noexcept = default;

  template <std::integral T>
  Rational(T v) {  // NOLINT(google-explicit-constructor)
    if constexpr (std::is_signed_v<T>) {
      if (static_cast<std::int64_t>(v) != std::numeric_limits<std::int64_t>::min()) {
        num_ = static_cast<std::int64_t>(v);
        return;
      }
    } else {
      if (static_cast<std::uint64_t>(v) <= kSmallMax) {
        num_ = static_cast<std::int64_t>(v);
        return;
      }
    }
    *this = Rational(mpz_class(std::to_string(v)), mpz_class(1));
  }

  /// num/den, reduced. Throws ArithmeticError when den == 0.
  Rational(std::int64_t num, std::int64_t den);
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(const mpz_class& num);

  /// Accepts "a" or "a/b" with optional sign on the numerator.
  static Rational parse(std::string_view text);

  mpz_class num() const;
  mpz_class den() const;

  int sign() const noexcept;
  bool is_zero() const noexcept { return !big_ && num_ == 0; }
  bool is_integer() const noexcept;
  bool is_small() const noexcept { return !big_; }

  /// Bit length of |numerator| (0 for zero) and of the denominator.
  std::size_t num_bits() const;
  std::size_t den_bits() const;

  /// Canonical "num/den" text, e.g. "-3/2", "0/1", "5/1".
  std::string str() const;
  double to_double() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  /// Throws ArithmeticError on division by zero; see checked_div.
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static constexpr std::uint64_t kSmallMax =
      static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());

  struct Big {
    mpz_class num;
    mpz_class den;
  };

  static Rational from_reduced_i128(__int128 num, __int128 den);
  static Rational from_reduced_mpz(mpz_class num, mpz_class den);
  static Rational reduce_mpz(mpz_class num, mpz_class den);
  const mpz_class& big_num() const { return big_->num; }
  const mpz_class& big_den() const { return big_->den; }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const Big> big_;
};

std::optional<Rational> checked_div(const Rational& a, const Rational& b);
Rational abs(const Rational& a);
std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace rnnlab
