#include "rnnlab/rational.hpp"

#include <cctype>
#include <numeric>
#include <ostream>

namespace rnnlab {
namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr i128 kInlineMax = std::numeric_limits<std::int64_t>::max();

u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

u128 gcd128(u128 a, u128 b) {
  constexpr u128 lim = std::numeric_limits<std::uint64_t>::max();
  while (b != 0) {
    if (a <= lim && b <= lim) {
      return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    }
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class to_mpz(i128 v) {
  const bool neg = v < 0;
  u128 m = uabs(v);
  const auto lo = static_cast<std::uint64_t>(m);
  const auto hi = static_cast<std::uint64_t>(m >> 64);
  mpz_class out;
  const std::uint64_t words[2] = {lo, hi};
  mpz_import(out.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
  if (neg) out = -out;
  return out;
}

bool fits_small(const mpz_class& v) {
  return mpz_sizeinbase(v.get_mpz_t(), 2) <= 63;
}

std::int64_t to_small(const mpz_class& v) {
  return static_cast<std::int64_t>(mpz_get_si(v.get_mpz_t()));
}

std::size_t bit_length(std::uint64_t v) {
  return v == 0 ? 0 : 64 - static_cast<std::size_t>(__builtin_clzll(v));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ArithmeticError("rational with zero denominator");
  if (num == std::numeric_limits<std::int64_t>::min() ||
      den == std::numeric_limits<std::int64_t>::min()) {
    *this = reduce_mpz(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
    return;
  }
  i128 n = num;
  i128 d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const u128 g = gcd128(uabs(n), static_cast<u128>(d));
  *this = from_reduced_i128(n / static_cast<i128>(g), d / static_cast<i128>(g));
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw ArithmeticError("rational with zero denominator");
  *this = reduce_mpz(num, den);
}

Rational::Rational(const mpz_class& num) { *this = from_reduced_mpz(num, mpz_class(1)); }

Rational Rational::reduce_mpz(mpz_class num, mpz_class den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (g != 1) {
    mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
  }
  return from_reduced_mpz(std::move(num), std::move(den));
}

Rational Rational::from_reduced_mpz(mpz_class num, mpz_class den) {
  Rational r;
  if (fits_small(num) && fits_small(den)) {
    r.num_ = to_small(num);
    r.den_ = to_small(den);
    return r;
  }
  r.big_ = std::make_shared<const Big>(Big{std::move(num), std::move(den)});
  return r;
}

Rational Rational::from_reduced_i128(i128 num, i128 den) {
  if (num <= kInlineMax && num >= -kInlineMax && den <= kInlineMax) {
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }
  return from_reduced_mpz(to_mpz(num), to_mpz(den));
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  auto valid_int = [](std::string_view s, bool allow_sign) {
    if (!s.empty() && allow_sign && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  const auto slash = text.find('/');
  std::string_view num_text = text.substr(0, slash);
  std::string_view den_text = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!valid_int(num_text, true) || !valid_int(den_text, false)) {
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  }
  std::string n(num_text);
  if (n.front() == '+') n.erase(0, 1);
  return Rational(mpz_class(n), mpz_class(std::string(den_text)));
}

mpz_class Rational::num() const {
  if (big_) return big_->num;
  return mpz_class(static_cast<long>(num_));
}

mpz_class Rational::den() const {
  if (big_) return big_->den;
  return mpz_class(static_cast<long>(den_));
}

int Rational::sign() const noexcept {
  if (big_) return sgn(big_->num);
  return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const noexcept { return big_ ? big_->den == 1 : den_ == 1; }

std::size_t Rational::num_bits() const {
  if (big_) return mpz_sizeinbase(big_->num.get_mpz_t(), 2);
  return bit_length(static_cast<std::uint64_t>(num_ < 0 ? -num_ : num_));
}

std::size_t Rational::den_bits() const {
  if (big_) return mpz_sizeinbase(big_->den.get_mpz_t(), 2);
  return bit_length(static_cast<std::uint64_t>(den_));
}

std::string Rational::str() const {
  if (big_) return big_->num.get_str() + "/" + big_->den.get_str();
  return std::to_string(num_) + "/" + std::to_string(den_);
}

double Rational::to_double() const {
  if (big_) return mpq_class(big_->num, big_->den).get_d();
  return static_cast<double>(num_) / static_cast<double>(den_);
}

Rational Rational::operator-() const {
  if (big_) return from_reduced_mpz(-big_->num, big_->den);
  Rational r = *this;
  r.num_ = -num_;
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == 1 && b.den_ == 1) {
      return Rational::from_reduced_i128(static_cast<i128>(a.num_) + b.num_, 1);
    }
    const auto g = static_cast<std::int64_t>(
        std::gcd(static_cast<std::uint64_t>(a.den_), static_cast<std::uint64_t>(b.den_)));
    const i128 ad = a.den_ / g;
    const i128 bd = b.den_ / g;
    i128 num = static_cast<i128>(a.num_) * bd + static_cast<i128>(b.num_) * ad;
    i128 den = ad * b.den_;
    const u128 g2 = gcd128(uabs(num), static_cast<u128>(g));
    if (g2 > 1) {
      num /= static_cast<i128>(g2);
      den /= static_cast<i128>(g2);
    }
    if (num == 0) den = 1;
    return Rational::from_reduced_i128(num, den);
  }
  const mpz_class an = a.num(), ad = a.den(), bn = b.num(), bd = b.den();
  return Rational::reduce_mpz(an * bd + bn * ad, ad * bd);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.num_ == 0 || b.num_ == 0) return Rational();
    if (a.den_ == 1 && b.den_ == 1) {
      return Rational::from_reduced_i128(static_cast<i128>(a.num_) * b.num_, 1);
    }
    const auto g1 = static_cast<std::int64_t>(gcd128(uabs(a.num_), static_cast<u128>(b.den_)));
    const auto g2 = static_cast<std::int64_t>(gcd128(uabs(b.num_), static_cast<u128>(a.den_)));
    const i128 num = static_cast<i128>(a.num_ / g1) * (b.num_ / g2);
    const i128 den = static_cast<i128>(a.den_ / g2) * (b.den_ / g1);
    return Rational::from_reduced_i128(num, den);
  }
  if (a.is_zero() || b.is_zero()) return Rational();
  const mpz_class an = a.num(), ad = a.den(), bn = b.num(), bd = b.den();
  return Rational::reduce_mpz(an * bn, ad * bd);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw ArithmeticError("division by zero");
  if (!b.big_) {
    Rational inv;
    inv.num_ = b.num_ < 0 ? -b.den_ : b.den_;
    inv.den_ = b.num_ < 0 ? -b.num_ : b.num_;
    return a * inv;
  }
  mpz_class n = b.big_den(), d = b.big_num();
  if (d < 0) {
    n = -n;
    d = -d;
  }
  return a * Rational::from_reduced_mpz(std::move(n), std::move(d));
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return a.big_num() == b.big_num() && a.big_den() == b.big_den();
  return false;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    const i128 lhs = static_cast<i128>(a.num_) * b.den_;
    const i128 rhs = static_cast<i128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }
  const int c = cmp(a.num() * b.den(), b.num() * a.den());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::optional<Rational> checked_div(const Rational& a, const Rational& b) {
  if (b.is_zero()) return std::nullopt;
  return a / b;
}

Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace rnnlab
