#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cts {

// Exact fraction in canonical reduced form: gcd(num, den) = 1, den > 0.
// Arithmetic runs through 128-bit intermediates; a reduced result that does
// not fit in 64 bits throws std::overflow_error instead of wrapping.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t num, std::int64_t den) : Rational(reduce(num, den)) {}

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return reduce(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                  i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return reduce(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                  i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return reduce(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return reduce(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    // Cross-multiplication cannot overflow in 128 bits.
    i128 lhs = i128(a.num_) * b.den_;
    i128 rhs = i128(b.num_) * a.den_;
    return lhs < rhs   ? std::strong_ordering::less
           : lhs > rhs ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
  }

  // Always "num/den", e.g. "0/1", "-2/3".
  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Accepts "a/b" or a bare integer "a"; re-canonicalizes non-reduced input.
  static Rational parse(std::string_view text);

  friend std::size_t hash_value(const Rational& r) {
    std::size_t h = static_cast<std::size_t>(r.num_) * 0x9e3779b97f4a7c15ULL;
    return h ^ (static_cast<std::size_t>(r.den_) + (h << 6) + (h >> 2));
  }

 private:
  using i128 = __int128;

  static constexpr i128 kMin = INT64_MIN;
  static constexpr i128 kMax = INT64_MAX;

  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational reduce(i128 num, i128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num != 0) {
      i128 g = gcd128(num, den);
      num /= g;
      den /= g;
    } else {
      den = 1;
    }
    if (num < kMin || num > kMax || den > kMax)
      throw std::overflow_error("rational exceeds 64-bit range");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&](const char* why) {
    throw std::invalid_argument("cannot parse rational \"" +
                                std::string(text) + "\": " + why);
  };
  auto read_int = [&](std::string_view s, bool allow_sign) -> std::int64_t {
    if (s.empty()) fail("empty component");
    std::size_t pos = 0;
    bool neg = false;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) {
      neg = s[0] == '-';
      pos = 1;
      if (pos == s.size()) fail("sign without digits");
    }
    i128 value = 0;
    for (; pos < s.size(); ++pos) {
      if (s[pos] < '0' || s[pos] > '9') fail("invalid digit");
      value = value * 10 + (s[pos] - '0');
      if (value > kMax + 1) fail("integer out of range");
    }
    if (neg) value = -value;
    if (value < kMin || value > kMax) fail("integer out of range");
    return static_cast<std::int64_t>(value);
  };
  std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(read_int(text, true));
  std::int64_t num = read_int(text.substr(0, slash), true);
  std::int64_t den = read_int(text.substr(slash + 1), false);
  if (den == 0) fail("zero denominator");
  return Rational(num, den);
}

}  // namespace cts
