#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cabne {

/// Exact rational number.
///
/// Values whose reduced numerator and denominator fit in 64 bits are stored
/// inline; anything larger is promoted to a shared, immutable GMP rational.
/// The representation is canonical: a value that fits inline is never held
/// in the big form, so equality and hashing can work on either form.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(int value) : num_(value) {}           // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(const mpq_class& value);

  /// Parses "n", "n/d", or a finite decimal such as "-1.25".
  static Rational parse(std::string_view text);
  /// Exact value of a finite double.
  static Rational from_double(double value);

  [[nodiscard]] bool is_small() const { return !big_; }
  [[nodiscard]] int sign() const;
  [[nodiscard]] bool is_zero() const { return !big_ && num_ == 0; }
  [[nodiscard]] bool is_integer() const;

  [[nodiscard]] mpq_class to_mpq() const;
  [[nodiscard]] double to_double() const;
  /// "n/d", or "n" when the denominator is 1.
  [[nodiscard]] std::string str() const;
  /// Fixed-point rendering with `digits` fractional digits (rounded half away from zero).
  [[nodiscard]] std::string decimal(int digits) const;

  [[nodiscard]] Rational numerator() const;
  [[nodiscard]] Rational denominator() const;
  [[nodiscard]] Rational floor() const;
  [[nodiscard]] Rational ceil() const;
  [[nodiscard]] Rational abs() const { return sign() < 0 ? -*this : *this; }
  [[nodiscard]] std::size_t hash() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  __extension__ typedef __int128 Wide;
  static Rational from_wide(Wide num, Wide den);
  static Rational canonical(mpq_class value);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Rational& value);

[[nodiscard]] inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
[[nodiscard]] inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

struct RationalHash {
  std::size_t operator()(const Rational& value) const { return value.hash(); }
};

}  // namespace cabne
