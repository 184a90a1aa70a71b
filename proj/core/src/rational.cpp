#include "cabne/rational.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "cabne/errors.hpp"

namespace cabne {
namespace {

__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

constexpr i128 kMax64 = std::numeric_limits<std::int64_t>::max();

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class mpz_from(i128 value) {
  const bool negative = value < 0;
  u128 magnitude = negative ? u128(-(value + 1)) + 1 : u128(value);
  const std::uint64_t limbs[2] = {static_cast<std::uint64_t>(magnitude),
                                  static_cast<std::uint64_t>(magnitude >> 64)};
  mpz_class out;
  mpz_import(out.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, limbs);
  if (negative) out = -out;
  return out;
}

bool fits_small(const mpz_class& value) {
  return mpz_fits_slong_p(value.get_mpz_t()) != 0 &&
         value != mpz_class(std::numeric_limits<long>::min());
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidInput("rational with zero denominator");
  *this = from_wide(num, den);
}

Rational::Rational(const mpq_class& value) {
  mpq_class copy(value);
  copy.canonicalize();
  *this = canonical(std::move(copy));
}

Rational Rational::from_wide(i128 num, i128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const u128 mag = num < 0 ? u128(-num) : u128(num);
  const u128 g = gcd128(mag, u128(den));
  if (g > 1) {
    num /= i128(g);
    den /= i128(g);
  }
  if (num <= kMax64 && num >= -kMax64 && den <= kMax64) {
    Rational out;
    out.num_ = static_cast<std::int64_t>(num);
    out.den_ = static_cast<std::int64_t>(den);
    return out;
  }
  mpq_class big;
  big.get_num() = mpz_from(num);
  big.get_den() = mpz_from(den);
  Rational out;
  out.big_ = std::make_shared<const mpq_class>(std::move(big));
  return out;
}

Rational Rational::canonical(mpq_class value) {
  Rational out;
  if (fits_small(value.get_num()) && fits_small(value.get_den())) {
    out.num_ = value.get_num().get_si();
    out.den_ = value.get_den().get_si();
    return out;
  }
  out.big_ = std::make_shared<const mpq_class>(std::move(value));
  return out;
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw InvalidInput("empty rational literal");
  try {
    if (const auto dot = s.find('.'); dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw InvalidInput("mixed decimal/fraction literal: " + s);
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      if (digits.empty() || digits == "-" || digits == "+") throw InvalidInput("bad decimal literal: " + s);
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, s.size() - dot - 1);
      if (digits.front() == '+') digits.erase(digits.begin());
      mpq_class q(mpz_class(digits), scale);
      q.canonicalize();
      return canonical(std::move(q));
    }
    if (s.front() == '+') s.erase(s.begin());
    mpq_class q(s);
    if (q.get_den() == 0) throw InvalidInput("rational with zero denominator: " + s);
    q.canonicalize();
    return canonical(std::move(q));
  } catch (const std::invalid_argument&) {
    throw InvalidInput("bad rational literal: " + std::string(text));
  }
}

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw InvalidInput("non-finite double cannot be made rational");
  return Rational(mpq_class(value));
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

bool Rational::is_integer() const {
  if (big_) return big_->get_den() == 1;
  return den_ == 1;
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class out;
  out.get_num() = mpz_class(static_cast<long>(num_));
  out.get_den() = mpz_class(static_cast<long>(den_));
  return out;
}

double Rational::to_double() const {
  if (big_) return big_->get_d();
  if (den_ == 1) return static_cast<double>(num_);
  return to_mpq().get_d();
}

std::string Rational::str() const {
  if (!big_) {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  return big_->get_str();
}

std::string Rational::decimal(int digits) const {
  if (digits < 0) digits = 0;
  const mpq_class q = to_mpq();
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpq_class scaled = ::abs(q) * scale;
  // Round half away from zero.
  mpz_class twice = (2 * scaled.get_num() + scaled.get_den()) / (2 * scaled.get_den());
  std::string body = twice.get_str();
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  }
  if (sgn(q) < 0 && twice != 0) body.insert(0, "-");
  return body;
}

Rational Rational::numerator() const {
  if (big_) return Rational(mpq_class(big_->get_num()));
  return Rational(num_);
}

Rational Rational::denominator() const {
  if (big_) return Rational(mpq_class(big_->get_den()));
  return Rational(den_);
}

Rational Rational::floor() const {
  if (!big_) {
    std::int64_t q = num_ / den_;
    if ((num_ % den_ != 0) && (num_ < 0)) --q;
    return Rational(q);
  }
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
  return Rational(mpq_class(out));
}

Rational Rational::ceil() const {
  if (!big_) {
    std::int64_t q = num_ / den_;
    if ((num_ % den_ != 0) && (num_ > 0)) ++q;
    return Rational(q);
  }
  mpz_class out;
  mpz_cdiv_q(out.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
  return Rational(mpq_class(out));
}

std::size_t Rational::hash() const {
  if (!big_) {
    std::uint64_t h = static_cast<std::uint64_t>(num_) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(den_) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
  const std::size_t a = mpz_getlimbn(big_->get_num_mpz_t(), 0);
  const std::size_t b = mpz_getlimbn(big_->get_den_mpz_t(), 0);
  return a * 0x9E3779B97F4A7C15ULL ^ (b + 0x632BE59BD9B4E019ULL);
}

Rational Rational::operator-() const {
  if (!big_) {
    Rational out;
    out.num_ = -num_;
    out.den_ = den_;
    return out;
  }
  return canonical(-*big_);
}

Rational& Rational::operator+=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == rhs.den_) {
      *this = from_wide(i128(num_) + rhs.num_, den_);
    } else {
      *this = from_wide(i128(num_) * rhs.den_ + i128(rhs.num_) * den_, i128(den_) * rhs.den_);
    }
    return *this;
  }
  *this = canonical(to_mpq() + rhs.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    if (den_ == rhs.den_) {
      *this = from_wide(i128(num_) - rhs.num_, den_);
    } else {
      *this = from_wide(i128(num_) * rhs.den_ - i128(rhs.num_) * den_, i128(den_) * rhs.den_);
    }
    return *this;
  }
  *this = canonical(to_mpq() - rhs.to_mpq());
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  if (!big_ && !rhs.big_) {
    *this = from_wide(i128(num_) * rhs.num_, i128(den_) * rhs.den_);
    return *this;
  }
  *this = canonical(to_mpq() * rhs.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw InvalidInput("division by zero");
  if (!big_ && !rhs.big_) {
    *this = from_wide(i128(num_) * rhs.den_, i128(den_) * rhs.num_);
    return *this;
  }
  *this = canonical(to_mpq() / rhs.to_mpq());
  return *this;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    const i128 lhs = i128(a.num_) * b.den_;
    const i128 rhs = i128(b.num_) * a.den_;
    return lhs <=> rhs;
  }
  const int c = cmp(a.to_mpq(), b.to_mpq());
  return c <=> 0;
}

std::ostream& operator<<(std::ostream& os, const Rational& value) { return os << value.str(); }

}  // namespace cabne
