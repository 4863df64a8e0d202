#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace mporbits::arith {

using Integer = mpz_class;
using Rational = mpq_class;
using Prime = std::uint32_t;

bool is_prime(std::uint64_t n);

// Throws std::invalid_argument for p = 2 or composite p.
void require_odd_prime(Prime p);

Integer pow_p(Prime p, unsigned long k);

class Valuation {
 public:
  explicit Valuation(long v) : value_(v), infinite_(false) {}
  static Valuation infinity() { return Valuation(); }

  bool is_infinite() const { return infinite_; }
  long value() const;

  friend bool operator==(const Valuation& a, const Valuation& b);
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);
  Valuation operator+(const Valuation& o) const;

  std::string to_string() const;

 private:
  Valuation() : value_(0), infinite_(true) {}
  long value_;
  bool infinite_;
};

Valuation val_p(const Rational& x, Prime p);
long val_p(const Integer& n, Prime p);  // n != 0

// Exact rational tagged with a prime and its cached valuation.
class PadicScalar {
 public:
  PadicScalar(Rational value, Prime p);

  const Rational& value() const { return value_; }
  Prime prime() const { return p_; }
  Valuation valuation() const { return v_; }
  bool is_zero() const { return v_.is_infinite(); }

  // x / p^valuation(x); zero stays zero.
  Rational unit_part() const;

  PadicScalar operator+(const PadicScalar& o) const;
  PadicScalar operator-(const PadicScalar& o) const;
  PadicScalar operator*(const PadicScalar& o) const;
  PadicScalar operator/(const PadicScalar& o) const;
  PadicScalar operator-() const;
  bool operator==(const PadicScalar& o) const { return p_ == o.p_ && value_ == o.value_; }

 private:
  void check_same_prime(const PadicScalar& o) const;
  Rational value_;
  Prime p_;
  Valuation v_;
};

// Element of Z/pZ with the prime carried along.
class Fp {
 public:
  Fp(std::int64_t value, Prime p);

  static Fp from_rational(const Rational& q, Prime p);  // requires val_p(q) >= 0

  std::uint32_t value() const { return r_; }
  Prime prime() const { return p_; }
  bool is_zero() const { return r_ == 0; }

  // Representative in (-p/2, p/2).
  long centered() const;

  Fp operator+(const Fp& o) const;
  Fp operator-(const Fp& o) const;
  Fp operator*(const Fp& o) const;
  Fp operator/(const Fp& o) const;
  Fp operator-() const;
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp inverse() const;
  Fp pow(std::uint64_t e) const;

  bool operator==(const Fp& o) const { return r_ == o.r_ && p_ == o.p_; }
  bool operator!=(const Fp& o) const { return !(*this == o); }

 private:
  std::uint32_t r_;
  Prime p_;
};

std::string to_string(const Fp& x);
std::string to_string(const Rational& q);  // always "a/b"

// Smallest positive integer that is a non-square mod p.
std::uint32_t smallest_nonresidue(Prime p);

enum class FpSquareClass { zero, square, nonsquare };
FpSquareClass square_class_fp(const Fp& x);

struct SquareClassQp {
  enum class Tag { one, u, p, up };
  Tag tag;

  std::string to_string() const;
  // 1, u, p or u*p with u = smallest_nonresidue(p).
  Rational representative(Prime p) const;
  auto operator<=>(const SquareClassQp&) const = default;
};

SquareClassQp square_class_qp(const Rational& x, Prime p);  // x != 0

// Square root of x * p^(-2 floor(v/2)) modulo p^digits, when it exists.
// The root returned reduces to the smaller of the two residue roots.
std::optional<Integer> padic_sqrt(const PadicScalar& x, unsigned digits);

// q' = a / p^k with q' == q mod p^precision Z_p and 0 <= a < p^(precision + k).
Rational truncate_padic(const Rational& q, Prime p, long precision);

// Inverse of a p-adic unit modulo p^k as an integer in [0, p^k).
Integer inverse_mod_ppow(const Rational& unit, Prime p, unsigned long k);

}  // namespace mporbits::arith
