#include "mporbits/arith.hpp"

#include <stdexcept>

namespace mporbits::arith {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void require_odd_prime(Prime p) {
  if (p == 2) throw std::invalid_argument("p = 2 is not supported; odd primes only");
  if (!is_prime(p)) throw std::invalid_argument("p = " + std::to_string(p) + " is not prime");
}

Integer pow_p(Prime p, unsigned long k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, k);
  return r;
}

long Valuation::value() const {
  if (infinite_) throw std::domain_error("valuation of zero is infinite");
  return value_;
}

bool operator==(const Valuation& a, const Valuation& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
  if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
  if (a.infinite_) return std::strong_ordering::greater;
  if (b.infinite_) return std::strong_ordering::less;
  return a.value_ <=> b.value_;
}

Valuation Valuation::operator+(const Valuation& o) const {
  if (infinite_ || o.infinite_) return infinity();
  return Valuation(value_ + o.value_);
}

std::string Valuation::to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

long val_p(const Integer& n, Prime p) {
  if (n == 0) throw std::domain_error("val_p of zero integer");
  Integer rest;
  Integer prime(p);
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t()));
}

Valuation val_p(const Rational& x, Prime p) {
  if (x == 0) return Valuation::infinity();
  return Valuation(val_p(Integer(x.get_num()), p) - val_p(Integer(x.get_den()), p));
}

PadicScalar::PadicScalar(Rational value, Prime p) : value_(std::move(value)), p_(p), v_(val_p(value_, p)) {
  value_.canonicalize();
}

Rational PadicScalar::unit_part() const {
  if (is_zero()) return Rational(0);
  long v = v_.value();
  Rational scale(pow_p(p_, static_cast<unsigned long>(v < 0 ? -v : v)));
  return v >= 0 ? Rational(value_ / scale) : Rational(value_ * scale);
}

void PadicScalar::check_same_prime(const PadicScalar& o) const {
  if (p_ != o.p_) throw std::invalid_argument("p-adic scalars over different primes");
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
  check_same_prime(o);
  return PadicScalar(Rational(value_ + o.value_), p_);
}
PadicScalar PadicScalar::operator-(const PadicScalar& o) const {
  check_same_prime(o);
  return PadicScalar(Rational(value_ - o.value_), p_);
}
PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
  check_same_prime(o);
  return PadicScalar(Rational(value_ * o.value_), p_);
}
PadicScalar PadicScalar::operator/(const PadicScalar& o) const {
  check_same_prime(o);
  if (o.is_zero()) throw std::domain_error("division by zero p-adic scalar");
  return PadicScalar(Rational(value_ / o.value_), p_);
}
PadicScalar PadicScalar::operator-() const { return PadicScalar(Rational(-value_), p_); }

Fp::Fp(std::int64_t value, Prime p) : p_(p) {
  if (p == 0) throw std::invalid_argument("Fp with p = 0");
  std::int64_t m = value % static_cast<std::int64_t>(p);
  if (m < 0) m += p;
  r_ = static_cast<std::uint32_t>(m);
}

Fp Fp::from_rational(const Rational& q, Prime p) {
  Integer den(q.get_den());
  if (mpz_divisible_ui_p(den.get_mpz_t(), p))
    throw std::domain_error("rational " + q.get_str() + " is not p-integral for p = " + std::to_string(p));
  Fp num(static_cast<std::int64_t>(mpz_fdiv_ui(q.get_num_mpz_t(), p)), p);
  Fp d(static_cast<std::int64_t>(mpz_fdiv_ui(den.get_mpz_t(), p)), p);
  return num / d;
}

long Fp::centered() const {
  long v = r_;
  return 2 * v > static_cast<long>(p_) ? v - static_cast<long>(p_) : v;
}

static void check_prime(Prime a, Prime b) {
  if (a != b) throw std::invalid_argument("Fp operands over different primes");
}

Fp Fp::operator+(const Fp& o) const {
  check_prime(p_, o.p_);
  return Fp(static_cast<std::int64_t>(r_) + o.r_, p_);
}
Fp Fp::operator-(const Fp& o) const {
  check_prime(p_, o.p_);
  return Fp(static_cast<std::int64_t>(r_) - o.r_, p_);
}
Fp Fp::operator*(const Fp& o) const {
  check_prime(p_, o.p_);
  return Fp(static_cast<std::int64_t>((static_cast<std::uint64_t>(r_) * o.r_) % p_), p_);
}
Fp Fp::operator/(const Fp& o) const { return *this * o.inverse(); }
Fp Fp::operator-() const { return Fp(-static_cast<std::int64_t>(r_), p_); }

Fp Fp::pow(std::uint64_t e) const {
  Fp result(1, p_), base = *this;
  while (e) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

Fp Fp::inverse() const {
  if (r_ == 0) throw std::domain_error("inverse of zero in F_p");
  std::int64_t a = r_, b = p_, x0 = 1, x1 = 0;
  while (b) {
    std::int64_t q = a / b;
    std::int64_t t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  return Fp(x0, p_);
}

std::string to_string(const Fp& x) { return std::to_string(x.value()); }

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::uint32_t smallest_nonresidue(Prime p) {
  require_odd_prime(p);
  for (std::uint32_t a = 2; a < p; ++a)
    if (square_class_fp(Fp(a, p)) == FpSquareClass::nonsquare) return a;
  throw std::logic_error("no quadratic non-residue found");
}

FpSquareClass square_class_fp(const Fp& x) {
  if (x.is_zero()) return FpSquareClass::zero;
  return x.pow((x.prime() - 1) / 2).value() == 1 ? FpSquareClass::square : FpSquareClass::nonsquare;
}

std::string SquareClassQp::to_string() const {
  switch (tag) {
    case Tag::one: return "1";
    case Tag::u: return "u";
    case Tag::p: return "p";
    case Tag::up: return "up";
  }
  return "?";
}

Rational SquareClassQp::representative(Prime p) const {
  Rational u(smallest_nonresidue(p));
  switch (tag) {
    case Tag::one: return Rational(1);
    case Tag::u: return u;
    case Tag::p: return Rational(p);
    case Tag::up: return Rational(u * p);
  }
  return Rational(1);
}

SquareClassQp square_class_qp(const Rational& x, Prime p) {
  require_odd_prime(p);
  PadicScalar s(x, p);
  if (s.is_zero()) throw std::domain_error("square class of zero");
  bool odd = (s.valuation().value() % 2) != 0;
  bool square_unit = square_class_fp(Fp::from_rational(s.unit_part(), p)) == FpSquareClass::square;
  using T = SquareClassQp::Tag;
  if (!odd) return {square_unit ? T::one : T::u};
  return {square_unit ? T::p : T::up};
}

static Integer reduce_mod_ppow(const Rational& unit, Prime p, const Integer& modulus) {
  Integer den_inv;
  Integer den(unit.get_den());
  if (mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t()) == 0)
    throw std::domain_error("denominator not invertible modulo p^k for p = " + std::to_string(p));
  Integer r = Integer(unit.get_num()) * den_inv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

Integer inverse_mod_ppow(const Rational& unit, Prime p, unsigned long k) {
  Integer modulus = pow_p(p, k);
  Integer a = reduce_mod_ppow(unit, p, modulus);
  Integer inv;
  if (mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0)
    throw std::domain_error("not a p-adic unit");
  return inv;
}

std::optional<Integer> padic_sqrt(const PadicScalar& x, unsigned digits) {
  Prime p = x.prime();
  require_odd_prime(p);
  if (digits == 0) throw std::invalid_argument("padic_sqrt needs at least one digit");
  if (x.is_zero()) return Integer(0);
  if (x.valuation().value() % 2 != 0) return std::nullopt;
  Rational unit = x.unit_part();
  Fp residue = Fp::from_rational(unit, p);
  if (square_class_fp(residue) != FpSquareClass::square) return std::nullopt;

  std::uint32_t root = 0;
  for (std::uint32_t a = 1; a <= p / 2; ++a) {
    if ((Fp(a, p) * Fp(a, p)) == residue) {
      root = a;
      break;
    }
  }
  Integer modulus = pow_p(p, digits);
  Integer target = reduce_mod_ppow(unit, p, modulus);
  Integer a(root);
  // Newton iteration doubles the number of correct digits.
  for (unsigned correct = 1; correct < digits; correct *= 2) {
    Integer two_a = 2 * a;
    Integer inv;
    mpz_invert(inv.get_mpz_t(), two_a.get_mpz_t(), modulus.get_mpz_t());
    a = a - (a * a - target) * inv;
    mpz_mod(a.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t());
  }
  return a;
}

Rational truncate_padic(const Rational& q, Prime p, long precision) {
  if (q == 0) return Rational(0);
  long v = val_p(q, p).value();
  if (v >= precision) return Rational(0);
  unsigned long k = v < 0 ? static_cast<unsigned long>(-v) : 0;
  Rational shifted = q * Rational(pow_p(p, k));
  Integer modulus = pow_p(p, static_cast<unsigned long>(precision + static_cast<long>(k)));
  Integer a = reduce_mod_ppow(shifted, p, modulus);
  Rational out(a, pow_p(p, k));
  out.canonicalize();
  return out;
}

}  // namespace mporbits::arith
