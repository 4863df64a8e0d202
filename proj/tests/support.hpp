#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mporbits/classify.hpp"

namespace testsupport {

using mporbits::arith::Fp;
using mporbits::arith::Integer;
using mporbits::arith::Prime;
using mporbits::arith::Rational;
using mporbits::liealg::LieMatrix;
using mporbits::liealg::Matrix;

inline Rational Q(long a, long b = 1) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

// 1-based elementary matrix.
inline LieMatrix<Rational> E(std::size_t n, std::size_t i, std::size_t j, const Rational& c = 1) {
  return mporbits::liealg::elementary(n, i - 1, j - 1, c);
}

inline LieMatrix<Rational> D(std::vector<Rational> d) { return mporbits::liealg::diagonal(d); }

inline LieMatrix<Fp> Ef(std::size_t n, std::size_t i, std::size_t j, Prime p, long c = 1) {
  return mporbits::liealg::elementary(n, i - 1, j - 1, Fp(c, p));
}

inline LieMatrix<Fp> Df(std::vector<long> d, Prime p) {
  std::vector<Fp> v;
  for (long x : d) v.emplace_back(x, p);
  return mporbits::liealg::diagonal(v);
}

inline LieMatrix<Rational> zero3() { return LieMatrix<Rational>::zero(3, Rational(0)); }

// Deterministic generator shared by property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  std::uint64_t raw() { return rng_(); }

  Rational rational(long span = 50) {
    long den = integer(1, span);
    return Q(integer(-span * 3, span * 3), den);
  }
  Rational nonzero_rational(long span = 50) {
    for (;;) {
      Rational q = rational(span);
      if (q != 0) return q;
    }
  }
  // p^k times a unit with small numerator and denominator.
  Rational with_valuation(Prime p, long k, long span = 40) {
    for (;;) {
      long a = integer(1, span), b = integer(1, span);
      if (a % p == 0 || b % p == 0) continue;
      Rational q = Q(integer(0, 1) ? a : -a, b);
      if (k >= 0) return q * mporbits::arith::pow_p(p, static_cast<unsigned long>(k));
      return q / mporbits::arith::pow_p(p, static_cast<unsigned long>(-k));
    }
  }
  LieMatrix<Rational> sl(std::size_t n, long span = 6) {
    Matrix<Rational> m(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = Q(integer(-span, span), integer(1, 3));
    Rational tr = m.trace();
    m(n - 1, n - 1) -= tr;
    return LieMatrix<Rational>(m);
  }

 private:
  std::mt19937_64 rng_;
};

struct GroupPair {
  Matrix<Rational> g, g_inv;
};

inline GroupPair multiply(const GroupPair& a, const GroupPair& b) { return {a.g * b.g, b.g_inv * a.g_inv}; }

inline GroupPair unipotent(const LieMatrix<Rational>& n) {
  return {mporbits::liealg::exp_nilpotent(n), mporbits::liealg::exp_nilpotent(-n)};
}

// Random element of H(Q) for sl3: torus times the two root unipotents.
inline GroupPair random_h_sl3(Gen& g) {
  auto pair = mporbits::liealg::SymmetricPair::sl3();
  Rational a = g.nonzero_rational(6);
  GroupPair out{pair.cocharacter(a), pair.cocharacter(1 / a)};
  out = multiply(out, unipotent((E(3, 1, 2) - E(3, 2, 3)).scaled(g.rational(6))));
  return multiply(out, unipotent((E(3, 2, 1) - E(3, 3, 2)).scaled(g.rational(6))));
}

// Random element of H_{x,0+} for x on the sl3 fixed line.
inline GroupPair random_h_plus_sl3(Gen& g, const mporbits::apartment::ApartmentPoint& x, Prime p) {
  auto pair = mporbits::liealg::SymmetricPair::sl3();
  mporbits::apartment::LatticeBounds plus(x, 0, true);
  Rational a = 1 + g.with_valuation(p, g.integer(1, 3));
  GroupPair out{pair.cocharacter(a), pair.cocharacter(1 / a)};
  out = multiply(out, unipotent((E(3, 1, 2) - E(3, 2, 3)).scaled(g.with_valuation(p, plus.at(0, 1) + g.integer(0, 1)))));
  return multiply(out,
                  unipotent((E(3, 2, 1) - E(3, 3, 2)).scaled(g.with_valuation(p, plus.at(1, 0) + g.integer(0, 1)))));
}

// Entrywise: a - b lies in the lattice (diagonal included, no trace condition).
inline bool congruent(const Matrix<Rational>& a, const Matrix<Rational>& b, const mporbits::apartment::LatticeBounds& lat,
                      Prime p) {
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) {
      auto v = mporbits::arith::val_p(Rational(a(i, j) - b(i, j)), p);
      if (!v.is_infinite() && v.value() < lat.at(i, j)) return false;
    }
  return true;
}

// Random matrix in the lattice of trace zero matrices cut out by the given bounds.
inline LieMatrix<Rational> random_in_lattice(Gen& g, const mporbits::apartment::LatticeBounds& lat, Prime p,
                                             long span = 9) {
  std::size_t n = lat.n();
  Matrix<Rational> m(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long b = lat.at(i, j);
      Rational c(g.integer(-span, span));
      m(i, j) = b >= 0 ? Rational(c * mporbits::arith::pow_p(p, static_cast<unsigned long>(b)))
                       : Rational(c / mporbits::arith::pow_p(p, static_cast<unsigned long>(-b)));
    }
  Rational tr = m.trace();
  m(n - 1, n - 1) -= tr;
  return LieMatrix<Rational>(m);
}

}  // namespace testsupport
