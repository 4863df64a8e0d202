#include <doctest.h>

#include "support.hpp"

using namespace mporbits::linalg;
using mporbits::arith::Fp;
using mporbits::arith::Prime;
using mporbits::arith::Rational;
using testsupport::Gen;
using testsupport::Q;

namespace {

template <class T>
Vec<T> apply(const Mat<T>& a, const Vec<T>& x, const T& zero) {
  Vec<T> y(a.size(), zero);
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t c = 0; c < x.size(); ++c) y[r] = y[r] + a[r][c] * x[c];
  return y;
}

Mat<Rational> random_rational(Gen& g, std::size_t rows, std::size_t cols, int rank_cap) {
  // product of rows x k and k x cols factors, so rank <= k
  std::size_t k = static_cast<std::size_t>(g.integer(1, rank_cap));
  Mat<Rational> a(rows, Vec<Rational>(k)), b(k, Vec<Rational>(cols));
  for (auto& row : a)
    for (auto& x : row) x = Q(g.integer(-4, 4), g.integer(1, 3));
  for (auto& row : b)
    for (auto& x : row) x = Q(g.integer(-4, 4));
  Mat<Rational> m(rows, Vec<Rational>(cols, Rational(0)));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t l = 0; l < k; ++l) m[i][j] += a[i][l] * b[l][j];
  return m;
}

}  // namespace

TEST_CASE("kernel of a rank-one rational matrix") {
  Mat<Rational> a{{Q(1), Q(2), Q(3)}, {Q(2), Q(4), Q(6)}};
  CHECK(rank(a, 3) == 1);
  auto k = kernel_basis(a, 3, Rational(0));
  REQUIRE(k.size() == 2);
  for (const auto& v : k) CHECK(apply(a, v, Rational(0)) == Vec<Rational>{Q(0), Q(0)});
}

TEST_CASE("solve and inverse over Q") {
  Mat<Rational> a{{Q(2), Q(1)}, {Q(1), Q(3)}};
  auto x = solve(a, {Q(3), Q(5)}, 2, Rational(0));
  REQUIRE(x);
  CHECK(*x == Vec<Rational>{Q(4, 5), Q(7, 5)});
  auto inv = inverse(a, Rational(0));
  REQUIRE(inv);
  CHECK((*inv)[0][0] == Q(3, 5));
  CHECK_FALSE(inverse(Mat<Rational>{{Q(1), Q(2)}, {Q(2), Q(4)}}, Rational(0)));
  CHECK_FALSE(solve(Mat<Rational>{{Q(1), Q(1)}, {Q(1), Q(1)}}, {Q(0), Q(1)}, 2, Rational(0)));
}

TEST_CASE("rank-nullity and kernel correctness on random rational matrices") {
  Gen g(2024);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t rows = static_cast<std::size_t>(g.integer(1, 6)), cols = static_cast<std::size_t>(g.integer(1, 6));
    auto a = random_rational(g, rows, cols, 5);
    auto k = kernel_basis(a, cols, Rational(0));
    CHECK(rank(a, cols) + k.size() == cols);
    for (const auto& v : k) CHECK(apply(a, v, Rational(0)) == Vec<Rational>(rows, Rational(0)));
    Vec<Rational> x0(cols);
    for (auto& v : x0) v = Q(g.integer(-5, 5));
    auto b = apply(a, x0, Rational(0));
    auto x = solve(a, b, cols, Rational(0));
    REQUIRE(x);
    CHECK(apply(a, *x, Rational(0)) == b);
  }
}

TEST_CASE("inverse over F_p") {
  Gen g(9);
  const Prime p = 7;
  const Fp zero(0, p);
  for (int trial = 0; trial < 100; ++trial) {
    Mat<Fp> a(3, Vec<Fp>(3, zero));
    for (auto& row : a)
      for (auto& x : row) x = Fp(g.integer(0, 6), p);
    auto inv = inverse(a, zero);
    if (rank(a, 3) < 3) {
      CHECK_FALSE(inv);
      continue;
    }
    REQUIRE(inv);
    for (std::size_t c = 0; c < 3; ++c) {
      Vec<Fp> e(3, zero);
      e[c] = Fp(1, p);
      CHECK(apply(a, apply(*inv, e, zero), zero) == e);
    }
  }
}

TEST_CASE("lexicographically least solution matches exhaustive search") {
  Gen g(31);
  const Prime p = 5;
  const Fp zero(0, p);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t rows = static_cast<std::size_t>(g.integer(1, 3)), cols = static_cast<std::size_t>(g.integer(1, 4));
    Mat<Fp> a(rows, Vec<Fp>(cols, zero));
    for (auto& row : a)
      for (auto& x : row) x = Fp(g.integer(0, 4), p);
    Vec<Fp> b(rows, zero);
    for (auto& x : b) x = Fp(g.integer(0, 4), p);

    std::optional<Vec<Fp>> best;
    std::size_t total = 1;
    for (std::size_t c = 0; c < cols; ++c) total *= p;
    for (std::size_t idx = 0; idx < total && !best; ++idx) {
      // idx enumerates vectors in lexicographic order, first coordinate most significant
      Vec<Fp> x(cols, zero);
      std::size_t t = idx;
      for (std::size_t c = cols; c-- > 0;) {
        x[c] = Fp(static_cast<long>(t % p), p);
        t /= p;
      }
      if (apply(a, x, zero) == b) best = x;
    }
    auto got = solve_lex_least(a, b, cols, p);
    CHECK(got.has_value() == best.has_value());
    if (got && best) CHECK(*got == *best);
  }
}
