#pragma once

// Dense Gaussian elimination over an exact field (Rational or Fp).

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mporbits/arith.hpp"

namespace mporbits::linalg {

template <class T>
using Vec = std::vector<T>;
template <class T>
using Mat = std::vector<std::vector<T>>;

inline bool is_zero(const arith::Rational& x) { return x == 0; }
inline bool is_zero(const arith::Fp& x) { return x.is_zero(); }

inline arith::Rational zero_like(const arith::Rational&) { return arith::Rational(0); }
inline arith::Fp zero_like(const arith::Fp& x) { return arith::Fp(0, x.prime()); }
inline arith::Rational one_like(const arith::Rational&) { return arith::Rational(1); }
inline arith::Fp one_like(const arith::Fp& x) { return arith::Fp(1, x.prime()); }

// Reduced row echelon form in place; returns pivot columns.
template <class T>
std::vector<std::size_t> rref(Mat<T>& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
    std::size_t sel = row;
    while (sel < a.size() && is_zero(a[sel][c])) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[sel], a[row]);
    T inv = one_like(a[row][c]) / a[row][c];
    for (std::size_t k = c; k < a[row].size(); ++k) a[row][k] = a[row][k] * inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || is_zero(a[r][c])) continue;
      T factor = a[r][c];
      for (std::size_t k = c; k < a[r].size(); ++k) a[r][k] = a[r][k] - factor * a[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

template <class T>
std::size_t rank(Mat<T> a, std::size_t cols) {
  return rref(a, cols).size();
}

// Basis of {v : a v = 0} with free variables set to unit vectors.
template <class T>
Mat<T> kernel_basis(Mat<T> a, std::size_t cols, const T& zero) {
  auto pivots = rref(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  Mat<T> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec<T> v(cols, zero);
    v[f] = one_like(zero);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = zero - a[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Some solution of a x = b (free variables zero), or nullopt if inconsistent.
template <class T>
std::optional<Vec<T>> solve(const Mat<T>& a, const Vec<T>& b, std::size_t cols, const T& zero) {
  if (a.size() != b.size()) throw std::invalid_argument("solve: row count mismatch");
  Mat<T> aug = a;
  for (std::size_t r = 0; r < aug.size(); ++r) aug[r].push_back(b[r]);
  auto pivots = rref(aug, cols);
  for (std::size_t r = pivots.size(); r < aug.size(); ++r)
    if (!is_zero(aug[r][cols])) return std::nullopt;
  Vec<T> x(cols, zero);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
  return x;
}

template <class T>
std::optional<Mat<T>> inverse(const Mat<T>& a, const T& zero) {
  std::size_t n = a.size();
  Mat<T> aug = a;
  for (std::size_t r = 0; r < n; ++r) {
    aug[r].resize(2 * n, zero);
    aug[r][n + r] = one_like(zero);
  }
  auto pivots = rref(aug, n);
  if (pivots.size() != n) return std::nullopt;
  Mat<T> inv(n, Vec<T>(n, zero));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv[r][c] = aug[r][n + c];
  return inv;
}

// Rows of the reduced echelon form of the span of the given vectors.
template <class T>
Mat<T> row_space_basis(Mat<T> vectors, std::size_t cols) {
  auto pivots = rref(vectors, cols);
  vectors.resize(pivots.size());
  return vectors;
}

// Lexicographically least solution over F_p of a x = b.
std::optional<Vec<arith::Fp>> solve_lex_least(const Mat<arith::Fp>& a, const Vec<arith::Fp>& b,
                                              std::size_t cols, arith::Prime p);

}  // namespace mporbits::linalg
