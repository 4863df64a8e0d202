#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mporbits/arith.hpp"
#include "mporbits/errors.hpp"
#include "mporbits/linalg.hpp"

namespace mporbits::liealg {

using arith::Fp;
using arith::Rational;

template <class T>
class Matrix {
 public:
  Matrix(std::size_t n, const T& zero) : n_(n), zero_(zero), a_(n * n, zero) {}

  static Matrix identity(std::size_t n, const T& zero) {
    Matrix m(n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = linalg::one_like(zero);
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty() || rows[0].empty()) throw std::invalid_argument("empty matrix");
    Matrix m(rows.size(), linalg::zero_like(rows[0][0]));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix rows must be square");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t n() const { return n_; }
  const T& zero() const { return zero_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Matrix operator+(const Matrix& o) const {
    check(o);
    Matrix r(*this);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
  }
  Matrix operator-(const Matrix& o) const {
    check(o);
    Matrix r(*this);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
  }
  Matrix operator*(const Matrix& o) const {
    check(o);
    Matrix r(n_, zero_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        if (linalg::is_zero((*this)(i, k))) continue;
        for (std::size_t j = 0; j < n_; ++j) r(i, j) = r(i, j) + (*this)(i, k) * o(k, j);
      }
    return r;
  }
  Matrix scaled(const T& c) const {
    Matrix r(*this);
    for (auto& x : r.a_) x = x * c;
    return r;
  }
  Matrix transpose() const {
    Matrix r(n_, zero_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }
  T trace() const {
    T t = zero_;
    for (std::size_t i = 0; i < n_; ++i) t = t + (*this)(i, i);
    return t;
  }
  bool is_zero() const {
    for (const auto& x : a_)
      if (!linalg::is_zero(x)) return false;
    return true;
  }
  bool is_diagonal() const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (i != j && !linalg::is_zero((*this)(i, j))) return false;
    return true;
  }
  const std::vector<T>& entries() const { return a_; }
  linalg::Mat<T> rows() const {
    linalg::Mat<T> r(n_, linalg::Vec<T>(n_, zero_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) r[i][j] = (*this)(i, j);
    return r;
  }

  bool operator==(const Matrix& o) const { return n_ == o.n_ && a_ == o.a_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

 private:
  void check(const Matrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("matrix size mismatch");
  }
  std::size_t n_;
  T zero_;
  std::vector<T> a_;
};

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& g) {
  auto inv = linalg::inverse(g.rows(), g.zero());
  if (!inv) return std::nullopt;
  return Matrix<T>::from_rows(*inv);
}

// Trace-zero n x n matrix.
template <class T>
class LieMatrix {
 public:
  explicit LieMatrix(Matrix<T> m) : m_(std::move(m)) {
    if (!linalg::is_zero(m_.trace())) throw std::invalid_argument("LieMatrix must have trace zero");
  }
  static LieMatrix zero(std::size_t n, const T& zero) { return LieMatrix(Matrix<T>(n, zero)); }

  std::size_t n() const { return m_.n(); }
  const Matrix<T>& matrix() const { return m_; }
  const T& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  bool is_zero() const { return m_.is_zero(); }

  LieMatrix operator+(const LieMatrix& o) const { return LieMatrix(m_ + o.m_, true); }
  LieMatrix operator-(const LieMatrix& o) const { return LieMatrix(m_ - o.m_, true); }
  LieMatrix operator-() const { return LieMatrix(m_.scaled(linalg::zero_like(m_.zero()) - linalg::one_like(m_.zero())), true); }
  LieMatrix scaled(const T& c) const { return LieMatrix(m_.scaled(c), true); }
  bool operator==(const LieMatrix& o) const { return m_ == o.m_; }
  bool operator!=(const LieMatrix& o) const { return m_ != o.m_; }

  // Row-major entries, used as coordinates in linear algebra.
  std::vector<T> flatten() const { return m_.entries(); }
  static LieMatrix unflatten(std::size_t n, const std::vector<T>& v) {
    Matrix<T> m(n, linalg::zero_like(v.at(0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i * n + j];
    return LieMatrix(std::move(m));
  }

 private:
  LieMatrix(Matrix<T> m, bool) : m_(std::move(m)) {}
  Matrix<T> m_;
};

template <class T>
LieMatrix<T> elementary(std::size_t n, std::size_t i, std::size_t j, const T& coeff) {
  if (i == j) throw std::invalid_argument("diagonal elementary matrix is not trace zero");
  Matrix<T> m(n, linalg::zero_like(coeff));
  m(i, j) = coeff;
  return LieMatrix<T>(std::move(m));
}

template <class T>
LieMatrix<T> diagonal(const std::vector<T>& d) {
  Matrix<T> m(d.size(), linalg::zero_like(d.at(0)));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return LieMatrix<T>(std::move(m));
}

template <class T>
LieMatrix<T> bracket(const LieMatrix<T>& a, const LieMatrix<T>& b) {
  return LieMatrix<T>(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

// d(theta)(X) = -J X^t J with J the antidiagonal matrix of ones.
template <class T>
LieMatrix<T> dtheta(const LieMatrix<T>& x) {
  std::size_t n = x.n();
  Matrix<T> m(n, x.matrix().zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = m.zero() - x(n - 1 - j, n - 1 - i);
  return LieMatrix<T>(std::move(m));
}

template <class T>
struct EigenSplit {
  LieMatrix<T> fixed;  // in h
  LieMatrix<T> anti;   // in p
};

template <class T>
EigenSplit<T> eigen_split(const LieMatrix<T>& x) {
  T half = linalg::one_like(x.matrix().zero()) / (linalg::one_like(x.matrix().zero()) + linalg::one_like(x.matrix().zero()));
  LieMatrix<T> t = dtheta(x);
  return {(x + t).scaled(half), (x - t).scaled(half)};
}

template <class T>
bool in_h(const LieMatrix<T>& x) {
  return dtheta(x) == x;
}
template <class T>
bool in_p(const LieMatrix<T>& x) {
  return dtheta(x) == -x;
}

template <class T>
Matrix<T> power(const Matrix<T>& m, unsigned k) {
  Matrix<T> r = Matrix<T>::identity(m.n(), m.zero());
  for (unsigned i = 0; i < k; ++i) r = r * m;
  return r;
}

template <class T>
bool is_nilpotent(const LieMatrix<T>& x) {
  return power(x.matrix(), static_cast<unsigned>(x.n())).is_zero();
}

// Group involution g -> J (g^t)^-1 J.
template <class T>
Matrix<T> theta_group(const Matrix<T>& g) {
  auto inv = inverse(g.transpose());
  if (!inv) throw std::invalid_argument("theta_group: singular matrix");
  std::size_t n = g.n();
  Matrix<T> r(n, g.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) = (*inv)(n - 1 - i, n - 1 - j);
  return r;
}

template <class T>
LieMatrix<T> adjoint(const Matrix<T>& g, const Matrix<T>& g_inv, const LieMatrix<T>& x) {
  return LieMatrix<T>(g * x.matrix() * g_inv);
}

// exp(N) for nilpotent N as a finite sum.
template <class T>
Matrix<T> exp_nilpotent(const LieMatrix<T>& nil) {
  if (!is_nilpotent(nil)) throw MathError("NotNilpotent", "exp_nilpotent needs a nilpotent argument");
  const Matrix<T>& m = nil.matrix();
  Matrix<T> result = Matrix<T>::identity(m.n(), m.zero());
  Matrix<T> term = result;
  T k = linalg::zero_like(m.zero());
  for (std::size_t i = 1; i < m.n(); ++i) {
    k = k + linalg::one_like(k);
    term = (term * m).scaled(linalg::one_like(k) / k);
    result = result + term;
  }
  return result;
}

// Ad(exp W) Z = sum ad(W)^k Z / k! for nilpotent W.
template <class T>
LieMatrix<T> ad_exp(const LieMatrix<T>& w, const LieMatrix<T>& z) {
  LieMatrix<T> result = z;
  LieMatrix<T> term = z;
  T k = linalg::zero_like(z.matrix().zero());
  for (int i = 1; i < 64; ++i) {
    k = k + linalg::one_like(k);
    term = bracket(w, term).scaled(linalg::one_like(k) / k);
    if (term.is_zero()) return result;
    result = result + term;
  }
  throw MathError("NotNilpotent", "ad_exp did not terminate");
}

template <class T>
struct Sl2Triple {
  LieMatrix<T> Y;
  LieMatrix<T> H;
  LieMatrix<T> X;
  bool normal = false;
};

template <class T>
bool relations_hold(const Sl2Triple<T>& t) {
  T two = linalg::one_like(t.X.matrix().zero()) + linalg::one_like(t.X.matrix().zero());
  return bracket(t.H, t.X) == t.X.scaled(two) && bracket(t.H, t.Y) == t.Y.scaled(linalg::zero_like(two) - two) &&
         bracket(t.X, t.Y) == t.H;
}

template <class T>
bool is_normal(const Sl2Triple<T>& t) {
  return in_p(t.X) && in_p(t.Y) && in_h(t.H);
}

// Coordinates of x in the span of basis, if it lies there.
template <class T>
std::optional<std::vector<T>> coordinates(const LieMatrix<T>& x, const std::vector<LieMatrix<T>>& basis) {
  const T zero = x.matrix().zero();
  std::size_t n2 = x.n() * x.n();
  linalg::Mat<T> a(n2, linalg::Vec<T>(basis.size(), zero));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    auto v = basis[k].flatten();
    for (std::size_t r = 0; r < n2; ++r) a[r][k] = v[r];
  }
  return linalg::solve(a, x.flatten(), basis.size(), zero);
}

template <class T>
LieMatrix<T> combination(const std::vector<T>& coeffs, const std::vector<LieMatrix<T>>& basis, std::size_t n,
                         const T& zero) {
  LieMatrix<T> r = LieMatrix<T>::zero(n, zero);
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (!linalg::is_zero(coeffs[k])) r = r + basis[k].scaled(coeffs[k]);
  return r;
}

// Linearly independent basis of the span.
template <class T>
std::vector<LieMatrix<T>> span_basis(const std::vector<LieMatrix<T>>& vectors, std::size_t n, const T& zero) {
  if (vectors.empty()) return {};
  linalg::Mat<T> rows;
  for (const auto& v : vectors) rows.push_back(v.flatten());
  auto reduced = linalg::row_space_basis(rows, n * n);
  std::vector<LieMatrix<T>> out;
  for (const auto& r : reduced) out.push_back(LieMatrix<T>::unflatten(n, r));
  (void)zero;
  return out;
}

template <class T>
std::vector<LieMatrix<T>> intersect(const std::vector<LieMatrix<T>>& u, const std::vector<LieMatrix<T>>& w,
                                    std::size_t n, const T& zero) {
  if (u.empty() || w.empty()) return {};
  std::size_t n2 = n * n, cols = u.size() + w.size();
  linalg::Mat<T> a(n2, linalg::Vec<T>(cols, zero));
  for (std::size_t k = 0; k < u.size(); ++k) {
    auto v = u[k].flatten();
    for (std::size_t r = 0; r < n2; ++r) a[r][k] = v[r];
  }
  for (std::size_t k = 0; k < w.size(); ++k) {
    auto v = w[k].flatten();
    for (std::size_t r = 0; r < n2; ++r) a[r][u.size() + k] = zero - v[r];
  }
  std::vector<LieMatrix<T>> out;
  for (const auto& kv : linalg::kernel_basis(a, cols, zero)) {
    std::vector<T> c(kv.begin(), kv.begin() + static_cast<long>(u.size()));
    out.push_back(combination(c, u, n, zero));
  }
  return span_basis(out, n, zero);
}

// Elements of span(ambient) commuting with every element of s.
template <class T>
std::vector<LieMatrix<T>> centralizer_basis(const std::vector<LieMatrix<T>>& s,
                                            const std::vector<LieMatrix<T>>& ambient, std::size_t n,
                                            const T& zero) {
  if (ambient.empty()) return {};
  std::size_t n2 = n * n;
  linalg::Mat<T> a;
  for (const auto& x : s) {
    std::vector<std::vector<T>> cols;
    for (const auto& b : ambient) cols.push_back(bracket(b, x).flatten());
    for (std::size_t r = 0; r < n2; ++r) {
      linalg::Vec<T> row;
      for (const auto& c : cols) row.push_back(c[r]);
      a.push_back(row);
    }
  }
  std::vector<LieMatrix<T>> out;
  for (const auto& kv : linalg::kernel_basis(a, ambient.size(), zero)) out.push_back(combination(kv, ambient, n, zero));
  return out;
}

// Completes e to an sl2-triple with h = [e, z] and f taken from span(ambient_f).
// Over F_p the lexicographically least coordinates are chosen at each step.
Sl2Triple<Fp> complete_sl2(const LieMatrix<Fp>& e, const std::vector<LieMatrix<Fp>>& ambient_f);
Sl2Triple<Rational> complete_sl2(const LieMatrix<Rational>& e, const std::vector<LieMatrix<Rational>>& ambient_f);

// Same as the F_p version but with free coordinates drawn from a seeded generator.
Sl2Triple<Fp> complete_sl2_random(const LieMatrix<Fp>& e, const std::vector<LieMatrix<Fp>>& ambient_f,
                                  std::uint64_t seed);

LieMatrix<Fp> reduce_matrix(const LieMatrix<Rational>& x, arith::Prime p);

// A matrix basis element of h or p together with the positions it occupies.
struct BasisElement {
  LieMatrix<Rational> matrix;
  std::vector<std::pair<std::size_t, std::size_t>> support;
  bool diagonal;
  std::string name;
};

enum class PairKind { sl3, sl2 };

// (SL_n, H) with H the fixed points of g -> J (g^t)^-1 J, n = 3 or 2.
class SymmetricPair {
 public:
  static SymmetricPair sl3() { return SymmetricPair(PairKind::sl3); }
  static SymmetricPair sl2() { return SymmetricPair(PairKind::sl2); }
  static SymmetricPair from_name(const std::string& name);

  PairKind kind() const { return kind_; }
  std::size_t n() const { return kind_ == PairKind::sl3 ? 3 : 2; }
  std::string name() const { return kind_ == PairKind::sl3 ? "sl3" : "sl2"; }

  std::pair<std::size_t, std::size_t> sigma(std::size_t i, std::size_t j) const {
    return {n() - 1 - j, n() - 1 - i};
  }

  // Weight-vector bases: diagonal elements first, then off-diagonal classes in
  // row-major order of their first position.
  const std::vector<BasisElement>& h_basis() const { return h_basis_; }
  const std::vector<BasisElement>& p_basis() const { return p_basis_; }

  // Direction v of the theta-fixed line t -> t v in the apartment.
  std::vector<int> fixed_direction() const;

  Matrix<Rational> J() const;
  // diag(a^v_1, ..., a^v_n).
  Matrix<Rational> cocharacter(const Rational& a) const;
  // +J or -J, whichever lies in SL_n and commutes with theta; none for n = 2.
  std::optional<Matrix<Rational>> weyl_element() const;

  bool operator==(const SymmetricPair& o) const { return kind_ == o.kind_; }

 private:
  explicit SymmetricPair(PairKind kind);
  PairKind kind_;
  std::vector<BasisElement> h_basis_, p_basis_;
};

std::vector<LieMatrix<Rational>> matrices_of(const std::vector<BasisElement>& basis);

bool in_group_h(const SymmetricPair& pair, const Matrix<Rational>& g);

std::string format_matrix(const LieMatrix<Rational>& x);
std::string format_matrix(const LieMatrix<Fp>& x);

}  // namespace mporbits::liealg
