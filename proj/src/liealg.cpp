#include "mporbits/liealg.hpp"

#include <random>
#include <sstream>

namespace mporbits::liealg {

namespace {

template <class T>
linalg::Mat<T> columns_to_matrix(const std::vector<std::vector<T>>& cols, std::size_t rows, const T& zero) {
  linalg::Mat<T> a(rows, linalg::Vec<T>(cols.size(), zero));
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (std::size_t r = 0; r < rows; ++r) a[r][k] = cols[k][r];
  return a;
}

template <class T>
void append(std::vector<T>& a, const std::vector<T>& b) {
  a.insert(a.end(), b.begin(), b.end());
}

// Linear systems for the two completion steps; Solver picks one solution.
template <class T, class Solver>
Sl2Triple<T> complete_with(const LieMatrix<T>& e, const std::vector<LieMatrix<T>>& ambient, Solver&& pick) {
  std::size_t n = e.n(), n2 = n * n;
  T zero = e.matrix().zero();
  T two = linalg::one_like(zero) + linalg::one_like(zero);
  if (e.is_zero()) {
    auto z = LieMatrix<T>::zero(n, zero);
    return {z, z, z, true};
  }
  if (ambient.empty()) throw MathError("NoTriple", "empty ambient space for completion");

  std::vector<std::vector<T>> cols;
  for (const auto& a : ambient) cols.push_back(bracket(bracket(e, a), e).flatten());
  auto coeff = pick(columns_to_matrix(cols, n2, zero), e.scaled(two).flatten(), ambient.size());
  if (!coeff) throw MathError("NoTriple", "no h = [e, z] with [h, e] = 2e");
  LieMatrix<T> h = bracket(e, combination(*coeff, ambient, n, zero));

  cols.clear();
  for (const auto& a : ambient) {
    auto c = bracket(e, a).flatten();
    append(c, (bracket(h, a) + a.scaled(two)).flatten());
    cols.push_back(c);
  }
  auto rhs = h.flatten();
  append(rhs, std::vector<T>(n2, zero));
  auto fc = pick(columns_to_matrix(cols, 2 * n2, zero), rhs, ambient.size());
  if (!fc) throw MathError("NoTriple", "no f with [e, f] = h and [h, f] = -2f");
  Sl2Triple<T> t{combination(*fc, ambient, n, zero), h, e, false};
  if (!relations_hold(t)) throw MathError("NoTriple", "completion failed the bracket relations");
  t.normal = is_normal(t);
  return t;
}

}  // namespace

Sl2Triple<Fp> complete_sl2(const LieMatrix<Fp>& e, const std::vector<LieMatrix<Fp>>& ambient_f) {
  arith::Prime p = e.matrix().zero().prime();
  return complete_with(e, ambient_f, [p](const linalg::Mat<Fp>& a, const linalg::Vec<Fp>& b, std::size_t cols) {
    return linalg::solve_lex_least(a, b, cols, p);
  });
}

Sl2Triple<Rational> complete_sl2(const LieMatrix<Rational>& e, const std::vector<LieMatrix<Rational>>& ambient_f) {
  return complete_with(e, ambient_f,
                       [](const linalg::Mat<Rational>& a, const linalg::Vec<Rational>& b, std::size_t cols) {
                         return linalg::solve(a, b, cols, Rational(0));
                       });
}

Sl2Triple<Fp> complete_sl2_random(const LieMatrix<Fp>& e, const std::vector<LieMatrix<Fp>>& ambient_f,
                                  std::uint64_t seed) {
  arith::Prime p = e.matrix().zero().prime();
  std::mt19937_64 rng(seed);
  return complete_with(
      e, ambient_f,
      [p, &rng](const linalg::Mat<Fp>& a, const linalg::Vec<Fp>& b, std::size_t cols) -> std::optional<linalg::Vec<Fp>> {
        Fp zero(0, p);
        auto x = linalg::solve(a, b, cols, zero);
        if (!x) return std::nullopt;
        std::uniform_int_distribution<std::uint32_t> digit(0, p - 1);
        for (const auto& k : linalg::kernel_basis(a, cols, zero)) {
          Fp c(digit(rng), p);
          for (std::size_t i = 0; i < cols; ++i) (*x)[i] += c * k[i];
        }
        return x;
      });
}

LieMatrix<Fp> reduce_matrix(const LieMatrix<Rational>& x, arith::Prime p) {
  Matrix<Fp> m(x.n(), Fp(0, p));
  for (std::size_t i = 0; i < x.n(); ++i)
    for (std::size_t j = 0; j < x.n(); ++j) m(i, j) = Fp::from_rational(x(i, j), p);
  return LieMatrix<Fp>(std::move(m));
}

SymmetricPair SymmetricPair::from_name(const std::string& name) {
  if (name == "sl3") return sl3();
  if (name == "sl2") return sl2();
  throw std::invalid_argument("unknown pair '" + name + "' (expected sl3 or sl2)");
}

namespace {

std::string position_name(std::size_t i, std::size_t j) {
  return "E" + std::to_string(i + 1) + std::to_string(j + 1);
}

std::string diag_name(const std::vector<Rational>& d) {
  std::string s = "diag(";
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + d[i].get_str();
  return s + ")";
}

}  // namespace

SymmetricPair::SymmetricPair(PairKind kind) : kind_(kind) {
  std::size_t n = this->n();
  // Diagonal part: antisymmetric vectors lie in h, symmetric trace-zero ones in p.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s = n - 1 - i;
    if (i >= s) continue;
    std::vector<Rational> d(n, Rational(0));
    d[i] = 1;
    d[s] = -1;
    h_basis_.push_back({diagonal(d), {}, true, diag_name(d)});
  }
  std::vector<std::vector<Rational>> sym;
  std::optional<std::size_t> middle;
  if (n % 2 == 1) middle = n / 2;
  std::vector<std::size_t> pairs;
  for (std::size_t i = 0; i < n - 1 - i; ++i) pairs.push_back(i);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    std::size_t i = pairs[k];
    std::vector<Rational> d(n, Rational(0));
    d[i] = d[n - 1 - i] = 1;
    if (middle) {
      d[*middle] = -2;
    } else if (k + 1 < pairs.size()) {
      d[pairs.back()] = d[n - 1 - pairs.back()] = -1;
    } else {
      continue;
    }
    p_basis_.push_back({diagonal(d), {}, true, diag_name(d)});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      auto [si, sj] = sigma(i, j);
      if (std::make_pair(si, sj) < std::make_pair(i, j)) continue;
      if (si == i && sj == j) {
        p_basis_.push_back({elementary(n, i, j, Rational(1)), {{i, j}}, false, position_name(i, j)});
        continue;
      }
      Matrix<Rational> plus(n, Rational(0)), minus(n, Rational(0));
      plus(i, j) = 1;
      plus(si, sj) = -1;
      minus(i, j) = 1;
      minus(si, sj) = 1;
      h_basis_.push_back({LieMatrix<Rational>(plus), {{i, j}, {si, sj}}, false,
                          position_name(i, j) + "-" + position_name(si, sj)});
      p_basis_.push_back({LieMatrix<Rational>(minus), {{i, j}, {si, sj}}, false,
                          position_name(i, j) + "+" + position_name(si, sj)});
    }
}

std::vector<int> SymmetricPair::fixed_direction() const {
  if (kind_ == PairKind::sl3) return {1, 0, -1};
  return {1, -1};
}

Matrix<Rational> SymmetricPair::J() const {
  Matrix<Rational> j(n(), Rational(0));
  for (std::size_t i = 0; i < n(); ++i) j(i, n() - 1 - i) = 1;
  return j;
}

Matrix<Rational> SymmetricPair::cocharacter(const Rational& a) const {
  if (a == 0) throw std::invalid_argument("cocharacter at zero");
  Matrix<Rational> m(n(), Rational(0));
  auto v = fixed_direction();
  for (std::size_t i = 0; i < n(); ++i) {
    Rational x(1);
    for (int k = 0; k < std::abs(v[i]); ++k) x *= a;
    m(i, i) = v[i] >= 0 ? x : Rational(1 / x);
  }
  return m;
}

std::optional<Matrix<Rational>> SymmetricPair::weyl_element() const {
  if (kind_ == PairKind::sl3) return J().scaled(Rational(-1));
  return std::nullopt;
}

std::vector<LieMatrix<Rational>> matrices_of(const std::vector<BasisElement>& basis) {
  std::vector<LieMatrix<Rational>> out;
  for (const auto& b : basis) out.push_back(b.matrix);
  return out;
}

namespace {

Rational determinant(const Matrix<Rational>& g) {
  auto rows = g.rows();
  Rational det(1);
  std::size_t n = g.n();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t sel = c;
    while (sel < n && rows[sel][c] == 0) ++sel;
    if (sel == n) return Rational(0);
    if (sel != c) {
      std::swap(rows[sel], rows[c]);
      det = -det;
    }
    det *= rows[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = rows[r][c] / rows[c][c];
      for (std::size_t k = c; k < n; ++k) rows[r][k] -= f * rows[c][k];
    }
  }
  return det;
}

}  // namespace

bool in_group_h(const SymmetricPair& pair, const Matrix<Rational>& g) {
  if (g.n() != pair.n() || determinant(g) != 1) return false;
  return theta_group(g) == g;
}

std::string format_matrix(const LieMatrix<Rational>& x) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < x.n(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < x.n(); ++j) os << (j ? ", " : "") << x(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string format_matrix(const LieMatrix<Fp>& x) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < x.n(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < x.n(); ++j) os << (j ? ", " : "") << x(i, j).value();
    os << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace mporbits::liealg
