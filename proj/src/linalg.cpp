#include "mporbits/linalg.hpp"

namespace mporbits::linalg {

using arith::Fp;

std::optional<Vec<Fp>> solve_lex_least(const Mat<Fp>& a, const Vec<Fp>& b, std::size_t cols, arith::Prime p) {
  Fp zero(0, p);
  Mat<Fp> rows = a;
  Vec<Fp> rhs = b;
  if (!solve(rows, rhs, cols, zero)) return std::nullopt;
  Vec<Fp> x(cols, zero);
  for (std::size_t i = 0; i < cols; ++i) {
    Vec<Fp> pin(cols, zero);
    pin[i] = Fp(1, p);
    rows.push_back(pin);
    rhs.push_back(zero);
    bool fixed = false;
    for (std::uint32_t v = 0; v < p; ++v) {
      rhs.back() = Fp(v, p);
      if (solve(rows, rhs, cols, zero)) {
        x[i] = rhs.back();
        fixed = true;
        break;
      }
    }
    if (!fixed) throw std::logic_error("solve_lex_least: lost consistency");
  }
  return x;
}

}  // namespace mporbits::linalg
