#include "mporbits/lifting.hpp"

#include <algorithm>
#include <stdexcept>

namespace mporbits::lifting {

using apartment::LatticeBounds;

namespace {

Rational p_power(Prime p, long k) {
  Rational base(arith::pow_p(p, static_cast<unsigned long>(k < 0 ? -k : k)));
  return k >= 0 ? base : Rational(1 / base);
}

long weight_of(const std::vector<long>& lambda, std::size_t i, std::size_t j) { return lambda[i] - lambda[j]; }

// Basis elements of p lying in the ad(H)-weight space w.
std::vector<liealg::BasisElement> p_weight_basis(const SymmetricPair& pair, const std::vector<long>& lambda, long w) {
  std::vector<liealg::BasisElement> out;
  for (const auto& b : pair.p_basis()) {
    long bw = b.diagonal ? 0 : weight_of(lambda, b.support[0].first, b.support[0].second);
    if (bw == w) out.push_back(b);
  }
  return out;
}

// p^level times b, with level the lattice bound of g_{x,depth} at b's position.
LieMatrix<Rational> lattice_generator(const liealg::BasisElement& b, const ApartmentPoint& x, const Rational& depth,
                                      Prime p) {
  LatticeBounds bounds(x, depth, false);
  long level = b.diagonal ? bounds.at(0, 0) : bounds.at(b.support[0].first, b.support[0].second);
  return b.matrix.scaled(p_power(p, level));
}

std::vector<long> diagonal_weights(const LieMatrix<Rational>& h) {
  if (!h.matrix().is_diagonal()) throw MathError("NonToral", "H is not diagonal");
  std::vector<long> lambda;
  for (std::size_t i = 0; i < h.n(); ++i) lambda.push_back(apartment::to_long(h(i, i)));
  return lambda;
}

Rational determinant(linalg::Mat<Rational> rows) {
  Rational det(1);
  std::size_t n = rows.size();
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

Matrix<Rational> truncate_group(const Matrix<Rational>& g, const ApartmentPoint& x, long digits, Prime p) {
  LatticeBounds b(x, Rational(0), false);
  Matrix<Rational> out = g;
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = 0; j < g.n(); ++j) out(i, j) = arith::truncate_padic(g(i, j), p, b.at(i, j) + digits);
  return out;
}

// Ad(g) with g_inv only an approximate inverse; the resulting small trace is dropped.
LieMatrix<Rational> adjoint_approx(const Matrix<Rational>& g, const Matrix<Rational>& g_inv, const LieMatrix<Rational>& m) {
  Matrix<Rational> out = g * m.matrix() * g_inv;
  Rational shift = out.trace() / static_cast<long>(out.n());
  for (std::size_t i = 0; i < out.n(); ++i) out(i, i) -= shift;
  return LieMatrix<Rational>(out);
}

}  // namespace

ToralRepresentative toral_representative(const ResidueSpace& space, const residue::ActionGroup& group,
                                         const ResidueCoset& e) {
  for (const auto& cand : residue::orbit(group, e)) {
    auto t = residue::complete_in_space(space, cand);
    if (t.H.matrix().is_diagonal()) return {cand, t};
  }
  throw MathError("NoToralTriple", "no orbit element of " + e.to_string() + " completes with diagonal h");
}

std::vector<long> integral_weights(const LieMatrix<Fp>& h) {
  if (!h.matrix().is_diagonal()) throw MathError("NonToral", "h is not diagonal");
  std::vector<long> lambda;
  long sum = 0;
  for (std::size_t i = 0; i < h.n(); ++i) {
    lambda.push_back(h(i, i).centered());
    sum += lambda.back();
  }
  if (sum != 0) throw MathError("NonToral", "integral weights of h do not sum to zero");
  return lambda;
}

Sl2Triple<Rational> lift_sl2(const ResidueSpace& space, const Sl2Triple<Fp>& triple) {
  const auto& pair = space.pair();
  std::size_t n = pair.n();
  Prime p = space.prime();
  if (triple.X.is_zero()) {
    auto z = LieMatrix<Rational>::zero(n, Rational(0));
    return {z, z, z, true};
  }
  auto lambda = integral_weights(triple.H);
  for (std::size_t i = 0; i < n; ++i)
    if (lambda[i] != -lambda[n - 1 - i]) throw MathError("NonToral", "weights of h are not theta-symmetric");

  LieMatrix<Rational> natural = space.piece().lift(triple.X);
  Matrix<Rational> xm(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && weight_of(lambda, i, j) == 2) xm(i, j) = natural(i, j);
  LieMatrix<Rational> X(xm);
  if (space.piece().graded(X) != triple.X) throw MathError("LiftMismatch", "e has components off weight 2");

  auto domain = p_weight_basis(pair, lambda, -2);
  auto target = p_weight_basis(pair, lambda, 2);
  if (domain.size() != target.size() || domain.empty())
    throw MathError("SingularSolve", "weight spaces p(-2) and p(2) have different dimensions");
  std::size_t n2 = n * n;
  linalg::Mat<Rational> a(n2, linalg::Vec<Rational>(domain.size(), Rational(0)));
  for (std::size_t k = 0; k < domain.size(); ++k) {
    auto col = liealg::bracket(X, liealg::bracket(X, domain[k].matrix)).flatten();
    for (std::size_t r = 0; r < n2; ++r) a[r][k] = col[r];
  }
  if (linalg::rank(a, domain.size()) != domain.size())
    throw MathError("SingularSolve", "ad(X)^2 is not injective on p(-2)");
  auto coeff = linalg::solve(a, X.scaled(Rational(-2)).flatten(), domain.size(), Rational(0));
  if (!coeff) throw MathError("SingularSolve", "ad(X)^2 Y = -2X has no solution");
  LieMatrix<Rational> Y = LieMatrix<Rational>::zero(n, Rational(0));
  for (std::size_t k = 0; k < domain.size(); ++k) Y = Y + domain[k].matrix.scaled((*coeff)[k]);
  LieMatrix<Rational> H = liealg::bracket(X, Y);
  Sl2Triple<Rational> out{Y, H, X, false};
  if (!liealg::relations_hold(out)) throw MathError("NoTriple", "lifted triple fails the bracket relations");
  out.normal = liealg::is_normal(out);
  if (!out.normal) throw MathError("NoTriple", "lifted triple is not normal");

  if (!space.opposite_piece().lax().contains(Y, p) || space.opposite_piece().graded(Y) != triple.Y)
    throw MathError("LiftMismatch", "Y does not reduce to f");
  if (!space.zero_piece().lax().contains(H, p) || space.zero_piece().graded(H) != triple.H)
    throw MathError("LiftMismatch", "H does not reduce to h");
  return out;
}

bool graded_solve_full_rank(const SymmetricPair& pair, const Sl2Triple<Rational>& t, const ApartmentPoint& x,
                            const Rational& r, const Rational& s, Prime p) {
  auto lambda = diagonal_weights(t.H);
  auto domain = p_weight_basis(pair, lambda, -2);
  auto target = p_weight_basis(pair, lambda, 2);
  if (domain.size() != target.size()) return false;
  if (domain.empty()) return true;
  std::vector<LieMatrix<Rational>> tgt;
  for (const auto& b : target) tgt.push_back(lattice_generator(b, x, Rational(s + r), p));
  linalg::Mat<Rational> m(target.size(), linalg::Vec<Rational>(domain.size(), Rational(0)));
  for (std::size_t k = 0; k < domain.size(); ++k) {
    auto y = lattice_generator(domain[k], x, Rational(s - r), p);
    auto img = liealg::bracket(t.X, liealg::bracket(t.X, y));
    auto c = liealg::coordinates(img, tgt);
    if (!c) return false;
    for (std::size_t l = 0; l < tgt.size(); ++l) m[l][k] = (*c)[l];
  }
  Rational det = determinant(m);
  return det != 0 && arith::val_p(det, p) == arith::Valuation(0);
}

int BuildingSetPolytope::dimension() const {
  if (empty) return -1;
  if (lo && hi && *lo == *hi) return 0;
  return 1;
}

bool BuildingSetPolytope::contains(const Rational& t) const {
  if (empty) return false;
  return (!lo || *lo <= t) && (!hi || t <= *hi);
}

BuildingSetPolytope building_polytope(const SymmetricPair& pair, const Sl2Triple<Rational>& t, const Rational& r,
                                      Prime p) {
  BuildingSetPolytope poly;
  auto v = pair.fixed_direction();
  auto constrain = [&](const LieMatrix<Rational>& m, const Rational& depth) {
    for (std::size_t i = 0; i < m.n(); ++i)
      for (std::size_t j = 0; j < m.n(); ++j) {
        auto val = arith::val_p(m(i, j), p);
        if (val.is_infinite()) continue;
        // val + c t >= depth
        long c = i == j ? 0 : v[i] - v[j];
        Rational rhs = depth - val.value();
        if (c == 0) {
          if (rhs > 0) poly.empty = true;
        } else if (c > 0) {
          Rational b = rhs / c;
          if (!poly.lo || b > *poly.lo) poly.lo = b;
        } else {
          Rational b = rhs / c;
          if (!poly.hi || b < *poly.hi) poly.hi = b;
        }
      }
  };
  constrain(t.X, r);
  constrain(t.Y, Rational(-r));
  constrain(t.H, Rational(0));
  if (poly.lo && poly.hi && *poly.lo > *poly.hi) poly.empty = true;
  return poly;
}

bool is_noticed_building(const ResidueSpace& space, const ResidueCoset& e) {
  const auto& facet = space.facet();
  const auto& pair = space.pair();
  if (e == space.zero_coset()) return facet.dim == 1;
  auto group = residue::action_group(space);
  auto rep = toral_representative(space, group, e);
  auto lifted = lift_sl2(space, rep.triple);
  auto poly = building_polytope(pair, lifted, space.r(), space.prime());
  if (!poly.contains(facet.witness_t()))
    throw MathError("FacetOutsidePolytope", "facet " + facet.label() + " is not in the building set of its lift");
  Rational lo = poly.lo ? *poly.lo : Rational(facet.lo - 2);
  Rational hi = poly.hi ? *poly.hi : Rational(facet.hi + 2);
  int best = -1;
  for (const auto& f : apartment::enumerate_theta_facets(pair, {lo, hi}, space.r()))
    if (poly.contains(f.lo) && poly.contains(f.hi)) best = std::max(best, f.dim);
  return facet.dim == best;
}

SliceResult slice_conjugate(const SymmetricPair& pair, const LieMatrix<Rational>& X, const LieMatrix<Rational>& Y,
                            const LieMatrix<Rational>& Z, const ApartmentPoint& x, const Rational& r, unsigned digits,
                            Prime p) {
  constexpr long kGuard = 4;
  if (digits < 1) throw std::invalid_argument("slice_conjugate needs at least one digit");
  std::size_t n = pair.n();
  LieMatrix<Rational> H = liealg::bracket(X, Y);
  Sl2Triple<Rational> triple{Y, H, X, false};
  if (!liealg::relations_hold(triple) || !liealg::is_normal(triple))
    throw std::invalid_argument("slice_conjugate needs a normal sl2-triple");
  if (!LatticeBounds(x, r, false).contains(X, p) || !LatticeBounds(x, Rational(-r), false).contains(Y, p) ||
      !LatticeBounds(x, Rational(0), false).contains(H, p))
    throw std::invalid_argument("x is not in the building set of the triple");
  if (!liealg::in_p(Z) || !LatticeBounds(x, r, true).contains(Z, p))
    throw std::invalid_argument("Z must lie in the strict p-lattice of depth r at x");

  const long precision = static_cast<long>(digits) + kGuard;
  const Rational goal = r + precision;

  auto p_basis = liealg::matrices_of(pair.p_basis());
  const auto& h_elems = pair.h_basis();
  auto centralizer = liealg::centralizer_basis({Y}, p_basis, n, Rational(0));
  std::vector<LieMatrix<Rational>> columns = centralizer;
  for (const auto& b : h_elems) columns.push_back(liealg::bracket(X, b.matrix));

  SliceResult out{Matrix<Rational>::identity(n, Rational(0)), Matrix<Rational>::identity(n, Rational(0)),
                  LieMatrix<Rational>::zero(n, Rational(0)), 0};
  const LieMatrix<Rational> target = X + Z;
  const int max_steps = static_cast<int>(8 * (precision + 2));
  for (; out.steps <= max_steps; ++out.steps) {
    LieMatrix<Rational> full = target - adjoint_approx(out.h, out.h_inv, X + out.C);
    LieMatrix<Rational> residual = liealg::eigen_split(full).anti;
    auto s = apartment::depth_of(residual, x, p);
    if (!s || *s >= goal) return out;
    if (*s <= r) throw MathError("SliceDiverged", "residual depth did not exceed r");

    auto coeff = liealg::coordinates(residual, columns);
    if (!coeff) throw MathError("SliceDecomposition", "residual is not in C_p(Y) + [X, h]");
    LieMatrix<Rational> c_step = LieMatrix<Rational>::zero(n, Rational(0));
    for (std::size_t k = 0; k < centralizer.size(); ++k) c_step = c_step + centralizer[k].scaled((*coeff)[k]);
    LieMatrix<Rational> step_p = LieMatrix<Rational>::zero(n, Rational(0));
    for (std::size_t k = 0; k < h_elems.size(); ++k)
      step_p = step_p + h_elems[k].matrix.scaled((*coeff)[centralizer.size() + k]);
    if (!LatticeBounds(x, *s, false).contains(c_step, p))
      throw MathError("SliceDecomposition", "centraliser part below the residual depth");
    if (!LatticeBounds(x, Rational(*s - r), false).contains(step_p, p))
      throw MathError("SliceDecomposition", "h part below depth s - r");

    // g approximates exp(-P): torus factor first, then the root unipotents.
    Matrix<Rational> g = Matrix<Rational>::identity(n, Rational(0));
    Matrix<Rational> g_inv = g;
    for (std::size_t k = 0; k < h_elems.size(); ++k) {
      Rational b = -(*coeff)[centralizer.size() + k];
      if (b == 0) continue;
      if (h_elems[k].diagonal) {
        auto root = arith::padic_sqrt(arith::PadicScalar(Rational(1 + 2 * b), p), static_cast<unsigned>(precision + 2));
        if (!root) throw MathError("SliceDecomposition", "1 + 2c is not a square");
        Rational a(*root);
        Rational a_inv(arith::inverse_mod_ppow(a, p, static_cast<unsigned long>(precision + 2)));
        g = g * pair.cocharacter(a);
        g_inv = pair.cocharacter(a_inv) * g_inv;
      } else {
        LieMatrix<Rational> nil = h_elems[k].matrix.scaled(b);
        g = g * liealg::exp_nilpotent(nil);
        g_inv = liealg::exp_nilpotent(-nil) * g_inv;
      }
    }
    out.C = out.C + c_step;
    out.h = truncate_group(g * out.h, x, precision + 1, p);
    out.h_inv = truncate_group(out.h_inv * g_inv, x, precision + 1, p);
  }
  throw MathError("SliceDiverged", "no convergence after " + std::to_string(max_steps) + " steps");
}

LieMatrix<Rational> kostant_conjugator(const SymmetricPair& pair, const Sl2Triple<Rational>& t1,
                                       const Sl2Triple<Rational>& t2) {
  if (t1.X != t2.X) throw std::invalid_argument("kostant_conjugator needs triples with the same X");
  for (const auto* t : {&t1, &t2})
    if (!liealg::relations_hold(*t) || !liealg::is_normal(*t))
      throw std::invalid_argument("kostant_conjugator needs normal sl2-triples");
  std::size_t n = pair.n();
  long reach = 2 * static_cast<long>(n - 1);
  // Projection onto the ad(H1)-eigenspace of weight w by Lagrange interpolation.
  auto project = [&](const LieMatrix<Rational>& z, long w) {
    LieMatrix<Rational> acc = z;
    for (long j = -reach; j <= reach; ++j) {
      if (j == w) continue;
      acc = (liealg::bracket(t1.H, acc) - acc.scaled(Rational(j))).scaled(Rational(1) / (w - j));
    }
    return acc;
  };
  LieMatrix<Rational> W = project(t1.H - t2.H, 1);
  for (long j = 1; j < reach; ++j) {
    LieMatrix<Rational> d = liealg::ad_exp(W, t1.H) - t2.H;
    W = W + project(d, j + 1).scaled(Rational(1) / (j + 1));
  }
  if (!liealg::in_h(W)) throw MathError("KostantConjugator", "conjugator left h");
  if (liealg::ad_exp(W, t1.H) != t2.H || liealg::ad_exp(W, t1.Y) != t2.Y || liealg::ad_exp(W, t1.X) != t1.X)
    throw MathError("KostantConjugator", "Ad(exp W) does not carry the first triple to the second");
  return W;
}

FixedPoint fixed_point_check(const SymmetricPair& pair, const Sl2Triple<Rational>& t, const Rational& r, Prime p) {
  auto lambda = diagonal_weights(t.H);
  auto poly = building_polytope(pair, t, Rational(0), p);
  if (poly.empty) throw MathError("EmptyBuildingSet", "depth-0 building set of the triple is empty");
  Rational t0(0);
  if (poly.lo && *poly.lo > 0) t0 = *poly.lo;
  if (poly.hi && *poly.hi < 0) t0 = *poly.hi;
  auto x = apartment::point_on_line(pair, t0);
  std::vector<Rational> yc;
  for (std::size_t i = 0; i < pair.n(); ++i) yc.push_back(Rational(x[i] + r / 2 * lambda[i]));
  ApartmentPoint y(std::move(yc));
  if (!LatticeBounds(y, r, false).contains(t.X, p) || !LatticeBounds(y, Rational(-r), false).contains(t.Y, p) ||
      !LatticeBounds(y, Rational(0), false).contains(t.H, p))
    throw MathError("FixedPoint", "shifted point is not in the depth-r building set");
  return {x, y};
}

}  // namespace mporbits::lifting
