#include "mporbits/residue.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace mporbits::residue {

namespace {

Rational p_power(Prime p, long k) {
  Rational base(arith::pow_p(p, static_cast<unsigned long>(k < 0 ? -k : k)));
  return k >= 0 ? base : Rational(1 / base);
}

bool in_bounds(const Matrix<Rational>& m, const LatticeBounds& b, Prime p) {
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j) {
      auto v = arith::val_p(m(i, j), p);
      if (!v.is_infinite() && v.value() < b.at(i, j)) return false;
    }
  return true;
}

}  // namespace

GradedPiece::GradedPiece(const SymmetricPair& pair, const ApartmentPoint& x, const Rational& s, Prime p)
    : depth_(s), p_(p), lax_(x, s, false), strict_(x, s, true) {
  for (const auto& b : pair.h_basis())
    if (keeps(b)) plus_.push_back(b);
  for (const auto& b : pair.p_basis())
    if (keeps(b)) minus_.push_back(b);
}

bool GradedPiece::keeps(const liealg::BasisElement& b) const {
  if (b.diagonal) return occupies(0, 0);
  for (const auto& [i, j] : b.support)
    if (!occupies(i, j)) return false;
  return true;
}

std::vector<LieMatrix<Fp>> GradedPiece::plus() const {
  std::vector<LieMatrix<Fp>> out;
  for (const auto& b : plus_) out.push_back(liealg::reduce_matrix(b.matrix, p_));
  return out;
}

std::vector<LieMatrix<Fp>> GradedPiece::minus() const {
  std::vector<LieMatrix<Fp>> out;
  for (const auto& b : minus_) out.push_back(liealg::reduce_matrix(b.matrix, p_));
  return out;
}

LieMatrix<Rational> GradedPiece::scale(const LieMatrix<Rational>& unscaled) const {
  Matrix<Rational> m = unscaled.matrix();
  for (std::size_t i = 0; i < m.n(); ++i)
    for (std::size_t j = 0; j < m.n(); ++j)
      if (m(i, j) != 0) m(i, j) *= p_power(p_, level(i, j));
  return LieMatrix<Rational>(std::move(m));
}

LieMatrix<Fp> GradedPiece::graded(const LieMatrix<Rational>& x) const {
  if (!lax_.contains(x, p_))
    throw std::invalid_argument("element is not in the lattice of depth " + depth_.get_str());
  Matrix<Fp> m(x.n(), Fp(0, p_));
  for (std::size_t i = 0; i < x.n(); ++i)
    for (std::size_t j = 0; j < x.n(); ++j)
      if (occupies(i, j)) m(i, j) = Fp::from_rational(Rational(x(i, j) / p_power(p_, level(i, j))), p_);
  return LieMatrix<Fp>(std::move(m));
}

LieMatrix<Rational> GradedPiece::lift(const LieMatrix<Fp>& graded) const {
  std::vector<LieMatrix<Fp>> basis = plus();
  for (auto& b : minus()) basis.push_back(b);
  std::vector<liealg::BasisElement> elems = plus_;
  elems.insert(elems.end(), minus_.begin(), minus_.end());
  std::size_t n = graded.n();
  LieMatrix<Rational> out = LieMatrix<Rational>::zero(n, Rational(0));
  if (basis.empty()) {
    if (!graded.is_zero()) throw std::invalid_argument("nonzero element of a zero residue space");
    return out;
  }
  auto c = liealg::coordinates(graded, basis);
  if (!c) throw std::invalid_argument("graded matrix is not in the residue space");
  for (std::size_t k = 0; k < elems.size(); ++k)
    if (!(*c)[k].is_zero()) out = out + scale(elems[k].matrix).scaled(Rational((*c)[k].value()));
  return out;
}

std::string ResidueCoset::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) s += (i ? "," : "") + std::to_string(coords[i]);
  return s + ")";
}

ResidueSpace::ResidueSpace(const SymmetricPair& pair, const ThetaFacet& facet, const Rational& r, Prime p)
    : pair_(pair), facet_(facet), r_(r), p_(p) {
  arith::require_odd_prime(p);
  if (!facet.theta_fixed) throw std::invalid_argument("residue spaces are built at theta-fixed facets");
  pieces_.emplace_back(pair, facet.witness, r, p);
  pieces_.emplace_back(pair, facet.witness, Rational(0), p);
  pieces_.emplace_back(pair, facet.witness, Rational(-r), p);
}

LieMatrix<Fp> ResidueSpace::graded(const ResidueCoset& e) const {
  auto basis = piece().minus();
  if (e.coords.size() != basis.size()) throw std::invalid_argument("coset has the wrong number of coordinates");
  LieMatrix<Fp> out = LieMatrix<Fp>::zero(pair_.n(), Fp(0, p_));
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (e.coords[k]) out = out + basis[k].scaled(Fp(e.coords[k], p_));
  return out;
}

ResidueCoset ResidueSpace::coset(const LieMatrix<Fp>& graded) const {
  auto basis = piece().minus();
  if (basis.empty()) {
    if (!graded.is_zero()) throw std::invalid_argument("nonzero element of a zero p-part");
    return {};
  }
  auto c = liealg::coordinates(graded, basis);
  if (!c) throw std::invalid_argument("graded matrix is not in the p-part of the residue space");
  ResidueCoset e;
  for (const auto& x : *c) e.coords.push_back(x.value());
  return e;
}

ResidueCoset ResidueSpace::zero_coset() const { return ResidueCoset{std::vector<std::uint32_t>(dim_minus(), 0)}; }

ResidueSpace residue_space(const SymmetricPair& pair, const ThetaFacet& facet, const Rational& r, Prime p) {
  return ResidueSpace(pair, facet, r, p);
}

ResidueCoset reduce(const ResidueSpace& space, const LieMatrix<Rational>& x) {
  if (!liealg::in_p(x)) throw std::invalid_argument("reduce: element is not in the p-part");
  return space.coset(space.piece().graded(x));
}

LieMatrix<Rational> lift(const ResidueSpace& space, const ResidueCoset& e) {
  const auto& basis = space.piece().minus_basis();
  if (e.coords.size() != basis.size()) throw std::invalid_argument("coset has the wrong number of coordinates");
  LieMatrix<Rational> out = LieMatrix<Rational>::zero(space.pair().n(), Rational(0));
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (e.coords[k]) out = out + space.piece().scale(basis[k].matrix).scaled(Rational(e.coords[k]));
  return out;
}

bool stabilizes(const GroupElement& g, const ApartmentPoint& x, Prime p) {
  std::size_t n = x.n();
  for (bool strict : {false, true}) {
    LatticeBounds b(x, Rational(0), strict);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Matrix<Rational> e(n, Rational(0));
        e(i, j) = p_power(p, b.at(i, j));
        if (!in_bounds(g.g * e * g.g_inv, b, p)) return false;
      }
  }
  return true;
}

std::vector<LineMove> line_moves(const SymmetricPair& pair, Prime p, long range) {
  std::vector<LineMove> out;
  auto w = pair.weyl_element();
  for (long m = -range; m <= range; ++m) {
    Rational a = p_power(p, m);
    Matrix<Rational> t = pair.cocharacter(a), t_inv = pair.cocharacter(Rational(1 / a));
    out.push_back({{t, t_inv, "translate(" + std::to_string(m) + ")"}, 1, -m});
    if (w) {
      Matrix<Rational> w_inv = *liealg::inverse(*w);
      out.push_back({{*w * t, t_inv * w_inv, "reflect(" + std::to_string(m) + ")"}, -1, m});
    }
  }
  return out;
}

std::vector<GroupElement> stabilizer_generators(const SymmetricPair& pair, const ApartmentPoint& x, Prime p) {
  std::vector<GroupElement> gens;
  for (std::uint32_t a = 2; a < p; ++a)
    gens.push_back({pair.cocharacter(Rational(a)), pair.cocharacter(Rational(1, a)), "torus(" + std::to_string(a) + ")"});
  for (const auto& b : pair.h_basis()) {
    if (b.diagonal) continue;
    auto [i, j] = b.support.front();
    long level = apartment::to_long(apartment::ceil_q(Rational(-x.alpha(i, j))));
    LieMatrix<Rational> nil = b.matrix.scaled(p_power(p, level));
    gens.push_back({liealg::exp_nilpotent(nil), liealg::exp_nilpotent(-nil),
                    "exp(p^" + std::to_string(level) + " " + b.name + ")"});
  }
  for (const auto& g : gens)
    if (!stabilizes(g, x, p)) throw std::logic_error("generator " + g.name + " does not stabilise " + x.to_string());
  auto t = apartment::line_parameter(pair, x);
  if (!t) throw std::invalid_argument("stabilizer_generators: point off the fixed line");
  for (const auto& mv : line_moves(pair, p, 4)) {
    if (mv.sign != -1 || Rational(mv.shift - *t) != *t) continue;
    if (stabilizes(mv.element, x, p)) gens.push_back(mv.element);
  }
  return gens;
}

std::vector<std::uint32_t> LinearMap::apply(const std::vector<std::uint32_t>& v, Prime p) const {
  std::vector<std::uint32_t> out(dim, 0);
  for (std::size_t i = 0; i < dim; ++i) {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < dim; ++j) s += static_cast<std::uint64_t>(a[i * dim + j]) * v[j];
    out[i] = static_cast<std::uint32_t>(s % p);
  }
  return out;
}

LinearMap LinearMap::compose(const LinearMap& o, Prime p) const {
  LinearMap r{dim, std::vector<std::uint32_t>(dim * dim, 0)};
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      std::uint64_t s = 0;
      for (std::size_t k = 0; k < dim; ++k) s += static_cast<std::uint64_t>(a[i * dim + k]) * o.a[k * dim + j];
      r.a[i * dim + j] = static_cast<std::uint32_t>(s % p);
    }
  return r;
}

ActionGroup::ActionGroup(std::size_t dim, Prime p, std::vector<LinearMap> generators, std::vector<std::string> names)
    : dim_(dim), p_(p), generators_(std::move(generators)), names_(std::move(names)) {}

std::vector<LinearMap> ActionGroup::closure(std::size_t limit) const {
  LinearMap id{dim_, std::vector<std::uint32_t>(dim_ * dim_, 0)};
  for (std::size_t i = 0; i < dim_; ++i) id.a[i * dim_ + i] = 1;
  std::set<LinearMap> seen{id};
  std::deque<LinearMap> queue{id};
  while (!queue.empty()) {
    LinearMap g = queue.front();
    queue.pop_front();
    for (const auto& s : generators_) {
      LinearMap h = s.compose(g, p_);
      if (seen.insert(h).second) {
        if (seen.size() > limit) throw BudgetExceeded("group closure exceeds " + std::to_string(limit) + " elements");
        queue.push_back(h);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

ActionGroup action_group(const ResidueSpace& space) {
  Prime p = space.prime();
  std::size_t d = space.dim_minus();
  std::vector<LinearMap> maps;
  std::vector<std::string> names;
  for (const auto& g : stabilizer_generators(space.pair(), space.point(), p)) {
    LinearMap m{d, std::vector<std::uint32_t>(d * d, 0)};
    for (std::size_t k = 0; k < d; ++k) {
      ResidueCoset unit{std::vector<std::uint32_t>(d, 0)};
      unit.coords[k] = 1;
      auto image = reduce(space, liealg::adjoint(g.g, g.g_inv, lift(space, unit)));
      for (std::size_t i = 0; i < d; ++i) m.a[i * d + k] = image.coords[i];
    }
    maps.push_back(std::move(m));
    names.push_back(g.name);
  }
  return ActionGroup(d, p, std::move(maps), std::move(names));
}

std::vector<ResidueCoset> orbit(const ActionGroup& group, const ResidueCoset& e) {
  std::set<std::vector<std::uint32_t>> seen{e.coords};
  std::deque<std::vector<std::uint32_t>> queue{e.coords};
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (const auto& g : group.generators()) {
      auto w = g.apply(v, group.prime());
      if (seen.insert(w).second) queue.push_back(std::move(w));
    }
  }
  std::vector<ResidueCoset> out;
  for (const auto& v : seen) out.push_back({v});
  return out;
}

bool has_positive_cocharacter(const LieMatrix<Fp>& graded, int box) {
  std::size_t n = graded.n();
  std::vector<std::pair<std::size_t, std::size_t>> support;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!graded(i, j).is_zero()) {
        if (i == j) return false;
        support.emplace_back(i, j);
      }
  if (support.empty()) return true;
  std::vector<long> mu(n, 0);
  // Odometer over mu_1..mu_{n-1} in [-box, box].
  std::vector<long> free(n - 1, -box);
  while (true) {
    long sum = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      mu[i] = free[i];
      sum += free[i];
    }
    mu[n - 1] = -sum;
    bool ok = true;
    for (const auto& [i, j] : support)
      if (mu[i] - mu[j] <= 0) {
        ok = false;
        break;
      }
    if (ok) return true;
    std::size_t k = 0;
    while (k < free.size() && free[k] == box) free[k++] = -box;
    if (k == free.size()) return false;
    ++free[k];
  }
}

std::vector<OrbitInfo> enumerate_orbits(const ResidueSpace& space, const ActionGroup& group, std::uint64_t budget) {
  Prime p = space.prime();
  std::size_t d = space.dim_minus();
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    total *= p;
    if (total > budget)
      throw BudgetExceeded("residue p-part has " + std::to_string(p) + "^" + std::to_string(d) +
                           " elements, over the budget of " + std::to_string(budget));
  }
  auto decode = [&](std::uint64_t idx) {
    std::vector<std::uint32_t> v(d);
    for (std::size_t k = d; k-- > 0;) {
      v[k] = static_cast<std::uint32_t>(idx % p);
      idx /= p;
    }
    return v;
  };
  auto encode = [&](const std::vector<std::uint32_t>& v) {
    std::uint64_t idx = 0;
    for (auto c : v) idx = idx * p + c;
    return idx;
  };
  std::vector<char> visited(total, 0);
  std::vector<OrbitInfo> out;
  for (std::uint64_t start = 0; start < total; ++start) {
    if (visited[start]) continue;
    visited[start] = 1;
    std::deque<std::vector<std::uint32_t>> queue{decode(start)};
    OrbitInfo info{{decode(start)}, 0, false, std::nullopt};
    while (!queue.empty()) {
      auto v = std::move(queue.front());
      queue.pop_front();
      ++info.size;
      if (!info.degenerate && has_positive_cocharacter(space.graded({v}))) info.degenerate = true;
      for (const auto& g : group.generators()) {
        auto w = g.apply(v, p);
        auto idx = encode(w);
        if (!visited[idx]) {
          visited[idx] = 1;
          queue.push_back(std::move(w));
        }
      }
    }
    out.push_back(std::move(info));
  }
  return out;
}

bool is_degenerate(const ResidueSpace& space, const ActionGroup& group, const ResidueCoset& e) {
  for (const auto& x : orbit(group, e))
    if (has_positive_cocharacter(space.graded(x))) return true;
  return false;
}

liealg::Sl2Triple<Fp> complete_in_space(const ResidueSpace& space, const ResidueCoset& e) {
  return liealg::complete_sl2(space.graded(e), space.opposite_piece().minus());
}

bool is_fp_diagonalizable(const Matrix<Fp>& m) {
  Prime p = m.zero().prime();
  Matrix<Fp> prod = Matrix<Fp>::identity(m.n(), m.zero());
  for (std::uint32_t lam = 0; lam < p; ++lam) {
    Matrix<Fp> shifted = m - Matrix<Fp>::identity(m.n(), m.zero()).scaled(Fp(lam, p));
    if (linalg::rank(shifted.rows(), m.n()) < m.n()) prod = prod * shifted;
  }
  return prod.is_zero();
}

bool is_noticed_rank(const ResidueSpace& space, const ResidueCoset& e) {
  if (space.r() != 0) throw std::invalid_argument("the rank criterion is implemented at depth 0 only");
  Prime p = space.prime();
  std::size_t n = space.pair().n();
  Fp zero(0, p);
  auto t = complete_in_space(space, e);
  std::vector<LieMatrix<Fp>> all = space.piece().plus();
  for (auto& b : space.piece().minus()) all.push_back(b);
  std::vector<LieMatrix<Fp>> brackets;
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a + 1; b < all.size(); ++b) brackets.push_back(liealg::bracket(all[a], all[b]));
  auto derived = liealg::span_basis(brackets, n, zero);
  auto plus_derived = liealg::intersect(space.piece().plus(), derived, n, zero);
  auto c = liealg::centralizer_basis({t.X, t.H, t.Y}, plus_derived, n, zero);
  if (c.empty()) return true;
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < c.size(); ++k) count *= p;
  for (std::uint64_t idx = 1; idx < count; ++idx) {
    std::vector<Fp> coeff;
    std::uint64_t rest = idx;
    for (std::size_t k = 0; k < c.size(); ++k) {
      coeff.emplace_back(static_cast<std::int64_t>(rest % p), p);
      rest /= p;
    }
    if (is_fp_diagonalizable(liealg::combination(coeff, c, n, zero).matrix())) return false;
  }
  return true;
}

bool pairs_equivalent(const ResidueSpace& s1, const ResidueCoset& e1, const ResidueSpace& s2, const ResidueCoset& e2) {
  if (!(s1.pair() == s2.pair()) || s1.prime() != s2.prime() || s1.r() != s2.r()) return false;
  const auto& f1 = s1.facet();
  const auto& f2 = s2.facet();
  if (f1.dim != f2.dim) return false;
  Prime p = s1.prime();
  auto group = action_group(s1);
  auto orb = orbit(group, e1);
  std::set<ResidueCoset> targets(orb.begin(), orb.end());
  LieMatrix<Rational> x2 = lift(s2, e2);
  for (const auto& mv : line_moves(s1.pair(), p, 4)) {
    if (f1.dim == 0 && Rational(f2.lo * mv.sign + mv.shift) != f1.lo) continue;
    auto moved = liealg::adjoint(mv.element.g, mv.element.g_inv, x2);
    if (!s1.piece().lax().contains(moved, p)) continue;
    if (targets.count(reduce(s1, moved))) return true;
  }
  return false;
}

}  // namespace mporbits::residue
