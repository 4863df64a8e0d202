#include <doctest.h>

#include "support.hpp"

using namespace mporbits::lifting;
using mporbits::apartment::ApartmentPoint;
using mporbits::apartment::enumerate_theta_facets;
using mporbits::apartment::facet_at;
using mporbits::apartment::LatticeBounds;
using mporbits::apartment::point_on_line;
using mporbits::arith::Fp;
using mporbits::arith::Prime;
using mporbits::arith::Rational;
using mporbits::liealg::LieMatrix;
using mporbits::liealg::Matrix;
using mporbits::liealg::SymmetricPair;
using mporbits::residue::ResidueCoset;
using mporbits::residue::ResidueSpace;
using testsupport::D;
using testsupport::E;
using testsupport::Gen;
using testsupport::Q;

namespace {

ResidueSpace sl3_space(const Rational& t, Prime p) {
  auto pair = SymmetricPair::sl3();
  return ResidueSpace(pair, facet_at(pair, t, 0), 0, p);
}

Sl2Triple<Rational> lift_coset(const ResidueSpace& s, std::vector<std::uint32_t> coords) {
  return lift_sl2(s, mporbits::residue::complete_in_space(s, ResidueCoset{std::move(coords)}));
}

Sl2Triple<Rational> T(LieMatrix<Rational> y, LieMatrix<Rational> h, LieMatrix<Rational> x) {
  return {std::move(y), std::move(h), std::move(x), true};
}

}  // namespace

TEST_CASE("lifting residue triples at the worked facets") {
  const Prime p = 5;
  auto f1 = sl3_space(0, p), f3 = sl3_space(Q(1, 2), p);
  auto rank1 = lift_coset(f1, {0, 0, 1, 0, 0});
  CHECK(rank1.X == E(3, 1, 3));
  CHECK(rank1.Y == E(3, 3, 1));
  CHECK(rank1.H == D({1, 0, -1}));

  auto regular = lift_coset(f1, {0, 1, 0, 0, 0});
  CHECK(regular.X == E(3, 1, 2) + E(3, 2, 3));
  CHECK(regular.Y == (E(3, 2, 1) + E(3, 3, 2)).scaled(2));
  CHECK(regular.H == D({2, 0, -2}));

  for (long s = 1; s < 5; ++s) {
    auto t = lift_coset(f3, {0, static_cast<std::uint32_t>(s), 0});
    CHECK(t.X == E(3, 1, 3, Q(s, 5)));
    CHECK(t.Y == E(3, 3, 1, Q(5, s)));
    CHECK(t.H == D({1, 0, -1}));
  }
}

TEST_CASE("every degenerate orbit lifts to a normal triple reducing to it") {
  for (auto pair : {SymmetricPair::sl3(), SymmetricPair::sl2()})
    for (Prime p : {5u, 7u})
      for (const auto& f : enumerate_theta_facets(pair, {Q(0), Q(1)}, 0)) {
        ResidueSpace s(pair, f, 0, p);
        auto group = mporbits::residue::action_group(s);
        for (const auto& o : mporbits::residue::enumerate_orbits(s, group)) {
          if (!o.degenerate) continue;
          auto rep = toral_representative(s, group, o.rep);
          auto t = lift_sl2(s, rep.triple);
          CHECK(mporbits::liealg::relations_hold(t));
          CHECK(mporbits::liealg::is_normal(t));
          CHECK(t.normal);
          CHECK(mporbits::residue::reduce(s, t.X) == rep.e);
          CHECK(LatticeBounds(f.witness, 0, false).contains(t.Y, p));
          CHECK(s.zero_piece().graded(t.H) == rep.triple.H);
          if (!t.X.is_zero()) CHECK(graded_solve_full_rank(pair, t, f.witness, 0, 0, p));
        }
      }
}

TEST_CASE("integral weights of a diagonal h") {
  CHECK(integral_weights(testsupport::Df({2, 0, -2}, 5)) == std::vector<long>{2, 0, -2});
  CHECK(integral_weights(testsupport::Df({1, 0, -1}, 7)) == std::vector<long>{1, 0, -1});
}

TEST_CASE("building polytopes") {
  auto pair = SymmetricPair::sl3();
  const Prime p = 5;
  auto a = building_polytope(pair, T(E(3, 3, 1), D({1, 0, -1}), E(3, 1, 3)), 0, p);
  CHECK(a.lo == Q(0));
  CHECK(a.hi == Q(0));
  CHECK(a.dimension() == 0);
  auto b = building_polytope(pair, T(E(3, 3, 1, 5), D({1, 0, -1}), E(3, 1, 3, Q(1, 5))), 0, p);
  CHECK(b.lo == Q(1, 2));
  CHECK(b.hi == Q(1, 2));
  auto z = testsupport::zero3();
  auto c = building_polytope(pair, T(z, z, z), 0, p);
  CHECK_FALSE(c.lo);
  CHECK_FALSE(c.hi);
  CHECK(c.dimension() == 1);
}

TEST_CASE("building polytope matches lattice membership") {
  auto pair = SymmetricPair::sl3();
  const Prime p = 5;
  Gen g(33);
  std::vector<Sl2Triple<Rational>> triples{T(E(3, 3, 1), D({1, 0, -1}), E(3, 1, 3)),
                                           T((E(3, 2, 1) + E(3, 3, 2)).scaled(2), D({2, 0, -2}), E(3, 1, 2) + E(3, 2, 3))};
  for (int k = 0; k < 20; ++k) {
    long v = g.integer(-3, 3);
    Rational s = g.with_valuation(p, v);
    triples.push_back(T(E(3, 3, 1, 1 / s), D({1, 0, -1}), E(3, 1, 3, s)));
  }
  for (const auto& t : triples)
    for (Rational r : {Q(0), Q(1, 2), Q(-1, 4)}) {
      auto poly = building_polytope(pair, t, r, p);
      for (long k = -32; k <= 32; ++k) {
        Rational u = Q(k, 8);
        auto x = point_on_line(pair, u);
        bool member = LatticeBounds(x, r, false).contains(t.X, p) &&
                      LatticeBounds(x, Rational(-r), false).contains(t.Y, p) &&
                      LatticeBounds(x, 0, false).contains(t.H, p);
        CHECK(poly.contains(u) == member);
      }
    }
}

TEST_CASE("noticed by the building criterion") {
  const Prime p = 5;
  auto f1 = sl3_space(0, p), f2 = sl3_space(Q(1, 4), p), f3 = sl3_space(Q(1, 2), p);
  CHECK(is_noticed_building(f1, ResidueCoset{{0, 0, 1, 0, 0}}));
  CHECK(is_noticed_building(f1, ResidueCoset{{0, 1, 0, 0, 0}}));
  CHECK(is_noticed_building(f2, ResidueCoset{{0}}));
  CHECK_FALSE(is_noticed_building(f1, f1.zero_coset()));
  CHECK_FALSE(is_noticed_building(f3, f3.zero_coset()));
  CHECK(is_noticed_building(f3, ResidueCoset{{0, 0, 1}}));
}

TEST_CASE("slice algorithm on the rank-one triple") {
  auto pair = SymmetricPair::sl3();
  const Prime p = 5;
  auto x = point_on_line(pair, 0);
  auto X = E(3, 1, 3), Y = E(3, 3, 1);
  auto res = slice_conjugate(pair, X, Y, E(3, 1, 3, 5), x, 0, 8, p);
  CHECK(res.C.is_zero());
  CHECK(res.h.is_diagonal());
  Rational a = res.h(0, 0);
  CHECK(res.h(1, 1) == 1);
  Rational diff = a * a - 6;
  CHECK(mporbits::arith::val_p(diff, p) >= mporbits::arith::Valuation(8));

  auto zero = slice_conjugate(pair, X, Y, testsupport::zero3(), x, 0, 8, p);
  CHECK(zero.C.is_zero());
  CHECK(zero.h == Matrix<Rational>::identity(3, Rational(0)));
  CHECK(zero.steps == 0);

  auto Z = E(3, 3, 1, 5);
  auto mixed = slice_conjugate(pair, X, Y, Z, x, 0, 8, p);
  CHECK_FALSE(mixed.C.is_zero());
  CHECK(mporbits::liealg::bracket(mixed.C, Y).is_zero());
  CHECK(testsupport::congruent(mixed.h * (X + mixed.C).matrix() * mixed.h_inv, (X + Z).matrix(),
                               LatticeBounds(x, 8, false), p));

  CHECK_THROWS_AS(slice_conjugate(pair, X, Y, E(3, 1, 3), x, 0, 8, p), std::invalid_argument);
}

TEST_CASE("Kostant conjugator") {
  auto pair = SymmetricPair::sl3();
  auto t1 = T(E(3, 3, 1), D({1, 0, -1}), E(3, 1, 3));
  auto w = E(3, 1, 2) - E(3, 2, 3);
  auto t2 = T(mporbits::liealg::ad_exp(w, t1.Y), mporbits::liealg::ad_exp(w, t1.H), t1.X);
  REQUIRE(mporbits::liealg::relations_hold(t2));
  auto got = kostant_conjugator(pair, t1, t2);
  CHECK(mporbits::liealg::ad_exp(got, t1.H) == t2.H);
  CHECK(mporbits::liealg::ad_exp(got, t1.Y) == t2.Y);
  CHECK(kostant_conjugator(pair, t1, t1).is_zero());
}

TEST_CASE("fixed points of triples") {
  auto pair = SymmetricPair::sl3();
  const Prime p = 5;
  auto t = T(E(3, 3, 1), D({1, 0, -1}), E(3, 1, 3));
  auto r0 = fixed_point_check(pair, t, 0, p);
  CHECK(r0.x == ApartmentPoint({0, 0, 0}));
  CHECK(r0.y == r0.x);
  auto r1 = fixed_point_check(pair, t, 1, p);
  CHECK(r1.y == ApartmentPoint({Q(1, 2), 0, Q(-1, 2)}));
  CHECK(LatticeBounds(r1.y, 1, false).contains(E(3, 1, 3), p));
  CHECK_FALSE(LatticeBounds(r1.y, 1, false).contains(E(3, 1, 3, Q(1, 5)), p));
  auto z = testsupport::zero3();
  CHECK(fixed_point_check(pair, T(z, z, z), 0, p).x == ApartmentPoint({0, 0, 0}));
}

TEST_CASE("weight projections preserve depth") {
  auto pair = SymmetricPair::sl3();
  const Prime p = 5;
  Gen g(44);
  std::vector<long> lambda{2, 0, -2};
  for (int k = 0; k < 30; ++k) {
    Rational t = Q(g.integer(-4, 4), 4), s = Q(g.integer(-4, 4), 4);
    auto x = point_on_line(pair, t);
    LatticeBounds lat(x, s, false);
    auto X = testsupport::random_in_lattice(g, lat, p);
    const auto& m = X.matrix();
    REQUIRE(lat.contains(X, p));
    for (long w = -4; w <= 4; w += 2) {
      Matrix<Rational> part(3, Rational(0));
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          if (lambda[i] - lambda[j] == w) part(i, j) = m(i, j);
      CHECK(lat.contains(LieMatrix<Rational>(part), p));
    }
  }
}

TEST_CASE("Kostant conjugator on conjugated triples") {
  auto pair = SymmetricPair::sl3();
  Gen g(55);
  for (int k = 0; k < 10; ++k) {
    auto c = testsupport::random_h_sl3(g);
    Rational s = g.nonzero_rational(8);
    auto move = [&](const LieMatrix<Rational>& z) { return mporbits::liealg::adjoint(c.g, c.g_inv, z); };
    auto t1 = T(move(E(3, 3, 1, 1 / s)), move(D({1, 0, -1})), move(E(3, 1, 3, s)));
    auto w = move((E(3, 1, 2) - E(3, 2, 3)).scaled(g.nonzero_rational(8)));
    auto t2 = T(mporbits::liealg::ad_exp(w, t1.Y), mporbits::liealg::ad_exp(w, t1.H), t1.X);
    REQUIRE(mporbits::liealg::relations_hold(t1));
    REQUIRE(mporbits::liealg::relations_hold(t2));
    auto got = kostant_conjugator(pair, t1, t2);
    CHECK(got == w);
    CHECK(mporbits::liealg::in_h(got));
  }
  auto t1 = T(E(3, 3, 1), D({1, 0, -1}), E(3, 1, 3));
  auto other = T(E(3, 3, 1), D({1, 0, -1}), E(3, 1, 3, 2));
  CHECK_THROWS_AS(kostant_conjugator(pair, t1, other), std::invalid_argument);
}

TEST_CASE("slice algorithm on seeded perturbations") {
  auto pair = SymmetricPair::sl3();
  const Prime p = 5;
  Gen g(66);
  auto origin = point_on_line(pair, 0), half = point_on_line(pair, Q(1, 2));
  struct Case {
    LieMatrix<Rational> X, Y;
    mporbits::apartment::ApartmentPoint x;
  };
  std::vector<Case> cases{{E(3, 1, 3), E(3, 3, 1), origin},
                          {E(3, 1, 2) + E(3, 2, 3), (E(3, 2, 1) + E(3, 3, 2)).scaled(2), origin},
                          {E(3, 1, 3, Q(1, 5)), E(3, 3, 1, 5), half}};
  for (const auto& c : cases)
    for (int k = 0; k < 6; ++k) {
      auto Z = mporbits::liealg::eigen_split(testsupport::random_in_lattice(g, LatticeBounds(c.x, 0, true), p)).anti;
      auto res = slice_conjugate(pair, c.X, c.Y, Z, c.x, 0, 10, p);
      CHECK(mporbits::liealg::bracket(res.C, c.Y).is_zero());
      CHECK(mporbits::liealg::in_p(res.C));
      CHECK(LatticeBounds(c.x, 0, true).contains(res.C, p));
      auto one = Matrix<Rational>::identity(3, Rational(0));
      CHECK(testsupport::congruent(res.h * res.h_inv, one, LatticeBounds(c.x, 10, false), p));
      CHECK(testsupport::congruent(res.h, one, LatticeBounds(c.x, 0, true), p));
      CHECK(testsupport::congruent(res.h * (c.X + res.C).matrix() * res.h_inv, (c.X + Z).matrix(),
                                   LatticeBounds(c.x, 10, false), p));
    }
}
