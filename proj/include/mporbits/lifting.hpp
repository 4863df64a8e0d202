#pragma once

#include <optional>
#include <vector>

#include "mporbits/residue.hpp"

namespace mporbits::lifting {

using apartment::ApartmentPoint;
using arith::Fp;
using arith::Prime;
using arith::Rational;
using liealg::LieMatrix;
using liealg::Matrix;
using liealg::Sl2Triple;
using liealg::SymmetricPair;
using residue::ResidueCoset;
using residue::ResidueSpace;

// Orbit element of e whose lexicographically least completion has diagonal h.
struct ToralRepresentative {
  ResidueCoset e;
  Sl2Triple<Fp> triple;
};
ToralRepresentative toral_representative(const ResidueSpace& space, const residue::ActionGroup& group,
                                         const ResidueCoset& e);

// Integral weights of a diagonal h, taken in (-p/2, p/2).
std::vector<long> integral_weights(const LieMatrix<Fp>& h);

// Normal sl2-triple over Q reducing to the given residue triple (h must be diagonal).
Sl2Triple<Rational> lift_sl2(const ResidueSpace& space, const Sl2Triple<Fp>& triple);

// Whether ad(X)^2 : p_{x,s-r}(-2) -> p_{x,s+r}(2) is an isomorphism of Z_p-lattices,
// with weights taken from the diagonal of H.
bool graded_solve_full_rank(const SymmetricPair& pair, const Sl2Triple<Rational>& t, const ApartmentPoint& x,
                            const Rational& r, const Rational& s, Prime p);

// Points t of the fixed line with X in g_{x,r}, Y in g_{x,-r}, H in g_{x,0}.
struct BuildingSetPolytope {
  bool empty = false;
  std::optional<Rational> lo, hi;  // nullopt = unbounded

  int dimension() const;
  bool contains(const Rational& t) const;
};

BuildingSetPolytope building_polytope(const SymmetricPair& pair, const Sl2Triple<Rational>& t, const Rational& r,
                                      Prime p);

bool is_noticed_building(const ResidueSpace& space, const ResidueCoset& e);

struct SliceResult {
  Matrix<Rational> h, h_inv;  // truncated modulo p^(digits + guard) relative to the lattice at x
  LieMatrix<Rational> C;
  int steps = 0;
};

// Successive approximation: h in H_{x,0+} and C in C_p(Y) with Ad(h)(X + C) = X + Z
// modulo p_{x, r + digits}.
SliceResult slice_conjugate(const SymmetricPair& pair, const LieMatrix<Rational>& X, const LieMatrix<Rational>& Y,
                            const LieMatrix<Rational>& Z, const ApartmentPoint& x, const Rational& r, unsigned digits,
                            Prime p);

// W in h_X with Ad(exp W) taking the first normal triple to the second (same X).
LieMatrix<Rational> kostant_conjugator(const SymmetricPair& pair, const Sl2Triple<Rational>& t1,
                                       const Sl2Triple<Rational>& t2);

struct FixedPoint {
  ApartmentPoint x;  // point of the depth-0 building set nearest the origin
  ApartmentPoint y;  // x + (r/2) lambda
};
FixedPoint fixed_point_check(const SymmetricPair& pair, const Sl2Triple<Rational>& t, const Rational& r, Prime p);

}  // namespace mporbits::lifting
