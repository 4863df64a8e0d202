#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mporbits/apartment.hpp"
#include "mporbits/liealg.hpp"

namespace mporbits::residue {

using apartment::ApartmentPoint;
using apartment::LatticeBounds;
using apartment::ThetaFacet;
using arith::Fp;
using arith::Prime;
using arith::Rational;
using liealg::LieMatrix;
using liealg::Matrix;
using liealg::SymmetricPair;

// g_{x,s} / g_{x,s+} for a point x on the fixed line. An element is stored as
// its graded coefficient matrix: entry (i,j) is X_ij / p^level(i,j) mod p.
// With this normalisation the bracket of graded pieces is the matrix commutator.
class GradedPiece {
 public:
  GradedPiece(const SymmetricPair& pair, const ApartmentPoint& x, const Rational& s, Prime p);

  const Rational& depth() const { return depth_; }
  Prime prime() const { return p_; }
  const LatticeBounds& lax() const { return lax_; }
  const LatticeBounds& strict() const { return strict_; }

  bool occupies(std::size_t i, std::size_t j) const { return lax_.at(i, j) != strict_.at(i, j); }
  long level(std::size_t i, std::size_t j) const { return lax_.at(i, j); }

  // Basis elements of h and p whose positions all survive in the quotient.
  const std::vector<liealg::BasisElement>& plus_basis() const { return plus_; }
  const std::vector<liealg::BasisElement>& minus_basis() const { return minus_; }
  std::vector<LieMatrix<Fp>> plus() const;
  std::vector<LieMatrix<Fp>> minus() const;
  std::size_t dim() const { return plus_.size() + minus_.size(); }

  // Entry (i,j) multiplied by p^level(i,j).
  LieMatrix<Rational> scale(const LieMatrix<Rational>& unscaled) const;
  // Graded coefficient matrix of X in g_{x,s}.
  LieMatrix<Fp> graded(const LieMatrix<Rational>& x) const;
  // Lift through the basis with coefficients in [0, p).
  LieMatrix<Rational> lift(const LieMatrix<Fp>& graded) const;

 private:
  bool keeps(const liealg::BasisElement& b) const;
  Rational depth_;
  Prime p_;
  LatticeBounds lax_, strict_;
  std::vector<liealg::BasisElement> plus_, minus_;
};

struct ResidueCoset {
  std::vector<std::uint32_t> coords;  // over the p-part basis of the residue space
  auto operator<=>(const ResidueCoset&) const = default;
  std::string to_string() const;
};

class ResidueSpace {
 public:
  ResidueSpace(const SymmetricPair& pair, const ThetaFacet& facet, const Rational& r, Prime p);

  const SymmetricPair& pair() const { return pair_; }
  const ThetaFacet& facet() const { return facet_; }
  const Rational& r() const { return r_; }
  Prime prime() const { return p_; }
  const ApartmentPoint& point() const { return facet_.witness; }

  const GradedPiece& piece() const { return pieces_[0]; }          // depth r
  const GradedPiece& zero_piece() const { return pieces_[1]; }     // depth 0
  const GradedPiece& opposite_piece() const { return pieces_[2]; }  // depth -r

  std::size_t dim() const { return piece().dim(); }
  std::size_t dim_minus() const { return piece().minus_basis().size(); }
  std::size_t dim_plus() const { return piece().plus_basis().size(); }

  LieMatrix<Fp> graded(const ResidueCoset& e) const;
  ResidueCoset coset(const LieMatrix<Fp>& graded) const;
  ResidueCoset zero_coset() const;

 private:
  SymmetricPair pair_;
  ThetaFacet facet_;
  Rational r_;
  Prime p_;
  std::vector<GradedPiece> pieces_;
};

ResidueSpace residue_space(const SymmetricPair& pair, const ThetaFacet& facet, const Rational& r, Prime p);
ResidueCoset reduce(const ResidueSpace& space, const LieMatrix<Rational>& x);
LieMatrix<Rational> lift(const ResidueSpace& space, const ResidueCoset& e);

struct GroupElement {
  Matrix<Rational> g, g_inv;
  std::string name;
};

// Whether Ad(g) preserves both g_{x,0} and g_{x,0+}.
bool stabilizes(const GroupElement& g, const ApartmentPoint& x, Prime p);

// Generators for the image of the stabiliser of x in H acting on the residue:
// torus units, theta-fixed root unipotents scaled to x, and affine reflections fixing x.
std::vector<GroupElement> stabilizer_generators(const SymmetricPair& pair, const ApartmentPoint& x, Prime p);

// Elements of N_H(T) acting on the fixed line as t -> sign * t + shift.
struct LineMove {
  GroupElement element;
  int sign;
  long shift;
};
std::vector<LineMove> line_moves(const SymmetricPair& pair, Prime p, long range);

// F_p-linear map on the p-part coordinates, row-major.
struct LinearMap {
  std::size_t dim;
  std::vector<std::uint32_t> a;
  std::vector<std::uint32_t> apply(const std::vector<std::uint32_t>& v, Prime p) const;
  LinearMap compose(const LinearMap& o, Prime p) const;  // this after o
  bool operator==(const LinearMap&) const = default;
  auto operator<=>(const LinearMap&) const = default;
};

class ActionGroup {
 public:
  ActionGroup(std::size_t dim, Prime p, std::vector<LinearMap> generators, std::vector<std::string> names);
  std::size_t dim() const { return dim_; }
  Prime prime() const { return p_; }
  const std::vector<LinearMap>& generators() const { return generators_; }
  const std::vector<std::string>& names() const { return names_; }
  // Every element of the generated group; throws BudgetExceeded past limit.
  std::vector<LinearMap> closure(std::size_t limit) const;

 private:
  std::size_t dim_;
  Prime p_;
  std::vector<LinearMap> generators_;
  std::vector<std::string> names_;
};

ActionGroup action_group(const ResidueSpace& space);

// Orbit of e in lexicographic order.
std::vector<ResidueCoset> orbit(const ActionGroup& group, const ResidueCoset& e);

struct OrbitInfo {
  ResidueCoset rep;  // lexicographically least element
  std::uint64_t size;
  bool degenerate;
  std::optional<bool> noticed;
};

constexpr std::uint64_t kDefaultBudget = 10'000'000;

std::vector<OrbitInfo> enumerate_orbits(const ResidueSpace& space, const ActionGroup& group,
                                        std::uint64_t budget = kDefaultBudget);

// Some integral mu = (mu_1, ..., mu_n), sum zero, |mu_i| <= box for i < n,
// with mu_i - mu_j > 0 on every nonzero entry.
bool has_positive_cocharacter(const LieMatrix<Fp>& graded, int box = 4);

bool is_degenerate(const ResidueSpace& space, const ActionGroup& group, const ResidueCoset& e);

// Completion with h in the depth-0 piece and f in the depth -r piece.
liealg::Sl2Triple<Fp> complete_in_space(const ResidueSpace& space, const ResidueCoset& e);

// Noticed test via the centraliser of the triple inside V+ cap [V, V] (depth 0 only).
bool is_noticed_rank(const ResidueSpace& space, const ResidueCoset& e);

bool is_fp_diagonalizable(const Matrix<Fp>& m);

// Whether (F1, e1) and (F2, e2) are related by an apartment symmetry followed by
// the stabiliser of F1.
bool pairs_equivalent(const ResidueSpace& s1, const ResidueCoset& e1, const ResidueSpace& s2, const ResidueCoset& e2);

}  // namespace mporbits::residue
