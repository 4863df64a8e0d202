#pragma once

#include <string>
#include <vector>

#include "mporbits/arith.hpp"
#include "mporbits/liealg.hpp"

namespace mporbits::apartment {

using arith::Prime;
using arith::Rational;
using liealg::SymmetricPair;

// Point of the standard apartment: n rationals summing to zero.
class ApartmentPoint {
 public:
  explicit ApartmentPoint(std::vector<Rational> coords);
  std::size_t n() const { return coords_.size(); }
  const std::vector<Rational>& coords() const { return coords_; }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  // Value of the root x_i - x_j.
  Rational alpha(std::size_t i, std::size_t j) const { return coords_[i] - coords_[j]; }
  std::string to_string() const;
  bool operator==(const ApartmentPoint& o) const { return coords_ == o.coords_; }

 private:
  std::vector<Rational> coords_;
};

// (x_1, ..., x_n) -> (-x_n, ..., -x_1).
ApartmentPoint theta_on_point(const ApartmentPoint& x);

ApartmentPoint point_on_line(const SymmetricPair& pair, const Rational& t);
// t with x = t v, or nullopt when x is off the theta-fixed line.
std::optional<Rational> line_parameter(const SymmetricPair& pair, const ApartmentPoint& x);

// The affine function x -> x_i - x_j + m.
struct AffineRoot {
  std::size_t i, j;
  long m;
  Rational value(const ApartmentPoint& x) const { return x.alpha(i, j) + m; }
  std::string to_string() const;
  auto operator<=>(const AffineRoot&) const = default;
};

// Per-entry minimal valuations of g_{x,r} (strict = false) or g_{x,r+} (strict = true).
class LatticeBounds {
 public:
  LatticeBounds(const ApartmentPoint& x, const Rational& r, bool strict);

  std::size_t n() const { return n_; }
  const Rational& depth() const { return depth_; }
  bool strict() const { return strict_; }
  long at(std::size_t i, std::size_t j) const { return bound_[i * n_ + j]; }
  bool contains(const liealg::LieMatrix<Rational>& x, Prime p) const;
  bool operator==(const LatticeBounds& o) const = default;

 private:
  std::size_t n_;
  Rational depth_;
  bool strict_;
  std::vector<long> bound_;
};

LatticeBounds mp_lattice(const ApartmentPoint& x, const Rational& r, bool strict);

Rational floor_q(const Rational& q);
Rational ceil_q(const Rational& q);
long to_long(const Rational& integral);

// Largest s with x in g_{y,s} (entrywise valuation plus root value); infinite for 0.
// Returns nullopt for x = 0.
std::optional<Rational> depth_of(const liealg::LieMatrix<Rational>& x, const ApartmentPoint& y, Prime p);

// A theta-facet meeting the theta-fixed line, described by its parameter interval.
struct ThetaFacet {
  Rational lo, hi;  // open interval (lo, hi), or the point lo == hi
  int dim;
  ApartmentPoint witness;
  std::vector<AffineRoot> active;
  bool theta_fixed = true;

  Rational witness_t() const;
  std::string label() const;
  bool operator==(const ThetaFacet& o) const { return lo == o.lo && hi == o.hi; }
};

ThetaFacet facet_of(const SymmetricPair& pair, const ApartmentPoint& x, const Rational& r);
ThetaFacet facet_at(const SymmetricPair& pair, const Rational& t, const Rational& r);

// Nearest parameters strictly above/below t where the facet structure changes.
Rational next_breakpoint(const SymmetricPair& pair, const Rational& t, const Rational& r);
Rational previous_breakpoint(const SymmetricPair& pair, const Rational& t, const Rational& r);

struct Window {
  Rational lo, hi;
};
Window parse_window(const std::string& text);

std::vector<ThetaFacet> enumerate_theta_facets(const SymmetricPair& pair, const Window& w, const Rational& r);

bool strongly_associated(const ThetaFacet& a, const ThetaFacet& b);

// Tab-separated figure data: hyperplanes, fixed line and facets inside the square window.
std::string figure_coords(const SymmetricPair& pair, const Window& w, const Rational& r);

ApartmentPoint parse_point(const std::string& text, std::size_t n);
Rational parse_rational(const std::string& text);

}  // namespace mporbits::apartment
