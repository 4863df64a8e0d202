#include "mporbits/apartment.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace mporbits::apartment {

ApartmentPoint::ApartmentPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("apartment point needs coordinates");
  Rational sum(0);
  for (auto& c : coords_) {
    c.canonicalize();
    sum += c;
  }
  if (sum != 0) throw std::invalid_argument("apartment point coordinates must sum to zero");
}

std::string ApartmentPoint::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) s += (i ? "," : "") + coords_[i].get_str();
  return s + ")";
}

ApartmentPoint theta_on_point(const ApartmentPoint& x) {
  std::vector<Rational> c(x.n());
  for (std::size_t i = 0; i < x.n(); ++i) c[i] = -x[x.n() - 1 - i];
  return ApartmentPoint(std::move(c));
}

ApartmentPoint point_on_line(const SymmetricPair& pair, const Rational& t) {
  auto v = pair.fixed_direction();
  std::vector<Rational> c;
  for (int k : v) c.push_back(Rational(t * k));
  return ApartmentPoint(std::move(c));
}

std::optional<Rational> line_parameter(const SymmetricPair& pair, const ApartmentPoint& x) {
  if (x.n() != pair.n()) return std::nullopt;
  Rational t = x[0] / pair.fixed_direction()[0];
  if (!(point_on_line(pair, t) == x)) return std::nullopt;
  return t;
}

std::string AffineRoot::to_string() const {
  std::string s = "x" + std::to_string(i + 1) + "-x" + std::to_string(j + 1);
  if (m > 0) s += "+" + std::to_string(m);
  if (m < 0) s += std::to_string(m);
  return s;
}

Rational floor_q(const Rational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

Rational ceil_q(const Rational& q) {
  mpz_class f;
  mpz_cdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

long to_long(const Rational& integral) {
  if (integral.get_den() != 1) throw std::logic_error("to_long of non-integer " + integral.get_str());
  if (!integral.get_num().fits_slong_p()) throw std::overflow_error("integer too large");
  return integral.get_num().get_si();
}

LatticeBounds::LatticeBounds(const ApartmentPoint& x, const Rational& r, bool strict)
    : n_(x.n()), depth_(r), strict_(strict), bound_(n_ * n_) {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      Rational need = i == j ? r : Rational(r - x.alpha(i, j));
      bound_[i * n_ + j] = to_long(strict ? Rational(floor_q(need) + 1) : ceil_q(need));
    }
}

bool LatticeBounds::contains(const liealg::LieMatrix<Rational>& x, Prime p) const {
  if (x.n() != n_) throw std::invalid_argument("lattice membership: size mismatch");
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      auto v = arith::val_p(x(i, j), p);
      if (!v.is_infinite() && v.value() < at(i, j)) return false;
    }
  return true;
}

LatticeBounds mp_lattice(const ApartmentPoint& x, const Rational& r, bool strict) { return LatticeBounds(x, r, strict); }

std::optional<Rational> depth_of(const liealg::LieMatrix<Rational>& x, const ApartmentPoint& y, Prime p) {
  std::optional<Rational> best;
  for (std::size_t i = 0; i < x.n(); ++i)
    for (std::size_t j = 0; j < x.n(); ++j) {
      auto v = arith::val_p(x(i, j), p);
      if (v.is_infinite()) continue;
      Rational d = Rational(v.value()) + (i == j ? Rational(0) : y.alpha(i, j));
      if (!best || d < *best) best = d;
    }
  return best;
}

namespace {

// Slopes of the roots x_i - x_j restricted to the fixed line.
std::vector<long> line_slopes(const SymmetricPair& pair) {
  auto v = pair.fixed_direction();
  std::vector<long> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (i != j && v[i] != v[j]) out.push_back(v[i] - v[j]);
  return out;
}

bool is_breakpoint(const SymmetricPair& pair, const Rational& t, const Rational& r) {
  for (long c : line_slopes(pair)) {
    Rational s = t * c - r;
    if (s.get_den() == 1) return true;
  }
  return false;
}

}  // namespace

Rational next_breakpoint(const SymmetricPair& pair, const Rational& t, const Rational& r) {
  std::optional<Rational> best;
  for (long c : line_slopes(pair)) {
    // Smallest (r + k) / c above t.
    Rational s = t * c - r;
    Rational k = c > 0 ? Rational(floor_q(s) + 1) : Rational(ceil_q(s) - 1);
    Rational cand = (r + k) / c;
    if (!best || cand < *best) best = cand;
  }
  return *best;
}

Rational previous_breakpoint(const SymmetricPair& pair, const Rational& t, const Rational& r) {
  std::optional<Rational> best;
  for (long c : line_slopes(pair)) {
    Rational s = t * c - r;
    Rational k = c > 0 ? Rational(ceil_q(s) - 1) : Rational(floor_q(s) + 1);
    Rational cand = (r + k) / c;
    if (!best || cand > *best) best = cand;
  }
  return *best;
}

Rational ThetaFacet::witness_t() const { return dim == 0 ? lo : Rational((lo + hi) / 2); }

std::string ThetaFacet::label() const {
  if (dim == 0) return "t=" + lo.get_str();
  return lo.get_str() + "<t<" + hi.get_str();
}

ThetaFacet facet_at(const SymmetricPair& pair, const Rational& t, const Rational& r) {
  ThetaFacet f{t, t, 0, point_on_line(pair, t), {}, true};
  if (!is_breakpoint(pair, t, r)) {
    f.dim = 1;
    f.lo = previous_breakpoint(pair, t, r);
    f.hi = next_breakpoint(pair, t, r);
    f.witness = point_on_line(pair, Rational((f.lo + f.hi) / 2));
    return f;
  }
  const auto& x = f.witness;
  for (std::size_t i = 0; i < x.n(); ++i)
    for (std::size_t j = 0; j < x.n(); ++j) {
      if (i == j) continue;
      Rational m = r - x.alpha(i, j);
      if (m.get_den() == 1) f.active.push_back({i, j, to_long(m)});
    }
  return f;
}

ThetaFacet facet_of(const SymmetricPair& pair, const ApartmentPoint& x, const Rational& r) {
  auto t = line_parameter(pair, x);
  if (!t) throw std::invalid_argument("point " + x.to_string() + " is not on the theta-fixed line");
  return facet_at(pair, *t, r);
}

Rational parse_rational(const std::string& text) {
  std::size_t i = 0;
  auto digits = [&](std::size_t from) {
    std::size_t k = from;
    while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
    return k;
  };
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  std::size_t end = digits(i);
  if (end == i) throw std::invalid_argument("expected digits at offset " + std::to_string(i) + " in '" + text + "'");
  std::string num = text.substr(0, end);
  if (num[0] == '+') num.erase(0, 1);
  std::string den = "1";
  if (end < text.size()) {
    if (text[end] != '/') throw std::invalid_argument("unexpected '" + std::string(1, text[end]) + "' at offset " + std::to_string(end) + " in '" + text + "'");
    std::size_t dend = digits(end + 1);
    if (dend == end + 1 || dend != text.size())
      throw std::invalid_argument("bad denominator at offset " + std::to_string(end + 1) + " in '" + text + "'");
    den = text.substr(end + 1);
  }
  mpz_class d(den);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  Rational q(mpz_class(num), d);
  q.canonicalize();
  return q;
}

ApartmentPoint parse_point(const std::string& text, std::size_t n) {
  std::vector<Rational> coords;
  std::size_t start = 0;
  for (std::size_t k = 0;; ++k) {
    std::size_t comma = text.find(',', start);
    std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      coords.push_back(parse_rational(part));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("point component " + std::to_string(k + 1) + " (offset " + std::to_string(start) +
                                  "): " + e.what());
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (coords.size() != n)
    throw std::invalid_argument("point has " + std::to_string(coords.size()) + " components, expected " +
                                std::to_string(n));
  return ApartmentPoint(std::move(coords));
}

Window parse_window(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("window must look like lo:hi, got '" + text + "'");
  return {parse_rational(text.substr(0, colon)), parse_rational(text.substr(colon + 1))};
}

std::vector<ThetaFacet> enumerate_theta_facets(const SymmetricPair& pair, const Window& w, const Rational& r) {
  std::vector<ThetaFacet> out;
  if (w.lo > w.hi) return out;
  ThetaFacet f = facet_at(pair, w.lo, r);
  while (true) {
    out.push_back(f);
    Rational next_t = f.dim == 0 ? Rational((f.lo + next_breakpoint(pair, f.lo, r)) / 2) : f.hi;
    if (f.dim == 0 ? !(f.lo < w.hi) : !(f.hi <= w.hi)) break;
    f = facet_at(pair, next_t, r);
  }
  return out;
}

bool strongly_associated(const ThetaFacet& a, const ThetaFacet& b) {
  if (a.dim != b.dim) return false;
  if (a.dim == 1) return true;  // both span the fixed line
  return a.lo == b.lo;
}

namespace {

using Segment = std::array<Rational, 4>;

std::string fmt(const Rational& q) { return arith::to_string(q); }

// Part of {a x + b y = c} inside [lo, hi]^2, as an ordered segment of positive length.
std::optional<Segment> clip_line(const Rational& a, const Rational& b, const Rational& c, const Rational& lo,
                                 const Rational& hi) {
  if (b == 0) {
    Rational x = c / a;
    if (x < lo || x > hi) return std::nullopt;
    return Segment{x, lo, x, hi};
  }
  // y = (c - a s) / b for s in [lo, hi]; keep lo <= y <= hi.
  Rational s0 = lo, s1 = hi;
  if (a != 0) {
    Rational ya = (c - b * lo) / a, yb = (c - b * hi) / a;
    Rational lo_s = std::min(ya, yb), hi_s = std::max(ya, yb);
    s0 = std::max(s0, lo_s);
    s1 = std::min(s1, hi_s);
  } else {
    Rational y = c / b;
    if (y < lo || y > hi) return std::nullopt;
  }
  if (!(s0 < s1)) return std::nullopt;
  return Segment{s0, Rational((c - a * s0) / b), s1, Rational((c - a * s1) / b)};
}

}  // namespace

std::string figure_coords(const SymmetricPair& pair, const Window& w, const Rational& r) {
  std::ostringstream os;
  bool plane = pair.n() == 3;
  os << (plane ? "kind\tx1_start\tx2_start\tx1_end\tx2_end\n" : "kind\tx1_start\tx1_end\n");
  if (w.lo > w.hi) return os.str();

  Rational bound = std::max(Rational(abs(w.lo)), Rational(abs(w.hi)));
  long reach = to_long(ceil_q(Rational(bound * 4))) + 1;
  long r_floor = to_long(floor_q(r));

  // Chart coefficients of x_k in terms of the first n - 1 coordinates.
  auto chart = [&](std::size_t k) -> std::pair<Rational, Rational> {
    if (!plane) return {k == 0 ? Rational(1) : Rational(-1), Rational(0)};
    if (k == 0) return {1, 0};
    if (k == 1) return {0, 1};
    return {-1, -1};
  };
  std::set<std::tuple<Rational, Rational, Rational>> lines;
  for (std::size_t i = 0; i < pair.n(); ++i)
    for (std::size_t j = 0; j < pair.n(); ++j) {
      if (i == j) continue;
      auto [ai, bi] = chart(i);
      auto [aj, bj] = chart(j);
      Rational a = ai - aj, b = bi - bj;
      for (long m = r_floor - reach - 1; m <= r_floor + reach + 1; ++m) {
        Rational c = r - m, sa = a, sb = b;
        if (sa < 0 || (sa == 0 && sb < 0)) {
          sa = -sa;
          sb = -sb;
          c = -c;
        }
        lines.insert({sa, sb, c});
      }
    }
  for (const auto& [a, b, c] : lines) {
    if (plane) {
      auto seg = clip_line(a, b, c, w.lo, w.hi);
      if (seg) os << "hyperplane\t" << fmt((*seg)[0]) << "\t" << fmt((*seg)[1]) << "\t" << fmt((*seg)[2]) << "\t"
                  << fmt((*seg)[3]) << "\n";
    } else {
      Rational x = c / a;
      if (x >= w.lo && x <= w.hi) os << "hyperplane\t" << fmt(x) << "\t" << fmt(x) << "\n";
    }
  }

  bool line_visible = !plane || (w.lo <= 0 && 0 <= w.hi);
  if (!line_visible) return os.str();
  Rational zero(0);
  if (plane)
    os << "fixed-line\t" << fmt(w.lo) << "\t" << fmt(zero) << "\t" << fmt(w.hi) << "\t" << fmt(zero) << "\n";
  else
    os << "fixed-line\t" << fmt(w.lo) << "\t" << fmt(w.hi) << "\n";
  for (const auto& f : enumerate_theta_facets(pair, w, r)) {
    Rational a = std::max(f.lo, w.lo), b = std::min(f.hi, w.hi);
    const char* kind = f.dim == 0 ? "facet-vertex" : "facet-edge";
    if (plane)
      os << kind << "\t" << fmt(a) << "\t" << fmt(zero) << "\t" << fmt(b) << "\t" << fmt(zero) << "\n";
    else
      os << kind << "\t" << fmt(a) << "\t" << fmt(b) << "\n";
  }
  return os.str();
}

}  // namespace mporbits::apartment
