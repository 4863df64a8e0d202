#include "mporbits/classify.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace mporbits::classify {

using liealg::Matrix;

std::string OrbitLabel::to_string() const {
  std::string cls = square_class ? "(" + square_class->to_string() + ")" : "";
  switch (kind) {
    case Kind::trivial: return "trivial";
    case Kind::regular: return "regular";
    case Kind::rank1: return "rank1" + cls;
    case Kind::upper: return "upper" + cls;
    case Kind::lower: return "lower" + cls;
  }
  return "?";
}

namespace {

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  mpz_class num(q.get_num()), den(q.get_den());
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
  mpz_class a, b;
  mpz_sqrt(a.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(b.get_mpz_t(), den.get_mpz_t());
  return Rational(a, b);
}

std::vector<Rational> eigenvector(const LieMatrix<Rational>& h, long lambda) {
  std::size_t n = h.n();
  linalg::Mat<Rational> a = h.matrix().rows();
  for (std::size_t i = 0; i < n; ++i) a[i][i] -= lambda;
  auto k = linalg::kernel_basis(a, n, Rational(0));
  if (k.size() != 1) throw MathError("Classify", "eigenspace of H is not a line");
  return k[0];
}

Rational form(const std::vector<Rational>& u, const std::vector<Rational>& v) {
  Rational s(0);
  std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) s += u[i] * v[n - 1 - i];
  return s;
}

OrbitLabel classify_rank_one(const SymmetricPair& pair, const LieMatrix<Rational>& X, Prime p) {
  auto t = liealg::complete_sl2(X, liealg::matrices_of(pair.p_basis()));
  auto v1 = eigenvector(t.H, 1), v0 = eigenvector(t.H, 0), vm = eigenvector(t.H, -1);
  Rational pairing = form(v1, vm);
  if (pairing == 0) throw MathError("Classify", "weight vectors are orthogonal");
  for (auto& c : vm) c /= pairing;
  auto root = rational_sqrt(form(v0, v0));
  if (!root || *root == 0) throw MathError("Classify", "zero-weight vector has non-square length");
  for (auto& c : v0) c /= *root;
  Matrix<Rational> P(3, Rational(0));
  for (std::size_t i = 0; i < 3; ++i) {
    P(i, 0) = v1[i];
    P(i, 1) = v0[i];
    P(i, 2) = vm[i];
  }
  auto P_inv = liealg::inverse(P);
  if (!P_inv) throw MathError("Classify", "singular change of basis");
  if (!liealg::in_group_h(pair, P)) {
    P = P.scaled(Rational(-1));
    P_inv = P_inv->scaled(Rational(-1));
  }
  if (!liealg::in_group_h(pair, P)) throw MathError("Classify", "change of basis is not in H");
  auto Z = liealg::adjoint(*P_inv, P, X);
  Rational w = Z(0, 2);
  if (w == 0 || Z != liealg::elementary(3, 0, 2, w)) throw MathError("Classify", "conjugate is not a multiple of E13");
  return {OrbitLabel::Kind::rank1, arith::square_class_qp(w, p)};
}

}  // namespace

OrbitLabel classify_nilpotent(const SymmetricPair& pair, const LieMatrix<Rational>& X, Prime p) {
  arith::require_odd_prime(p);
  if (X.n() != pair.n()) throw std::invalid_argument("classify_nilpotent: matrix size does not match the pair");
  if (!liealg::in_p(X)) throw std::invalid_argument("classify_nilpotent: element is not in p");
  if (!liealg::is_nilpotent(X)) throw MathError("NotNilpotent", "classify_nilpotent: element is not nilpotent");
  if (X.is_zero()) return {OrbitLabel::Kind::trivial, std::nullopt};
  if (pair.kind() == liealg::PairKind::sl2) {
    if (X(0, 1) != 0) return {OrbitLabel::Kind::upper, arith::square_class_qp(X(0, 1), p)};
    return {OrbitLabel::Kind::lower, arith::square_class_qp(X(1, 0), p)};
  }
  if (!liealg::power(X.matrix(), 2).is_zero()) return {OrbitLabel::Kind::regular, std::nullopt};
  return classify_rank_one(pair, X, p);
}

std::vector<CanonicalOrbit> canonical_orbits(const SymmetricPair& pair, Prime p) {
  using T = SquareClassQp::Tag;
  std::size_t n = pair.n();
  std::vector<CanonicalOrbit> out;
  out.push_back({{OrbitLabel::Kind::trivial, std::nullopt}, LieMatrix<Rational>::zero(n, Rational(0))});
  std::vector<SquareClassQp> classes{{T::one}, {T::u}, {T::p}, {T::up}};
  if (pair.kind() == liealg::PairKind::sl3) {
    out.push_back({{OrbitLabel::Kind::regular, std::nullopt},
                   liealg::matrices_of(pair.p_basis())[1]});  // E12 + E23
    for (auto c : classes)
      out.push_back({{OrbitLabel::Kind::rank1, c}, liealg::elementary(3, 0, 2, c.representative(p))});
  } else {
    for (auto c : classes)
      out.push_back({{OrbitLabel::Kind::upper, c}, liealg::elementary(2, 0, 1, c.representative(p))});
    for (auto c : classes)
      out.push_back({{OrbitLabel::Kind::lower, c}, liealg::elementary(2, 1, 0, c.representative(p))});
  }
  return out;
}

OrbitLabel orbit_of_pair(const ResidueSpace& space, const ResidueCoset& e, std::optional<std::uint64_t> seed) {
  if (e == space.zero_coset()) return {OrbitLabel::Kind::trivial, std::nullopt};
  auto group = residue::action_group(space);
  if (!residue::is_degenerate(space, group, e))
    throw MathError("NotDegenerate", "pair " + e.to_string() + " at " + space.facet().label() + " is not degenerate");
  auto candidates = residue::orbit(group, e);
  if (seed) {
    std::mt19937_64 rng(*seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);
  }
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    std::optional<liealg::Sl2Triple<arith::Fp>> triple;
    if (seed) {
      triple = liealg::complete_sl2_random(space.graded(candidates[k]), space.opposite_piece().minus(), *seed + k);
      if (!triple->H.matrix().is_diagonal()) triple.reset();
    }
    if (!triple) triple = residue::complete_in_space(space, candidates[k]);
    if (!triple->H.matrix().is_diagonal()) continue;
    auto lifted = lifting::lift_sl2(space, *triple);
    return classify_nilpotent(space.pair(), lifted.X, space.prime());
  }
  throw MathError("NoToralTriple", "no orbit element of " + e.to_string() + " completes with diagonal h");
}

std::string BijectionReport::status() const {
  if (bijective()) return "bijective";
  std::string s = "failed:";
  if (!constant_on_classes) s += " not-constant";
  if (!injective) s += " not-injective";
  if (!surjective) s += " not-surjective";
  return s;
}

BijectionReport verify_bijection(const SymmetricPair& pair, Prime p, const Rational& r, const Window& window,
                                 std::uint64_t budget) {
  arith::require_odd_prime(p);
  if (r != 0) throw std::invalid_argument("verify_bijection is implemented at depth 0");
  BijectionReport rep{pair.name(), p, r, window, {}, {}, {}, {}, {}};
  std::vector<ResidueSpace> spaces;
  for (const auto& f : apartment::enumerate_theta_facets(pair, window, r)) {
    ResidueSpace space(pair, f, r, p);
    auto group = residue::action_group(space);
    auto orbits = residue::enumerate_orbits(space, group, budget);
    std::size_t idx = rep.facets.size();
    for (auto& o : orbits) {
      if (!o.degenerate) continue;
      bool building = lifting::is_noticed_building(space, o.rep);
      bool rank = residue::is_noticed_rank(space, o.rep);
      o.noticed = building;
      if (building != rank) rep.disagreements.push_back({idx, o.rep, building, rank});
      if (building) rep.noticed.push_back({idx, o.rep, orbit_of_pair(space, o.rep), 0});
    }
    rep.facets.push_back({f, space.dim_plus(), space.dim_minus(), group.closure(budget).size(), std::move(orbits)});
    spaces.push_back(std::move(space));
  }

  std::size_t m = rep.noticed.size();
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      if (find(a) == find(b)) continue;
      const auto& na = rep.noticed[a];
      const auto& nb = rep.noticed[b];
      const auto& sa = spaces[na.facet_index];
      const auto& sb = spaces[nb.facet_index];
      if (residue::pairs_equivalent(sa, na.rep, sb, nb.rep) || residue::pairs_equivalent(sb, nb.rep, sa, na.rep))
        parent[find(b)] = find(a);
    }
  std::map<std::size_t, std::size_t> class_of_root;
  for (std::size_t a = 0; a < m; ++a) {
    std::size_t root = find(a);
    auto [it, fresh] = class_of_root.emplace(root, rep.class_labels.size());
    if (fresh) rep.class_labels.push_back(rep.noticed[a].label);
    rep.noticed[a].class_index = it->second;
    if (rep.class_labels[it->second] != rep.noticed[a].label) rep.constant_on_classes = false;
  }

  for (const auto& c : canonical_orbits(pair, p)) rep.labels.push_back(c.label);
  std::set<OrbitLabel> seen;
  for (const auto& l : rep.class_labels)
    if (!seen.insert(l).second) rep.injective = false;
  for (const auto& l : rep.labels)
    if (!seen.count(l)) rep.surjective = false;
  return rep;
}

nlohmann::json orbit_table_json(const ResidueSpace& space, const std::vector<residue::OrbitInfo>& orbits) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& o : orbits) {
    nlohmann::json row;
    row["rep"] = o.rep.coords;
    row["size"] = o.size;
    row["degenerate"] = o.degenerate;
    row["noticed"] = o.noticed ? nlohmann::json(*o.noticed) : nlohmann::json(nullptr);
    rows.push_back(row);
  }
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& b : space.piece().minus_basis()) {
    long level = b.diagonal ? space.piece().level(0, 0) : space.piece().level(b.support[0].first, b.support[0].second);
    basis.push_back({{"element", b.name}, {"level", level}});
  }
  return {{"pair", space.pair().name()},
          {"facet", space.facet().label()},
          {"p", space.prime()},
          {"r", space.r().get_str()},
          {"basis", basis},
          {"orbits", rows}};
}

nlohmann::json to_json(const BijectionReport& report) {
  nlohmann::json facets = nlohmann::json::array();
  for (const auto& f : report.facets) {
    std::size_t deg = 0, noticed = 0;
    for (const auto& o : f.orbits) {
      deg += o.degenerate;
      noticed += o.noticed.value_or(false);
    }
    facets.push_back({{"facet", f.facet.label()},
                      {"dim", f.facet.dim},
                      {"dim_plus", f.dim_plus},
                      {"dim_minus", f.dim_minus},
                      {"group_order", f.group_order},
                      {"orbits", f.orbits.size()},
                      {"degenerate", deg},
                      {"noticed", noticed}});
  }
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t c = 0; c < report.class_labels.size(); ++c) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& n : report.noticed)
      if (n.class_index == c)
        members.push_back({{"facet", report.facets[n.facet_index].facet.label()}, {"rep", n.rep.coords}});
    classes.push_back({{"class", c}, {"label", report.class_labels[c].to_string()}, {"members", members}});
  }
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& l : report.labels) labels.push_back(l.to_string());
  nlohmann::json matching = nlohmann::json::array();
  for (std::size_t c = 0; c < report.class_labels.size(); ++c)
    matching.push_back(nlohmann::json::array({c, report.class_labels[c].to_string()}));
  nlohmann::json disagreements = nlohmann::json::array();
  for (const auto& d : report.disagreements)
    disagreements.push_back({{"facet", report.facets[d.facet_index].facet.label()},
                             {"rep", d.rep.coords},
                             {"building", d.building},
                             {"rank", d.rank}});
  return {{"pair", report.pair},
          {"p", report.p},
          {"r", report.r.get_str()},
          {"window", report.window.lo.get_str() + ":" + report.window.hi.get_str()},
          {"facets", facets},
          {"noticed_classes", classes},
          {"labels", labels},
          {"matching", matching},
          {"disagreements", disagreements},
          {"checks",
           {{"constant_on_classes", report.constant_on_classes},
            {"injective", report.injective},
            {"surjective", report.surjective}}},
          {"status", report.status()}};
}

}  // namespace mporbits::classify
