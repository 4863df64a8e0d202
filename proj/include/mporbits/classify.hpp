#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mporbits/lifting.hpp"

namespace mporbits::classify {

using apartment::ThetaFacet;
using apartment::Window;
using arith::Prime;
using arith::Rational;
using arith::SquareClassQp;
using liealg::LieMatrix;
using liealg::SymmetricPair;
using residue::ResidueCoset;
using residue::ResidueSpace;

struct OrbitLabel {
  enum class Kind { trivial, regular, rank1, upper, lower };
  Kind kind;
  std::optional<SquareClassQp> square_class;

  std::string to_string() const;
  auto operator<=>(const OrbitLabel&) const = default;
};

// H(Q_p)-orbit of a nilpotent X in p.
OrbitLabel classify_nilpotent(const SymmetricPair& pair, const LieMatrix<Rational>& X, Prime p);

// Labels of the nilpotent H-orbits with a representative each.
struct CanonicalOrbit {
  OrbitLabel label;
  LieMatrix<Rational> rep;
};
std::vector<CanonicalOrbit> canonical_orbits(const SymmetricPair& pair, Prime p);

// Lifts a degenerate pair and labels the resulting orbit. With a seed, the orbit
// element and the completion are drawn at random instead of lexicographically.
OrbitLabel orbit_of_pair(const ResidueSpace& space, const ResidueCoset& e, std::optional<std::uint64_t> seed = {});

struct NoticedPair {
  std::size_t facet_index;
  ResidueCoset rep;
  OrbitLabel label;
  std::size_t class_index;
};

struct FacetSummary {
  ThetaFacet facet;
  std::size_t dim_plus, dim_minus;
  std::size_t group_order;
  std::vector<residue::OrbitInfo> orbits;
};

struct Disagreement {
  std::size_t facet_index;
  ResidueCoset rep;
  bool building, rank;
};

struct BijectionReport {
  std::string pair;
  Prime p;
  Rational r;
  Window window;
  std::vector<FacetSummary> facets;
  std::vector<NoticedPair> noticed;
  std::vector<OrbitLabel> class_labels;  // one per equivalence class of noticed pairs
  std::vector<OrbitLabel> labels;        // canonical labels of nilpotent H-orbits
  std::vector<Disagreement> disagreements;
  bool constant_on_classes = true;
  bool injective = true;
  bool surjective = true;

  bool bijective() const { return constant_on_classes && injective && surjective; }
  std::string status() const;
};

BijectionReport verify_bijection(const SymmetricPair& pair, Prime p, const Rational& r, const Window& window,
                                 std::uint64_t budget = residue::kDefaultBudget);

nlohmann::json orbit_table_json(const ResidueSpace& space, const std::vector<residue::OrbitInfo>& orbits);
nlohmann::json to_json(const BijectionReport& report);

}  // namespace mporbits::classify
