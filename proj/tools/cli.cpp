#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "mporbits/classify.hpp"
#include "mporbits/errors.hpp"

namespace mporbits::cli {
namespace {

using apartment::ApartmentPoint;
using apartment::LatticeBounds;
using apartment::Window;
using arith::Prime;
using arith::Rational;
using liealg::SymmetricPair;
using nlohmann::json;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string pair = "sl3";
  unsigned long p = 5;
  std::string r = "0";
  unsigned precision = 20;
  std::string window;
  std::uint64_t seed = 0;
  std::string format;
  std::string x;
};

struct Resolved {
  SymmetricPair pair;
  Prime p;
  Rational r;
  Window window;
  std::string format;
  std::uint64_t budget;
};

std::uint64_t budget_from_env() {
  const char* env = std::getenv("MPORBITS_BUDGET");
  if (!env || !*env) return residue::kDefaultBudget;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (*end || v == 0) throw UsageError(std::string("MPORBITS_BUDGET is not a positive integer: ") + env);
  return v;
}

Resolved resolve(const RunConfig& c, const std::string& default_format, const std::vector<std::string>& formats,
                 const std::string& default_window) {
  if (c.pair != "sl3" && c.pair != "sl2") throw UsageError("--pair must be sl3 or sl2, got " + c.pair);
  if (c.p > 0xffffffffUL) throw UsageError("--p is too large");
  Prime p = static_cast<Prime>(c.p);
  arith::require_odd_prime(p);
  if (c.precision < 4) throw UsageError("--precision must be at least 4");
  std::string format = c.format.empty() ? default_format : c.format;
  if (std::find(formats.begin(), formats.end(), format) == formats.end())
    throw UsageError("format " + format + " is not available for this command");
  Window w = apartment::parse_window(c.window.empty() ? default_window : c.window);
  if (!(w.lo < w.hi)) throw UsageError("window must be nonempty");
  return {SymmetricPair::from_name(c.pair), p, apartment::parse_rational(c.r), w, format, budget_from_env()};
}

std::string power(long k) {
  if (k == 0) return "";
  if (k == 1) return "p";
  return "p^" + std::to_string(k);
}

// Quotient of the (i,j) entries between depth r and r+, e.g. "p^-1Z/Z".
std::string quotient_cell(long lax, long strict) {
  if (lax == strict) return "0";
  return power(lax) + "Z/" + power(strict) + "Z";
}

std::vector<std::vector<std::string>> quotient_grid(const LatticeBounds& lax, const LatticeBounds& strict) {
  std::vector<std::vector<std::string>> grid(lax.n(), std::vector<std::string>(lax.n()));
  for (std::size_t i = 0; i < lax.n(); ++i)
    for (std::size_t j = 0; j < lax.n(); ++j) grid[i][j] = quotient_cell(lax.at(i, j), strict.at(i, j));
  return grid;
}

json bounds_json(const LatticeBounds& b) {
  json rows = json::array();
  for (std::size_t i = 0; i < b.n(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < b.n(); ++j) row.push_back(b.at(i, j));
    rows.push_back(row);
  }
  return rows;
}

void print_grid(std::ostream& out, const std::vector<std::vector<std::string>>& grid, const std::string& indent) {
  std::size_t width = 0;
  for (const auto& row : grid)
    for (const auto& cell : row) width = std::max(width, cell.size());
  for (const auto& row : grid) {
    out << indent << "(";
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "  " : " ") << std::setw(static_cast<int>(width)) << row[j];
    out << " )\n";
  }
}

void print_bounds(std::ostream& out, const LatticeBounds& b, const std::string& indent) {
  std::vector<std::vector<std::string>> grid(b.n(), std::vector<std::string>(b.n()));
  for (std::size_t i = 0; i < b.n(); ++i)
    for (std::size_t j = 0; j < b.n(); ++j) grid[i][j] = std::to_string(b.at(i, j));
  print_grid(out, grid, indent);
}

std::string basis_line(const residue::GradedPiece& piece, const std::vector<liealg::BasisElement>& basis) {
  if (basis.empty()) return "0";
  std::string s;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto& b = basis[k];
    long level = b.diagonal ? 0 : piece.level(b.support[0].first, b.support[0].second);
    s += (k ? ", " : "") + (level ? power(level) + "*" : std::string()) + b.name;
  }
  return s;
}

std::size_t count_noticed(const classify::FacetSummary& f) {
  std::size_t n = 0;
  for (const auto& o : f.orbits) n += o.noticed.value_or(false);
  return n;
}

std::size_t count_degenerate(const classify::FacetSummary& f) {
  std::size_t n = 0;
  for (const auto& o : f.orbits) n += o.degenerate;
  return n;
}

void print_matching(std::ostream& out, const classify::BijectionReport& rep) {
  out << "matching (" << rep.class_labels.size() << " noticed classes, " << rep.labels.size() << " orbits):\n";
  for (std::size_t c = 0; c < rep.class_labels.size(); ++c) {
    out << "  class " << c << "  " << std::left << std::setw(12) << rep.class_labels[c].to_string() << std::right;
    bool first = true;
    for (const auto& n : rep.noticed)
      if (n.class_index == c) {
        out << (first ? "  " : "; ") << rep.facets[n.facet_index].facet.label() << " " << n.rep.to_string();
        first = false;
      }
    out << "\n";
  }
  for (const auto& d : rep.disagreements)
    out << "  flagged: " << rep.facets[d.facet_index].facet.label() << " " << d.rep.to_string()
        << " building=" << d.building << " rank=" << d.rank << "\n";
  out << "status: " << rep.status() << "\n";
}

int cmd_lattice(const RunConfig& c, std::ostream& out) {
  auto cfg = resolve(c, "text", {"text", "json"}, "0:1");
  ApartmentPoint x = c.x.empty() ? apartment::point_on_line(cfg.pair, 0) : apartment::parse_point(c.x, cfg.pair.n());
  LatticeBounds lax(x, cfg.r, false), strict(x, cfg.r, true);
  auto grid = quotient_grid(lax, strict);
  if (cfg.format == "json") {
    auto t = apartment::line_parameter(cfg.pair, x);
    out << json{{"pair", cfg.pair.name()},
                {"x", x.to_string()},
                {"t", t ? json(t->get_str()) : json(nullptr)},
                {"r", cfg.r.get_str()},
                {"bounds_r", bounds_json(lax)},
                {"bounds_r_plus", bounds_json(strict)},
                {"quotient", grid}}
               .dump(2)
        << "\n";
    return kOk;
  }
  out << "x = " << x.to_string() << ", r = " << cfg.r.get_str() << "\n";
  out << "valuation bounds at r:\n";
  print_bounds(out, lax, "  ");
  out << "valuation bounds at r+:\n";
  print_bounds(out, strict, "  ");
  out << "quotient g_{x,r}/g_{x,r+}:\n";
  print_grid(out, grid, "  ");
  return kOk;
}

int cmd_orbits(const RunConfig& c, std::ostream& out) {
  auto cfg = resolve(c, "json", {"text", "json"}, "0:1");
  json tables = json::array();
  std::size_t degenerate = 0, noticed = 0;
  std::ostringstream text;
  for (const auto& f : apartment::enumerate_theta_facets(cfg.pair, cfg.window, cfg.r)) {
    residue::ResidueSpace space(cfg.pair, f, cfg.r, cfg.p);
    auto group = residue::action_group(space);
    auto orbits = residue::enumerate_orbits(space, group, cfg.budget);
    for (auto& o : orbits) {
      if (!o.degenerate) continue;
      ++degenerate;
      if (cfg.r == 0) {
        o.noticed = lifting::is_noticed_building(space, o.rep);
        noticed += *o.noticed;
      }
    }
    tables.push_back(classify::orbit_table_json(space, orbits));
    text << "facet " << f.label() << "  x = " << f.witness.to_string() << "  dim V+ = " << space.dim_plus()
         << "  dim V- = " << space.dim_minus() << "  |G| = " << group.closure(cfg.budget).size() << "\n";
    text << "  p-part basis: " << basis_line(space.piece(), space.piece().minus_basis()) << "\n";
    for (const auto& o : orbits) {
      text << "  " << std::left << std::setw(16) << o.rep.to_string() << std::right << " size " << std::setw(6)
           << o.size << (o.degenerate ? "  degenerate" : "");
      if (o.noticed && *o.noticed) text << "  noticed";
      text << "\n";
    }
  }
  if (cfg.format == "json") {
    out << json{{"pair", cfg.pair.name()},
                {"p", cfg.p},
                {"r", cfg.r.get_str()},
                {"window", cfg.window.lo.get_str() + ":" + cfg.window.hi.get_str()},
                {"degenerate", degenerate},
                {"noticed", cfg.r == 0 ? json(noticed) : json(nullptr)},
                {"facets", tables}}
               .dump(2)
        << "\n";
  } else {
    out << text.str() << "degenerate orbits: " << degenerate << "\n";
    if (cfg.r == 0) out << "noticed orbits: " << noticed << "\n";
  }
  return kOk;
}

int cmd_match(const RunConfig& c, std::ostream& out) {
  auto cfg = resolve(c, "json", {"text", "json"}, "0:1");
  auto rep = classify::verify_bijection(cfg.pair, cfg.p, cfg.r, cfg.window, cfg.budget);
  if (cfg.format == "json")
    out << classify::to_json(rep).dump(2) << "\n";
  else
    print_matching(out, rep);
  return rep.bijective() ? kOk : kAssertion;
}

int cmd_figure(const RunConfig& c, std::ostream& out) {
  auto cfg = resolve(c, "tsv", {"tsv"}, "0:1");
  out << apartment::figure_coords(cfg.pair, cfg.window, cfg.r);
  return kOk;
}

int cmd_example(const RunConfig& c, std::ostream& out) {
  auto cfg = resolve(c, "text", {"text", "json"}, "0:1/2");
  if (cfg.pair.name() != "sl3") throw UsageError("example is the sl3 case");
  if (cfg.r != 0) throw UsageError("example runs at r = 0");
  const std::vector<std::size_t> expected{3, 1, 2};

  auto rep = classify::verify_bijection(cfg.pair, cfg.p, cfg.r, cfg.window, cfg.budget);
  std::vector<std::size_t> counts;
  for (const auto& f : rep.facets) counts.push_back(count_noticed(f));
  bool ok = counts == expected && rep.bijective() && rep.class_labels.size() == 6;

  if (cfg.format == "json") {
    json facets = json::array();
    for (std::size_t k = 0; k < rep.facets.size(); ++k) {
      const auto& f = rep.facets[k];
      residue::ResidueSpace space(cfg.pair, f.facet, cfg.r, cfg.p);
      json noticed = json::array();
      for (const auto& n : rep.noticed)
        if (n.facet_index == k) noticed.push_back({{"rep", n.rep.coords}, {"label", n.label.to_string()}});
      facets.push_back({{"facet", f.facet.label()},
                        {"x", f.facet.witness.to_string()},
                        {"quotient", quotient_grid(space.piece().lax(), space.piece().strict())},
                        {"plus", basis_line(space.piece(), space.piece().plus_basis())},
                        {"minus", basis_line(space.piece(), space.piece().minus_basis())},
                        {"group_order", f.group_order},
                        {"orbits", f.orbits.size()},
                        {"degenerate", count_degenerate(f)},
                        {"noticed", noticed}});
    }
    json report = classify::to_json(rep);
    out << json{{"pair", cfg.pair.name()},
                {"p", cfg.p},
                {"nonresidue", arith::smallest_nonresidue(cfg.p)},
                {"facets", facets},
                {"noticed_counts", counts},
                {"matching", report["matching"]},
                {"status", ok ? "ok" : "mismatch"}}
               .dump(2)
        << "\n";
    return ok ? kOk : kAssertion;
  }

  out << "sl3 with theta(g) = J g^-t J, p = " << cfg.p << ", u = " << arith::smallest_nonresidue(cfg.p)
      << ", r = 0\n\n";
  for (std::size_t k = 0; k < rep.facets.size(); ++k) {
    const auto& f = rep.facets[k];
    residue::ResidueSpace space(cfg.pair, f.facet, cfg.r, cfg.p);
    out << "F" << k + 1 << ": " << f.facet.label() << ", x = " << f.facet.witness.to_string() << "\n";
    out << "  V_F =\n";
    print_grid(out, quotient_grid(space.piece().lax(), space.piece().strict()), "    ");
    out << "  V_F+ : " << basis_line(space.piece(), space.piece().plus_basis()) << "\n";
    out << "  V_F- : " << basis_line(space.piece(), space.piece().minus_basis()) << "\n";
    out << "  |G_F| = " << f.group_order << ", orbits " << f.orbits.size() << ", degenerate " << count_degenerate(f)
        << ", noticed " << counts[k] << "\n";
    for (const auto& n : rep.noticed)
      if (n.facet_index == k) out << "    " << std::left << std::setw(16) << n.rep.to_string() << std::right << " -> "
                                  << n.label.to_string() << "\n";
    out << "\n";
  }
  print_matching(out, rep);
  if (!ok) out << "mismatch: expected noticed counts 3/1/2 and six matched orbits\n";
  return ok ? kOk : kAssertion;
}

void report_error(std::ostream& out, std::ostream& err, bool as_json, const std::string& cls,
                  const std::string& message) {
  if (as_json)
    out << json{{"error_class", cls}, {"message", message}}.dump(2) << "\n";
  else
    err << "error [" << cls << "]: " << message << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Nilpotent orbits of symmetric pairs via residue spaces of the building"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--pair", c.pair, "sl3 or sl2")->capture_default_str();
  app.add_option("--p", c.p, "odd prime")->capture_default_str();
  app.add_option("--r", c.r, "depth, a rational")->capture_default_str();
  app.add_option("--precision", c.precision, "p-adic digits, at least 4")->capture_default_str();
  app.add_option("--window", c.window, "parameter interval lo:hi on the fixed line");
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--format", c.format, "json, text or tsv");
  auto* example = app.add_subcommand("example", "residue algebras, noticed orbits and matching for sl3 at r = 0");
  auto* lattice = app.add_subcommand("lattice", "entry bounds of g_{x,r} and g_{x,r+}");
  lattice->add_option("--x", c.x, "apartment point, comma separated rationals summing to zero; default origin");
  auto* orbits = app.add_subcommand("orbits", "orbit tables of the residue spaces in the window");
  auto* match = app.add_subcommand("match", "noticed classes against nilpotent orbit labels");
  auto* figure = app.add_subcommand("figure", "TSV coordinates of the apartment picture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  bool as_json = c.format == "json";
  try {
    if (*example) return cmd_example(c, out);
    if (*lattice) return cmd_lattice(c, out);
    if (*orbits) return cmd_orbits(c, out);
    if (*match) return cmd_match(c, out);
    if (*figure) return cmd_figure(c, out);
  } catch (const MathError& e) {
    report_error(out, err, as_json, "math:" + e.kind(), e.what());
    return kAssertion;
  } catch (const BudgetExceeded& e) {
    report_error(out, err, as_json, "budget", e.what());
    return kBudget;
  } catch (const std::invalid_argument& e) {
    report_error(out, err, as_json, "usage", e.what());
    return kUsage;
  }
  return kUsage;
}

}  // namespace mporbits::cli
