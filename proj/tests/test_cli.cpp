#include <doctest.h>

#include <cstdlib>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mporbits");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = mporbits::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines_starting(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);)
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST_CASE("example prints the three residue algebras and the matching") {
  auto r = run({"example"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("|G_F| = 120") != std::string::npos);
  CHECK(r.out.find("noticed 3") != std::string::npos);
  CHECK(r.out.find("noticed 1") != std::string::npos);
  CHECK(r.out.find("noticed 2") != std::string::npos);
  CHECK(r.out.find("( pZ/p^2Z        0     Z/pZ )") != std::string::npos);
  CHECK(count_lines_starting(r.out, "  class ") == 6);
  CHECK(r.out.find("status: bijective") != std::string::npos);
  CHECK(run({"example"}).out == r.out);

  auto j = run({"--format", "json", "example"});
  REQUIRE(j.code == 0);
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["facets"].size() == 3);
}

TEST_CASE("example at p = 7") {
  auto r = run({"--p", "7", "example"});
  CHECK(r.code == 0);
  CHECK(r.out.find("|G_F| = 336") != std::string::npos);
}

TEST_CASE("lattice shapes") {
  auto origin = run({"--format", "text", "lattice"});
  REQUIRE(origin.code == 0);
  CHECK(origin.out.find("( Z/pZ  Z/pZ  Z/pZ )") != std::string::npos);
  auto half = nlohmann::json::parse(run({"--format", "json", "lattice", "--x", "1/2,0,-1/2"}).out);
  CHECK(half["bounds_r"] == nlohmann::json::parse("[[0,0,-1],[1,0,0],[1,1,0]]"));
  CHECK(half["quotient"][2][0] == "pZ/p^2Z");
  CHECK(half["quotient"][0][2] == "p^-1Z/Z");
  auto quarter = nlohmann::json::parse(run({"--format", "json", "lattice", "--x", "1/4,0,-1/4"}).out);
  CHECK(quarter["quotient"] ==
        nlohmann::json::parse(R"([["Z/pZ","0","0"],["0","Z/pZ","0"],["0","0","Z/pZ"]])"));
  auto sl2 = run({"--pair", "sl2", "lattice"});
  CHECK(sl2.code == 0);
}

TEST_CASE("orbits and match") {
  auto o = nlohmann::json::parse(run({"orbits"}).out);
  CHECK(o["noticed"] == 10);
  CHECK(o["degenerate"] == 13);
  CHECK(o["facets"].size() == 5);
  auto half = nlohmann::json::parse(run({"--window", "0:1/2", "orbits"}).out);
  CHECK(half["noticed"] == 6);
  auto m = run({"--p", "7", "match"});
  REQUIRE(m.code == 0);
  auto doc = nlohmann::json::parse(m.out);
  CHECK(doc["status"] == "bijective");
  CHECK(doc["matching"].size() == 6);
  auto sl2 = nlohmann::json::parse(run({"--pair", "sl2", "match"}).out);
  CHECK(sl2["matching"].size() == 9);
  CHECK(run({"--seed", "3", "match"}).out == run({"--seed", "3", "match"}).out);
}

TEST_CASE("figure is tab separated and includes the fixed line") {
  auto f = run({"figure"});
  REQUIRE(f.code == 0);
  CHECK(f.out.rfind("kind\t", 0) == 0);
  CHECK(count_lines_starting(f.out, "fixed-line\t") == 1);
  CHECK(count_lines_starting(f.out, "hyperplane\t") > 0);
  CHECK(run({"--format", "json", "figure"}).code == mporbits::cli::kUsage);
}

TEST_CASE("usage errors") {
  CHECK(run({"--p", "2", "example"}).code == mporbits::cli::kUsage);
  CHECK(run({"--p", "9", "example"}).code == mporbits::cli::kUsage);
  CHECK(run({"lattice", "--x", "1,1"}).code == mporbits::cli::kUsage);
  CHECK(run({"--pair", "so5", "orbits"}).code == mporbits::cli::kUsage);
  CHECK(run({"--window", "1:0", "orbits"}).code == mporbits::cli::kUsage);
  CHECK(run({"--precision", "2", "orbits"}).code == mporbits::cli::kUsage);
  CHECK(run({"--pair", "sl2", "example"}).code == mporbits::cli::kUsage);
  CHECK(run({"bogus"}).code == mporbits::cli::kUsage);
  auto bad = run({"--format", "json", "lattice", "--x", "1/0,0,0"});
  CHECK(bad.code == mporbits::cli::kUsage);
  CHECK(nlohmann::json::parse(bad.out)["error_class"] == "usage");
  auto text = run({"lattice", "--x", "a,0,0", "--format", "text"});
  CHECK(text.code == mporbits::cli::kUsage);
  CHECK(text.err.rfind("error [usage]", 0) == 0);
}

TEST_CASE("budget exhaustion") {
  setenv("MPORBITS_BUDGET", "100", 1);
  auto r = run({"--format", "json", "orbits"});
  unsetenv("MPORBITS_BUDGET");
  CHECK(r.code == mporbits::cli::kBudget);
  CHECK(nlohmann::json::parse(r.out)["error_class"] == "budget");
  setenv("MPORBITS_BUDGET", "lots", 1);
  CHECK(run({"orbits"}).code == mporbits::cli::kUsage);
  unsetenv("MPORBITS_BUDGET");
}
