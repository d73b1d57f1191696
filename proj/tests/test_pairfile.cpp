#include "pairfile.hpp"

#include <string>

#include "doctest.h"
#include "logcdr/errors.hpp"

using namespace logcdr;
using namespace logcdr::cli;

namespace {

constexpr const char* kLinePair =
    "# the line with two marked points\n"
    "[ring]\n"
    "generators = h\n"
    "degrees = 1\n"
    "integrals = h^1 -> 1\n"
    "\n"
    "[pair]\n"
    "dimension = 1\n"
    "cotangent_roots = -2*h\n"
    "divisor_classes = -h, -h\n";

std::pair<int, int> fails_at(const std::string& text) {
  try {
    IniFile f = parse_ini(text);
    pair_from_ini(f, ring_from_ini(f), "x");
  } catch (const ConfigError& e) {
    return {e.line, e.col};
  }
  return {-1, -1};
}

}  // namespace

TEST_CASE("a minimal pair file loads") {
  IniFile f = parse_ini(kLinePair);
  chow::RingSpecPtr ring = ring_from_ini(f);
  CHECK(ring->dimension() == 1);
  REQUIRE(ring->generators().size() == 1);
  CHECK(ring->generators()[0].name == "h");

  genus::PairData p = pair_from_ini(f, ring, "p1_toric");
  CHECK(p.name == "p1_toric");
  CHECK(p.dimension == 1);
  CHECK(p.cotangent_roots.size() == 1);
  CHECK(p.cotangent_neg_roots.empty());
  CHECK(p.divisor_count() == 2);
  genus::RElt h = genus::RElt::generator(ring, "h");
  CHECK(p.cotangent_roots[0] == -(h + h));
  CHECK(p.divisor_classes[0] == -h);
}

TEST_CASE("rules, multi-generator rings and rational coefficients parse") {
  const char* text =
      "[ring]\n"
      "generators = a, b\n"
      "degrees = 1, 1\n"
      "rules = a^2 -> 0, b^2 -> 0\n"
      "integrals = a*b -> 1\n"
      "[pair]\n"
      "dimension = 2\n"
      "cotangent_roots = -2*a, -1/2*b - 3/2*b\n"
      "divisor_classes = -a, -a, -b, -b\n";
  IniFile f = parse_ini(text);
  chow::RingSpecPtr ring = ring_from_ini(f);
  CHECK(ring->dimension() == 2);
  genus::RElt a = genus::RElt::generator(ring, "a");
  genus::RElt b = genus::RElt::generator(ring, "b");
  CHECK((a * a).is_zero());
  CHECK(!(a * b).is_zero());
  genus::PairData p = pair_from_ini(f, ring, "quadric");
  CHECK(p.cotangent_roots[1] == -(b + b));
  CHECK(p.divisor_count() == 4);
}

TEST_CASE("virtual cotangent presentations use negative roots") {
  const char* text =
      "[ring]\n"
      "generators = h\n"
      "degrees = 1\n"
      "integrals = h^2 -> 1\n"
      "[pair]\n"
      "dimension = 2\n"
      "cotangent_roots = -h, -h, -h\n"
      "cotangent_neg_roots = 0\n"
      "divisor_classes = -h, -h, -h\n";
  IniFile f = parse_ini(text);
  genus::PairData p = pair_from_ini(f, ring_from_ini(f), "p2");
  CHECK(p.cotangent_roots.size() == 3);
  REQUIRE(p.cotangent_neg_roots.size() == 1);
  CHECK(p.cotangent_neg_roots[0].is_zero());
}

TEST_CASE("ini structure diagnostics carry positions") {
  CHECK(fails_at("[ring\n") == std::pair<int, int>{1, 1});
  CHECK(fails_at("x = 1\n") == std::pair<int, int>{1, 1});
  CHECK(fails_at("[a]\nkey\n") == std::pair<int, int>{2, 1});
  CHECK(fails_at("[a]\nk = 1\nk = 2\n") == std::pair<int, int>{3, 1});
  CHECK(fails_at("[a]\n[a]\n") == std::pair<int, int>{2, 1});
  /* missing [ring] reports the file head */
  CHECK(fails_at("[pair]\ndimension = 1\n") == std::pair<int, int>{1, 1});
}

TEST_CASE("ring content diagnostics carry positions") {
  /* degrees shorter than generators: flagged on the generators value */
  CHECK(fails_at("[ring]\ngenerators = a, b\ndegrees = 1\n"
                 "integrals = a -> 1\n") == std::pair<int, int>{2, 14});
  /* unknown generator inside a rule combo */
  auto [l, c] = fails_at(
      "[ring]\ngenerators = h\ndegrees = 1\n"
      "rules = h^2 -> 2*q\nintegrals = h -> 1\n");
  CHECK(l == 4);
  CHECK(c == 18);
  /* missing integrals key names the section */
  CHECK(fails_at("[ring]\ngenerators = h\ndegrees = 1\n").first == 1);
  /* zero exponent */
  CHECK(fails_at("[ring]\ngenerators = h\ndegrees = 1\n"
                 "integrals = h^0 -> 1\n")
            .first == 4);
  /* trailing comma */
  CHECK(fails_at("[ring]\ngenerators = h,\ndegrees = 1\n"
                 "integrals = h -> 1\n")
            .first == 2);
}

TEST_CASE("pair content is validated against the ring") {
  std::string ring =
      "[ring]\ngenerators = h\ndegrees = 1\nintegrals = h^1 -> 1\n";
  /* dimension disagrees with the ring's top degree */
  CHECK(fails_at(ring + "[pair]\ndimension = 2\n"
                        "cotangent_roots = -h, -h\ndivisor_classes =\n")
            .first == 5);
  /* root count vs dimension (caught by pair validation) */
  CHECK(fails_at(ring + "[pair]\ndimension = 1\n"
                        "cotangent_roots = -h, -h\ndivisor_classes =\n")
            .first == 5);
  /* roots must be nilpotent */
  CHECK(fails_at(ring + "[pair]\ndimension = 1\n"
                        "cotangent_roots = 1 - 2*h\ndivisor_classes =\n")
            .first == 5);
  /* combos reject malformed tails */
  CHECK(fails_at(ring + "[pair]\ndimension = 1\n"
                        "cotangent_roots = -2*h + \ndivisor_classes =\n")
            .first == 7);
}

TEST_CASE("comments and blank lines are ignored anywhere") {
  const char* text =
      "# leading\n"
      "\n"
      "[ring]  # trailing\n"
      "generators = h  # one generator\n"
      "degrees = 1\n"
      "integrals = h^1 -> 1\n"
      "[pair]\n"
      "dimension = 1\n"
      "cotangent_roots = -2*h\n";
  IniFile f = parse_ini(text);
  genus::PairData p = pair_from_ini(f, ring_from_ini(f), "x");
  CHECK(p.divisor_classes.empty());
}
