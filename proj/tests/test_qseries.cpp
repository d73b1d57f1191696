#include <doctest.h>

#include <random>

#include "logcdr/series.hpp"
#include "logcdr/textio.hpp"
#include "logcdr/theta.hpp"

using namespace logcdr;
using namespace logcdr::qseries;

namespace {

LaurentY Y(const Rational& c, int e) { return LaurentY::monomial(c, e); }

/* Expected values below were computed with an independent exact-arithmetic
 * implementation and frozen here. */

LaurentY theta_tilde_q1() {
  // 1 + y^2 - y - y^-1
  return LaurentY(1) + Y(1, 2) + Y(-1, 1) + Y(-1, -1);
}

LaurentY g_q1() {
  // 3 - 3y + y^2 - y^-1
  return LaurentY(3) + Y(-3, 1) + Y(1, 2) + Y(-1, -1);
}

}  // namespace

TEST_CASE("laurent ring basics") {
  LaurentY a = LaurentY(1) + Y(-1, 1);       // 1 - y
  LaurentY b = LaurentY(1) + Y(1, 1);        // 1 + y
  CHECK(a * b == LaurentY(1) + Y(-1, 2));    // 1 - y^2
  CHECK((a - a).is_zero());
  CHECK(Y(1, -1) * Y(1, 1) == LaurentY(1));
  CHECK(a.coeff(1) == Rational(-1));
  CHECK(a.coeff(5) == Rational(0));
  CHECK(a.min_exp() == 0);
  CHECK(a.max_exp() == 1);
  CHECK(Y(Rational(2), 3).try_invert().value() ==
        Y(Rational(1) / 2, -3));
  CHECK(!a.try_invert().has_value());
  CHECK(a.evaluate(Rational(2)) == Rational(-1));
  CHECK(Y(1, -2).evaluate(Rational(2)) == Rational(1) / 4);
}

TEST_CASE("laurent ring axioms on randomized values") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> exp_d(-4, 4), coeff_d(-5, 5);
  auto rand_l = [&]() {
    LaurentY v;
    for (int t = 0; t < 4; ++t)
      v += Y(coeff_d(rng), exp_d(rng));
    return v;
  };
  for (int i = 0; i < 200; ++i) {
    LaurentY a = rand_l(), b = rand_l(), c = rand_l();
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("rational function normalization and arithmetic") {
  LaurentY one(1), y = Y(1, 1);
  RationalFunctionY f(one - y, one - y);
  CHECK(f == RationalFunctionY(one));
  // (1 - y^2)/(1 - y) reduces to 1 + y
  RationalFunctionY g(one - y * y, one - y);
  CHECK(g.as_laurent().value() == one + y);
  // denominator normalization: lowest-degree coefficient 1
  RationalFunctionY h(one, Y(2, 1) + Y(2, 2));
  CHECK(h.den().coeff(0) == Rational(1));
  CHECK(h.den() == one + y);           // 2y(1+y) -> y-part moved to num
  CHECK(h.num() == Y(Rational(1) / 2, -1));
  RationalFunctionY s = f + g;
  CHECK(s.as_laurent().value() == LaurentY(2) + y);
  CHECK((g * g.try_invert().value()).as_laurent().value() == one);
  CHECK((g - g).is_zero());
  RationalFunctionY q(one, one - y);
  CHECK(!q.as_laurent().has_value());
  CHECK((q * RationalFunctionY(one - y)).as_laurent().value() == one);
}

TEST_CASE("series invert: geometric series") {
  auto s = TruncatedSeries<Rational>::constant(3, 1);
  s.set_coeff(1, -1);  // 1 - q
  auto inv = s.invert();
  for (int m = 0; m <= 3; ++m) CHECK(inv.coeff(m) == Rational(1));
  CHECK((s * inv) == TruncatedSeries<Rational>::constant(3, 1));
}

TEST_CASE("series invert: (1-q)^2 (1-q^2)^2 to order 2") {
  auto one = TruncatedSeries<Rational>::constant(2, 1);
  auto a = one;
  a.set_coeff(1, -1);
  auto b = one;
  b.set_coeff(2, -1);
  auto inv = (a * a * b * b).invert();
  CHECK(inv.coeff(0) == Rational(1));
  CHECK(inv.coeff(1) == Rational(2));
  CHECK(inv.coeff(2) == Rational(5));
}

TEST_CASE("series invert requires unit constant term") {
  auto s = TruncatedSeries<LaurentY>::constant(2, LaurentY(1) + Y(-1, 1));
  CHECK_THROWS_AS(s.invert(), NonUnitConstantTerm);
}

TEST_CASE("theta_tilde low orders") {
  auto th = theta_tilde(4);
  CHECK(th.coeff(0) == LaurentY(1) + Y(-1, 1));
  CHECK(th.coeff(1) == theta_tilde_q1());
  // q^2: y^2 - 2y + 2 - y^-1
  CHECK(th.coeff(2) == Y(1, 2) + Y(-2, 1) + LaurentY(2) + Y(-1, -1));
  // q^3: -y^3 + 2y^2 - 3y + 3 - 2/y + y^-2
  CHECK(th.coeff(3) == Y(-1, 3) + Y(2, 2) + Y(-3, 1) + LaurentY(3) +
                           Y(-2, -1) + Y(1, -2));
  CHECK(theta_tilde(0).coeff(0) == LaurentY(1) + Y(-1, 1));
}

TEST_CASE("theta_plus low orders and y=1 row") {
  auto tp = theta_plus(4);
  CHECK(tp.coeff(0) == LaurentY(1));
  CHECK(tp.coeff(1) == Y(-1, 1) + Y(-1, -1));
  CHECK(tp.coeff(2) == Y(-1, 1) + LaurentY(1) + Y(-1, -1));
  auto tp1 = specialize_y1(theta_plus(4));
  CHECK(tp1.coeff(0) == Rational(1));
  CHECK(tp1.coeff(1) == Rational(-2));
  CHECK(tp1.coeff(2) == Rational(-1));
  CHECK(tp1.coeff(3) == Rational(2));
  CHECK(tp1.coeff(4) == Rational(1));
}

TEST_CASE("(1-y) theta_plus == theta_tilde up to order 20") {
  int N = 20;
  auto lhs = TruncatedSeries<LaurentY>::constant(N, LaurentY(1) + Y(-1, 1)) *
             theta_plus(N);
  CHECK(lhs == theta_tilde(N));
}

TEST_CASE("g_series two routes agree to order 20") {
  CHECK(g_series(20) == g_series_product_form(20));
}

TEST_CASE("g_series frozen coefficients") {
  auto g = g_series(4);
  CHECK(g.coeff(0) == LaurentY(1) + Y(-1, 1));
  CHECK(g.coeff(1) == g_q1());
  // q^2: 3y^2 - 9y + 9 - 3/y
  CHECK(g.coeff(2) == Y(3, 2) + Y(-9, 1) + LaurentY(9) + Y(-3, -1));
  // q^3: -y^3 + 9y^2 - 22y + 22 - 9/y + y^-2
  CHECK(g.coeff(3) == Y(-1, 3) + Y(9, 2) + Y(-22, 1) + LaurentY(22) +
                          Y(-9, -1) + Y(1, -2));
  // q^4: -3y^3 + 22y^2 - 51y + 51 - 22/y + 3/y^2
  CHECK(g.coeff(4) == Y(-3, 3) + Y(22, 2) + Y(-51, 1) + LaurentY(51) +
                          Y(-22, -1) + Y(3, -2));
}

TEST_CASE("g_series specializations") {
  auto g = g_series(10);
  CHECK(specialize_q0(g) == LaurentY(1) + Y(-1, 1));
  auto at1 = specialize_y1(g);
  for (int m = 0; m <= 10; ++m) CHECK(at1.coeff(m) == Rational(0));
  auto at2 = specialize_y(g, Rational(2));
  CHECK(at2.coeff(0) == Rational(-1));  // 1 - 2
}

TEST_CASE("shift_y on polynomial windows") {
  auto s = TruncatedSeries<LaurentY>::constant(5, LaurentY(1) + Y(-1, 1));
  auto sh = shift_y(s, 1);
  CHECK(sh.verified_order == 5);
  CHECK(sh.series.coeff(0) == LaurentY(1));
  CHECK(sh.series.coeff(1) == Y(-1, 1));
  for (int m = 2; m <= 5; ++m) CHECK(sh.series.coeff(m).is_zero());
}

TEST_CASE("shift_y flags negative q powers") {
  auto s = TruncatedSeries<LaurentY>::constant(3, Y(1, -1));
  CHECK_THROWS_AS(shift_y(s, 1), NegativeQPower);
}

TEST_CASE("shift_y envelope accounting") {
  /* theta_tilde's envelope at N=10 reaches y^-4 (order 10), so the
   * envelope-certified range ends at 10 - 4 = 6. */
  auto sh = shift_y(theta_tilde(10), 1);
  CHECK(sh.verified_order == 6);
}

TEST_CASE("shift identity for theta_tilde at N=20") {
  auto rep = compare_shift_with_factor(theta_tilde(20), 1);
  CHECK(rep.passed);
  CHECK(rep.factor_exponent == 1);
  CHECK(rep.verified_order == 14);
  CHECK(!rep.first_discrepancy.has_value());
}

TEST_CASE("shift identity for g_series") {
  auto rep10 = compare_shift_with_factor(g_series(10), 1);
  CHECK(rep10.passed);
  CHECK(rep10.verified_order == 6);
  auto rep20 = compare_shift_with_factor(g_series(20), 1);
  CHECK(rep20.passed);
  CHECK(rep20.verified_order == 14);
}

TEST_CASE("shift identity for g_series squared, factor exponent 2") {
  auto g = g_series(10);
  auto rep = compare_shift_with_factor(g * g, 2);
  CHECK(rep.passed);
  CHECK(rep.verified_order == 5);
  auto g20 = g_series(20);
  auto rep20 = compare_shift_with_factor(g20 * g20, 2);
  CHECK(rep20.passed);
  CHECK(rep20.verified_order == 12);
}

TEST_CASE("compare_shift_with_factor flags a broken series") {
  /* 1 + y fails phi(qy) = -y^{-1} phi(y) already at order 0. */
  auto s = TruncatedSeries<LaurentY>::constant(4, LaurentY(1) + Y(1, 1));
  auto rep = compare_shift_with_factor(s, 1);
  CHECK(!rep.passed);
  REQUIRE(rep.first_discrepancy.has_value());
  CHECK(rep.first_discrepancy->order == 0);
}

TEST_CASE("zero series passes vacuously") {
  TruncatedSeries<LaurentY> z(6);
  auto rep = compare_shift_with_factor(z, 3);
  CHECK(rep.passed);
  CHECK(rep.verified_order == 6);
}

TEST_CASE("canonical text format") {
  auto g = g_series(1);
  CHECK(serialize_series(g) ==
        "q^0: 1 -1*y^1\n"
        "q^1: -1*y^-1 3 -3*y^1 1*y^2\n");
  TruncatedSeries<LaurentY> z(0);
  CHECK(serialize_series(z) == "q^0: 0\n");
}

TEST_CASE("series text round trip") {
  auto g = g_series(6);
  CHECK(parse_series(serialize_series(g)) == g);
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> exp_d(-6, 6), coeff_d(-9, 9), den_d(1, 7);
  for (int i = 0; i < 50; ++i) {
    TruncatedSeries<LaurentY> s(4);
    for (int m = 0; m <= 4; ++m) {
      LaurentY v;
      for (int t = 0; t < 3; ++t)
        v += LaurentY::monomial(Rational(coeff_d(rng)) / den_d(rng), exp_d(rng));
      s.set_coeff(m, v);
    }
    CHECK(parse_series(serialize_series(s)) == s);
  }
}

TEST_CASE("series parser diagnostics") {
  CHECK_THROWS_AS(parse_series("q^1: 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_series("q^0 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_series("q^0: 1*z^2\n"), ConfigError);
  try {
    parse_series("q^0: 1\nq^1: 2/0\n");
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("truncated series ring axioms, randomized") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> exp_d(-3, 3), coeff_d(-4, 4);
  auto rand_s = [&]() {
    TruncatedSeries<LaurentY> s(5);
    for (int m = 0; m <= 5; ++m) {
      LaurentY v;
      for (int t = 0; t < 2; ++t) v += Y(coeff_d(rng), exp_d(rng));
      s.set_coeff(m, v);
    }
    return s;
  };
  for (int i = 0; i < 60; ++i) {
    auto a = rand_s(), b = rand_s(), c = rand_s();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
  }
}

TEST_CASE("invert is a right inverse whenever it succeeds") {
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> coeff_d(-4, 4);
  for (int i = 0; i < 40; ++i) {
    TruncatedSeries<Rational> s(6);
    s.set_coeff(0, Rational(1 + (i % 3)));
    for (int m = 1; m <= 6; ++m) s.set_coeff(m, coeff_d(rng));
    CHECK(s * s.invert() == TruncatedSeries<Rational>::constant(6, 1));
  }
}

TEST_CASE("min-order combination") {
  auto a = TruncatedSeries<Rational>::constant(7, 1);
  auto b = TruncatedSeries<Rational>::constant(3, 2);
  CHECK((a * b).order() == 3);
  CHECK((a + b).order() == 3);
}
