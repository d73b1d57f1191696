#include "logcdr/theta.hpp"

namespace logcdr::qseries {
namespace {

/* 1 + q^a * u truncated at q^N; a = 0 folds u into the constant term. */
TruncatedSeries<LaurentY> binomial_factor(int N, int a, const LaurentY& u) {
  auto f = TruncatedSeries<LaurentY>::constant(N, LaurentY(1));
  if (a <= N) f.set_coeff(a, f.coeff(a) + u);
  return f;
}

}  // namespace

TruncatedSeries<LaurentY> theta_tilde(int N) {
  auto out = TruncatedSeries<LaurentY>::constant(N, LaurentY(1));
  LaurentY my = LaurentY::monomial(-1, 1);
  LaurentY myi = LaurentY::monomial(-1, -1);
  for (int j = 1; j <= N + 1; ++j) {
    if (j - 1 <= N) out = out * binomial_factor(N, j - 1, my);
    if (j <= N) out = out * binomial_factor(N, j, myi);
  }
  return out;
}

TruncatedSeries<LaurentY> theta_plus(int N) {
  auto out = TruncatedSeries<LaurentY>::constant(N, LaurentY(1));
  LaurentY my = LaurentY::monomial(-1, 1);
  LaurentY myi = LaurentY::monomial(-1, -1);
  for (int j = 1; j <= N; ++j) {
    out = out * binomial_factor(N, j, my);
    out = out * binomial_factor(N, j, myi);
  }
  return out;
}

TruncatedSeries<LaurentY> g_series(int N) {
  auto den = specialize_y1(theta_plus(N));
  return theta_tilde(N) * embed_rational_series(den).invert();
}

TruncatedSeries<LaurentY> g_series_product_form(int N) {
  auto num = TruncatedSeries<LaurentY>::constant(N, LaurentY(1));
  LaurentY my = LaurentY::monomial(-1, 1);
  LaurentY myi = LaurentY::monomial(-1, -1);
  for (int j = 1; j <= N + 1; ++j) {
    if (j - 1 <= N) num = num * binomial_factor(N, j - 1, my);
    if (j <= N) num = num * binomial_factor(N, j, myi);
  }
  auto den = TruncatedSeries<Rational>::constant(N, Rational(1));
  for (int j = 1; j <= N; ++j) {
    auto f = TruncatedSeries<Rational>::constant(N, Rational(1));
    f.set_coeff(j, Rational(-1));
    den = den * f * f;
  }
  return num * embed_rational_series(den).invert();
}

}  // namespace logcdr::qseries
