#include "logcdr/series.hpp"

#include <algorithm>
#include <set>

namespace logcdr::qseries {

std::optional<std::pair<int, int>> ydeg_window(
    const TruncatedSeries<LaurentY>& s, int m) {
  const LaurentY& c = s.coeff(m);
  if (c.is_zero()) return std::nullopt;
  return std::pair{c.min_exp(), c.max_exp()};
}

std::optional<std::pair<int, int>> ydeg_envelope(
    const TruncatedSeries<LaurentY>& s) {
  std::optional<std::pair<int, int>> env;
  for (int m = 0; m <= s.order(); ++m) {
    auto w = ydeg_window(s, m);
    if (!w) continue;
    if (!env)
      env = w;
    else
      env = std::pair{std::min(env->first, w->first),
                      std::max(env->second, w->second)};
  }
  return env;
}

ShiftedSeries shift_y(const TruncatedSeries<LaurentY>& s, int k) {
  if (k < 1) throw Error("shift_y requires k >= 1");
  int N = s.order();
  auto env = ydeg_envelope(s);
  int verified = N;
  if (env && env->first < 0) verified = N + k * env->first;
  if (verified < 0)
    throw EmptyVerifiableRange(
        "y-degree window leaves no certifiable order under y -> q^k y");
  TruncatedSeries<LaurentY> out(N);
  for (int m = 0; m <= N; ++m) {
    for (const auto& [p, c] : s.coeff(m).terms()) {
      long target = m + static_cast<long>(k) * p;
      if (target < 0)
        throw NegativeQPower("monomial q^" + std::to_string(m) + " y^" +
                             std::to_string(p) +
                             " maps below q^0 under y -> q^k y");
      if (target <= N)
        out.set_coeff(static_cast<int>(target),
                      out.coeff(static_cast<int>(target)) +
                          LaurentY::monomial(c, p));
    }
  }
  return {out, verified};
}

ShiftCompareReport compare_shift_with_factor(
    const TruncatedSeries<LaurentY>& s, int d, int k) {
  ShiftCompareReport rep;
  rep.factor_exponent = d;
  int N = s.order();
  Rational sign = (d % 2 == 0) ? 1 : -1;

  /* Left side: coefficient of q^M y^p in s(q, q^k y) is s_{M-kp}(p),
   * determined iff M - kp <= N. Right side: (-1)^d s_M(p + d). */
  auto lhs_at = [&](int M, int p) -> Rational {
    long src = M - static_cast<long>(k) * p;
    if (src < 0) return Rational(0);
    return s.coeff(static_cast<int>(src)).coeff(p);
  };
  auto rhs_at = [&](int M, int p) -> Rational {
    return sign * s.coeff(M).coeff(p + d);
  };

  int verified = -1;
  bool chain_intact = true;
  for (int M = 0; M <= N && chain_intact; ++M) {
    for (const auto& [pp, c] : s.coeff(M).terms()) {
      int p = pp - d;  // support of the right side at order M
      if (M - static_cast<long>(k) * p > N) {
        chain_intact = false;
        break;
      }
    }
    if (chain_intact) verified = M;
  }
  rep.verified_order = verified;

  for (int M = 0; M <= N && !rep.first_discrepancy; ++M) {
    /* Candidate exponents: right-side support plus anything the left side
     * can produce from determined input rows. */
    std::set<int> cand;
    for (const auto& [pp, c] : s.coeff(M).terms()) cand.insert(pp - d);
    for (int m = 0; m <= N; ++m) {
      int diff = M - m;
      if (diff % k != 0) continue;
      int p = diff / k;
      if (s.coeff(m).coeff(p) != 0) cand.insert(p);
    }
    for (int p : cand) {
      if (M - static_cast<long>(k) * p > N) continue;  // undetermined cell
      Rational l = lhs_at(M, p), r = rhs_at(M, p);
      if (l != r) {
        rep.first_discrepancy = Discrepancy{M, p, l, r};
        break;
      }
    }
  }

  rep.passed = rep.verified_order >= 0 &&
               (!rep.first_discrepancy ||
                rep.first_discrepancy->order > rep.verified_order);
  return rep;
}

LaurentY specialize_q0(const TruncatedSeries<LaurentY>& s) {
  return s.coeff(0);
}

TruncatedSeries<Rational> specialize_y(const TruncatedSeries<LaurentY>& s,
                                       const Rational& v) {
  if (v == 0) throw Error("y specialization requires a nonzero value");
  return s.map_coeffs([&](const LaurentY& c) {
    return c.is_zero() ? Rational(0) : c.evaluate(v);
  });
}

TruncatedSeries<Rational> specialize_y1(const TruncatedSeries<LaurentY>& s) {
  return specialize_y(s, Rational(1));
}

TruncatedSeries<LaurentY> embed_rational_series(
    const TruncatedSeries<Rational>& s) {
  return s.map_coeffs([](const Rational& c) { return LaurentY(c); });
}

}  // namespace logcdr::qseries
