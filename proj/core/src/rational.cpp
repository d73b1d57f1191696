#include "logcdr/rational.hpp"

#include <gmpxx.h>

namespace logcdr {

std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  size_t slash = text.find('/');
  auto is_int = [](std::string_view t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  if (slash == std::string_view::npos) {
    if (!is_int(text)) return std::nullopt;
    return Rational(std::string(text));
  }
  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  if (!is_int(num) || !is_int(den)) return std::nullopt;
  if (Integer(std::string(den)) == 0) return std::nullopt;
  Rational r{std::string(text)};
  r.canonicalize();
  return r;
}

Rational binomial(long n, unsigned long k) {
  Rational out = 1;
  for (unsigned long j = 0; j < k; ++j) {
    out *= Rational(n - static_cast<long>(j));
    out /= Rational(static_cast<long>(j) + 1);
  }
  return out;
}

Rational factorial(unsigned long n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

}  // namespace logcdr
