#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace logcdr {

/* Exact rational scalar. mpq_class keeps gcd(num, den) = 1 and den >= 1
 * after canonicalization, which is exactly the canonical form the text
 * format relies on. */
using Rational = mpq_class;
using Integer = mpz_class;

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/* Parses "p", "-p", or "p/q". Returns nullopt on malformed input instead of
 * letting GMP abort. */
std::optional<Rational> parse_rational(std::string_view text);

Rational binomial(long n, unsigned long k);  // generalized: n may be negative
Rational factorial(unsigned long n);

}  // namespace logcdr
