#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace ordertypes {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", "p" or a finite decimal such as "-0.125".  The result is
/// canonicalized.  Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// p/q in lowest terms.  Use instead of Rational(p, q), which gmpxx leaves
/// unreduced.
inline Rational ratio(const Integer& p, const Integer& q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// "p/q" (or "p" when the denominator is one).
std::string to_string(const Rational& value);

/// Exact rational value of a finite double.
Rational from_double(double value);

/// The rational k / 2^bits closest to value (ties away from zero).
Rational dyadic_round(double value, int bits);

/// Binomial coefficient as a machine integer; only used for small arguments.
std::int64_t binomial(int n, int k);

}  // namespace ordertypes
