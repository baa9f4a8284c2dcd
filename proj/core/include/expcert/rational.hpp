#ifndef EXPCERT_RATIONAL_HPP
#define EXPCERT_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

#include <expcert/interval.hpp>

namespace expcert
{

// Exact arbitrary-precision rationals (canonical: gcd 1, positive denominator).
using BigRational = mpq_class;
using BigInteger = mpz_class;

// Canonical num / den. Throws std::invalid_argument when den == 0.
BigRational ratio(long num, long den);

// Parses an exact rational from a decimal literal ("0.15", "-2.5e-3", "1e-5")
// or a fraction "p/q". Throws std::invalid_argument on malformed text.
BigRational parse_rational(std::string_view text);

// Parses an exact non-negative or negative integer; rejects non-integral values.
long long parse_integer(std::string_view text);

// Tightest interval of doubles containing q (a point when q is a double).
Interval enclose(const BigRational &q);

// Exact rational value of a finite double.
BigRational to_rational(double x);

// "p/q", or "p" for integers.
std::string to_string(const BigRational &q);

BigInteger floor(const BigRational &q);
BigInteger ceil(const BigRational &q);

// Nearest double (for display and statistics only, never for certification).
double to_double(const BigRational &q);

} // namespace expcert

#endif
