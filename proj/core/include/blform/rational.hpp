#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <string>

namespace blform {

using Integer = boost::multiprecision::mpz_int;

/// Exact fraction with arbitrary-precision numerator and denominator.
/// Invariants (maintained by GMP after every operation): denominator > 0,
/// gcd(numerator, denominator) = 1.
using Rational = boost::multiprecision::mpq_rational;

/// Builds n/d exactly. d must be nonzero.
Rational frac(long long n, long long d = 1);

/// Parses "a", "-a", or "a/b" with arbitrary-precision parts.
/// Throws InputError on malformed text or a zero denominator. The result is
/// always canonical ("2/4" parses to 1/2).
Rational parse_rational(const std::string& text);

/// Canonical display form: "a" when the denominator is 1, otherwise "a/b".
std::string rational_string(const Rational& value);

/// Bit length of the numerator (0 for zero). Pivot-selection key used by
/// Gaussian elimination to contain coefficient growth.
std::size_t numerator_bit_length(const Rational& value);

}  // namespace blform
