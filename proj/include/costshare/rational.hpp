#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace costshare {

// Exact arbitrary-precision fraction, always canonical (lowest terms,
// positive denominator) after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

// Accepts "p", "-p", "p/q"; surrounding whitespace is rejected. Throws
// Error(kParseError) on anything else or a zero denominator.
Rational parse_rational(std::string_view text);

// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

Integer floor_of(const Rational& value);

inline bool is_integral(const Rational& value) { return value.get_den() == 1; }

}  // namespace costshare
