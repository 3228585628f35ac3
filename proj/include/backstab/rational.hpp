#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace backstab {

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// "p/q", or "p" when the denominator is 1.
std::string to_fraction_string(const Rational& value);
/// Inverse of to_fraction_string. Throws std::invalid_argument on malformed text.
Rational parse_fraction(std::string_view text);

double to_double(const Rational& value);
/// Exact binary value of a finite double.
Rational exact_from_double(double value);

// Decimal rendering rounds half to even on the exact value.

/// Fixed notation with `decimals` digits after the point.
std::string format_fixed(const Rational& value, int decimals);
/// Fixed notation with `digits` significant digits, e.g. 0.624508704912.
/// Zero renders as "0".
std::string format_significant(const Rational& value, int digits);
std::string format_significant(double value, int digits);

}  // namespace backstab
