#include "backstab/rational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace backstab {

namespace {

BigInt pow10(int exponent) {
  BigInt out = 1;
  for (int i = 0; i < exponent; ++i) out *= 10;
  return out;
}

/// round(num / den) with ties to even; num >= 0, den > 0.
BigInt round_half_even(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  BigInt r = num % den;
  BigInt twice = 2 * r;
  if (twice > den || (twice == den && (q & 1) != 0)) ++q;
  return q;
}

/// Renders digits/10^decimals with a leading sign.
std::string render_scaled(const BigInt& scaled, int decimals, bool negative) {
  std::string digits = scaled.str();
  if (decimals > 0) {
    if (static_cast<int>(digits.size()) <= decimals)
      digits.insert(0, static_cast<std::size_t>(decimals + 1) - digits.size(), '0');
    digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
  }
  if (negative && scaled != 0) digits.insert(0, "-");
  return digits;
}

}  // namespace

std::string to_fraction_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational parse_fraction(std::string_view text) {
  auto parse_int = [](std::string_view s) {
    if (s.empty()) throw std::invalid_argument("fraction: empty component");
    std::size_t start = (s.front() == '-') ? 1 : 0;
    if (start == s.size()) throw std::invalid_argument("fraction: bare sign");
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("fraction: bad digit in '" + std::string(s) + "'");
    return BigInt(std::string(s));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("fraction: zero denominator");
  return Rational(num, den);
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

Rational exact_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("exact_from_double: non-finite value");
  int exponent = 0;
  double mantissa = std::frexp(value, &exponent);
  // 53-bit mantissa as an integer
  auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational out{BigInt(scaled)};
  if (exponent > 0) {
    out *= Rational(BigInt(1) << exponent);
  } else if (exponent < 0) {
    out /= Rational(BigInt(1) << (-exponent));
  }
  return out;
}

std::string format_fixed(const Rational& value, int decimals) {
  if (decimals < 0) throw std::invalid_argument("format_fixed: negative precision");
  const bool negative = value < 0;
  const Rational magnitude = negative ? Rational(-value) : value;
  BigInt scaled = round_half_even(boost::multiprecision::numerator(magnitude) * pow10(decimals),
                                  boost::multiprecision::denominator(magnitude));
  return render_scaled(scaled, decimals, negative);
}

std::string format_significant(const Rational& value, int digits) {
  if (digits < 1) throw std::invalid_argument("format_significant: need at least one digit");
  if (value == 0) return "0";
  const bool negative = value < 0;
  const Rational magnitude = negative ? Rational(-value) : value;

  // exponent e with 10^e <= magnitude < 10^(e+1)
  int e = 0;
  Rational probe = magnitude;
  while (probe >= 10) { probe /= 10; ++e; }
  while (probe < 1) { probe *= 10; --e; }

  int decimals = digits - 1 - e;
  if (decimals < 0) decimals = 0;
  const BigInt num = boost::multiprecision::numerator(magnitude);
  const BigInt den = boost::multiprecision::denominator(magnitude);
  BigInt scaled = round_half_even(num * pow10(decimals), den);
  // rounding up to the next power of ten adds a digit; drop one decimal
  if (decimals > 0 && scaled == pow10(digits)) {
    --decimals;
    scaled /= 10;
  }
  std::string out = render_scaled(scaled, decimals, false);
  return negative ? "-" + out : out;
}

std::string format_significant(double value, int digits) {
  return format_significant(exact_from_double(value), digits);
}

}  // namespace backstab
