#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace addforms {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

Rational make_rational(const BigInt& num, const BigInt& den);

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

/// Largest integer <= r.
BigInt floor(const Rational& r);

/// r - floor(r), always in [0, 1).
Rational fractional_part(const Rational& r);

Rational pow(const Rational& base, unsigned exponent);
BigInt pow(const BigInt& base, unsigned exponent);

int sign(const Rational& r);

/// Exact decimal rendering truncated toward zero after `digits` fractional
/// digits; trailing zeros are dropped. Platform independent.
std::string to_decimal(const Rational& r, unsigned digits = 15);

/// "p/q" or "p" with optional sign; also accepts a finite decimal "0.125".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

double to_double(const Rational& r);

}  // namespace addforms
