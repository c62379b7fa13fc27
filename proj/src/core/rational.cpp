#include "addforms/rational.hpp"

#include "addforms/error.hpp"

#include <cctype>

namespace addforms {

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) fail(ErrorCode::invalid_argument, "zero denominator");
  return Rational(num, den);
}

BigInt floor(const Rational& r) {
  BigInt n = numerator(r);
  BigInt d = denominator(r);
  BigInt q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

Rational fractional_part(const Rational& r) { return r - Rational(floor(r)); }

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

BigInt pow(const BigInt& base, unsigned exponent) { return boost::multiprecision::pow(base, exponent); }

int sign(const Rational& r) { return r.sign(); }

std::string to_decimal(const Rational& r, unsigned digits) {
  BigInt n = numerator(r);
  const BigInt d = denominator(r);
  std::string out;
  if (n < 0) {
    out += '-';
    n = -n;
  }
  BigInt whole = n / d;
  BigInt rem = n % d;
  out += whole.str();
  if (rem == 0 || digits == 0) return out == "-0" ? "0" : out;
  std::string frac;
  for (unsigned i = 0; i < digits && rem != 0; ++i) {
    rem *= 10;
    frac += static_cast<char>('0' + static_cast<int>(rem / d));
    rem %= d;
  }
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  if (!frac.empty()) out += "." + frac;
  return out;
}

Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [](std::string_view s, bool allow_sign) -> BigInt {
    bool negative = false;
    if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+')) {
      negative = s.front() == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) fail(ErrorCode::parse_error, "malformed rational");
    BigInt v = 0;
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) fail(ErrorCode::parse_error, "malformed rational");
      v = v * 10 + (c - '0');
    }
    return negative ? BigInt(-v) : v;
  };
  text = trim(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return make_rational(parse_int(trim(text.substr(0, slash)), true), parse_int(trim(text.substr(slash + 1)), false));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view head = text.substr(0, dot);
    std::string_view tail = text.substr(dot + 1);
    bool negative = !head.empty() && head.front() == '-';
    BigInt whole = head.empty() || head == "-" || head == "+" ? BigInt(0) : parse_int(head, true);
    BigInt frac = tail.empty() ? BigInt(0) : parse_int(tail, false);
    BigInt scale = pow(BigInt(10), static_cast<unsigned>(tail.size()));
    Rational magnitude = Rational(boost::multiprecision::abs(whole)) + Rational(frac, scale);
    return negative ? Rational(-magnitude) : magnitude;
  }
  return Rational(parse_int(text, true));
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace addforms
