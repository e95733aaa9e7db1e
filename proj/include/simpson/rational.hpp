#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <string>
#include <string_view>

#include "simpson/errors.hpp"

namespace simpson {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline int sign_of(const Rational& r) { return r.sign(); }
inline int sign_of(const BigInt& r) { return r.sign(); }

/// Parses "42", "-3", "3/7". Whitespace is not accepted.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view digits) {
    std::size_t start = 0;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) start = 1;
    if (start == digits.size()) throw DomainError("malformed rational: '" + std::string(text) + "'");
    for (std::size_t i = start; i < digits.size(); ++i) {
      if (digits[i] < '0' || digits[i] > '9') {
        throw DomainError("malformed rational: '" + std::string(text) + "'");
      }
    }
    return BigInt(std::string(digits));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
    throw DomainError("malformed rational: '" + std::string(text) + "'");
  }
  BigInt den = parse_int(den_text);
  if (den == 0) throw DomainError("zero denominator: '" + std::string(text) + "'");
  return Rational(num, den);
}

/// "num/den" in lowest terms, or just "num" for integers.
inline std::string format_rational(const Rational& r) {
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

/// Always "num/den", including a denominator of 1.
inline std::string format_rational_fraction(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

/// Exact value of a finite double (every double is a dyadic rational).
inline Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw DomainError("non-finite value cannot be made exact");
  if (value == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // mantissa * 2^53 is an integer for every finite double.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  BigInt num(scaled);
  exponent -= 53;
  if (exponent >= 0) return Rational(num << exponent);
  BigInt den = BigInt(1) << (-exponent);
  return Rational(num, den);
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace simpson
