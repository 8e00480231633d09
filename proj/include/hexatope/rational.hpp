#pragma once

// Exact rational scalars shared by the LP, homology and geometry code.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hexatope {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

/// Parses "p", "p/q" or a finite decimal such as "-0.25".
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto parse_int = [](std::string_view s) {
    if (s.empty()) throw std::invalid_argument("malformed rational literal");
    std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (i == s.size()) throw std::invalid_argument("malformed rational literal");
    for (std::size_t k = i; k < s.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(s[k])))
        throw std::invalid_argument("malformed rational literal: " + std::string(s));
    std::size_t lead = i;
    while (lead + 1 < s.size() && s[lead] == '0') ++lead;  // cpp_int reads a leading 0 as octal
    const BigInt v(std::string(s.substr(lead)));
    return s.front() == '-' ? BigInt(-v) : v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string frac(text.substr(dot + 1));
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    BigInt den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    return Rational(parse_int(digits + frac), den);
  }
  return Rational(parse_int(text));
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Exact value of a finite double (every finite double is a dyadic rational).
inline Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite double");
  int exponent = 0;
  double mantissa = std::frexp(x, &exponent);
  // 53 significant bits
  auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational q{BigInt(scaled)};
  if (exponent >= 0) {
    q *= Rational(BigInt(1) << exponent);
  } else {
    q /= Rational(BigInt(1) << (-exponent));
  }
  return q;
}

/// Nearest rational with denominator 2^bits; used to snap floating input.
inline Rational snap_to_rational(double x, int bits = 30) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite double");
  const double scaled = std::round(std::ldexp(x, bits));
  return Rational(BigInt(static_cast<long long>(scaled)), BigInt(1) << bits);
}

inline BigInt floor_of(const Rational& q) {
  BigInt n = numerator(q), d = denominator(q);
  BigInt f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

inline BigInt ceil_of(const Rational& q) {
  BigInt f = floor_of(q);
  return f * denominator(q) == numerator(q) ? f : f + 1;
}

}  // namespace hexatope
