#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "latops/error.hpp"

namespace latops {

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

/// num/den in lowest terms. Prefer this to the two-argument mpq_class
/// constructor, which does not canonicalize.
inline Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Canonical "num/den" form; zero is "0/1", integers keep the "/1".
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace detail {

inline bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

inline Integer parse_integer(std::string_view s) {
  std::string digits(s[0] == '+' ? s.substr(1) : s);
  return Integer(digits, 10);
}

}  // namespace detail

/// Parses "num/den" or a bare integer. The result is canonicalized.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  if (!detail::is_integer_literal(num))
    throw ValidationError("not a rational: \"" + std::string(text) + "\"");
  if (slash == std::string_view::npos) return Rational(detail::parse_integer(num));

  const auto den = text.substr(slash + 1);
  if (!detail::is_integer_literal(den) || den[0] == '-' || den[0] == '+')
    throw ValidationError("not a rational: \"" + std::string(text) + "\"");
  Integer d = detail::parse_integer(den);
  if (d == 0) throw ValidationError("zero denominator in \"" + std::string(text) + "\"");
  Rational r(detail::parse_integer(num), d);
  r.canonicalize();
  return r;
}

/// Integer power with negative exponents allowed (base must be nonzero then).
inline Rational pow(const Rational& base, long exponent) {
  Rational result = 1;
  Rational b = exponent < 0 ? Rational(1) / base : base;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent)
                                 : static_cast<unsigned long>(exponent);
  while (e) {
    if (e & 1UL) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

inline Rational binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

}  // namespace latops
