#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "cbd/error.hpp"

namespace cbd {

// Exact rational arithmetic. Every probability in the library is one of these.
using Rational = mpq_class;

// Accepts "a/b" or an integer literal, optional leading '-'. The result is in
// lowest terms.
inline Rational parse_rational(std::string_view text) {
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
  };
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!digits(num) || !digits(den))
    throw validation_error("malformed rational '" + std::string(text) + "'");
  mpz_class d(std::string(den), 10);
  if (d == 0) throw validation_error("zero denominator in '" + std::string(text) + "'");
  Rational q(mpz_class(std::string(num), 10), d);
  q.canonicalize();
  if (text.front() == '-') q = -q;
  return q;
}

// "a/b", or just "a" when the denominator is 1.
inline std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace cbd
