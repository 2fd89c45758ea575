#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "cbd/error.hpp"

namespace cbd {

// A joint value of k dichotomous variables packed into an integer. Position 0
// is the most significant bit, and a set bit means +1. Counting upward from 0
// therefore walks the tuples lexicographically with -1 < +1.
using Outcome = std::uint32_t;

// Largest tuple length a dense pmf is allowed to have.
inline constexpr std::size_t max_arity = 24;

inline constexpr std::size_t outcome_count(std::size_t arity) { return std::size_t{1} << arity; }

inline bool is_plus(Outcome o, std::size_t arity, std::size_t pos) {
  return (o >> (arity - 1 - pos)) & 1u;
}

inline int sign_at(Outcome o, std::size_t arity, std::size_t pos) {
  return is_plus(o, arity, pos) ? 1 : -1;
}

inline Outcome with_value(Outcome o, std::size_t arity, std::size_t pos, bool plus) {
  const Outcome bit = Outcome{1} << (arity - 1 - pos);
  return plus ? (o | bit) : (o & ~bit);
}

// '+' for +1 and '-' for -1, one character per position.
inline std::string outcome_to_string(Outcome o, std::size_t arity) {
  std::string s(arity, '-');
  for (std::size_t i = 0; i < arity; ++i)
    if (is_plus(o, arity, i)) s[i] = '+';
  return s;
}

// Inverse of outcome_to_string. The Unicode minus sign is accepted as '-'.
inline Outcome parse_outcome(std::string_view text, std::size_t arity) {
  Outcome o = 0;
  std::size_t symbols = 0;
  for (std::size_t i = 0; i < text.size(); ++symbols) {
    bool plus;
    if (text[i] == '+' || text[i] == '-') {
      plus = text[i] == '+';
      i += 1;
    } else if (text.substr(i, 3) == "\xE2\x88\x92") {
      plus = false;
      i += 3;
    } else {
      throw validation_error("outcome '" + std::string(text) + "' may only contain '+' and '-'");
    }
    o = (o << 1) | (plus ? 1u : 0u);
  }
  if (symbols != arity)
    throw validation_error("outcome '" + std::string(text) + "' has length " +
                           std::to_string(symbols) + ", expected " + std::to_string(arity));
  return o;
}

}  // namespace cbd
