#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "hfj/error.hpp"

namespace hfj {

using Integer = mpz_class;
/// Arbitrary-precision rational, always canonical (lowest terms, positive denominator).
using Rational = mpq_class;

inline Integer floor_div(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil_div(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "p" or "p/q" with an optional leading sign. Rejects zero denominators,
/// whitespace and anything else; the result is canonicalized.
inline Rational parse_rational(std::string_view text) {
  auto digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
  };
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!digits(num) || !digits(den)) throw ParseError("malformed rational '" + std::string(text) + "'");
  Integer n{std::string(num)}, d{std::string(den)};
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  if (text.front() == '-') n = -n;
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline std::size_t hash_value(const Rational& q) {
  std::size_t h = std::hash<std::string>{}(q.get_num().get_str(16));
  h ^= std::hash<std::string>{}(q.get_den().get_str(16)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace hfj
