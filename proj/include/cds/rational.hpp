#pragma once

#include <gmpxx.h>

#include <string>

namespace cds {

/// Exact rational in canonical form (denominator > 0, reduced).
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// "p/q", or "p" when the value is an integer.
inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace cds
