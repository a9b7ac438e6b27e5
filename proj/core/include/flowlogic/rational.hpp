#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace flowlogic {

// Exact rational arithmetic. Every non-integral flow value and every
// coefficient in the linear-feasibility solver uses this type.
using Rational = mpq_class;

inline Rational make_rational(std::int64_t value) {
  return Rational(mpz_class(static_cast<long>(value)));
}

inline std::string to_string(const Rational& q) {
  Rational copy = q;
  copy.canonicalize();
  return copy.get_str();
}

// Parses "p", "-p" or "p/q".
Rational parse_rational(const std::string& text);

bool is_integer(const Rational& q);

// Requires is_integer(q) and that the value fits in 64 bits.
std::int64_t to_int64(const Rational& q);

}  // namespace flowlogic
