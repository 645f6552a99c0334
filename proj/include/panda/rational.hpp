#pragma once

#include <gmpxx.h>

#include <string>

namespace panda {

// Exact arithmetic. GMP keeps mpq_class canonical (gcd 1, positive
// denominator) after every operation.
using BigInt = mpz_class;
using Rational = mpq_class;

inline std::string to_string(const BigInt& v) { return v.get_str(); }

// Prints p/q, or just p for integers.
inline std::string to_string(const Rational& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline BigInt pow(const BigInt& base, unsigned long exponent) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

// Parses "p", "-p" or "p/q". Throws std::invalid_argument on junk.
Rational parse_rational(const std::string& text);

}  // namespace panda
