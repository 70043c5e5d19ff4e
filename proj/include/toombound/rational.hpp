#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace toombound {

using BigInt = mpz_class;
using Rational = mpq_class;

/// "p/q" in lowest terms; integers are still written with a "/1" denominator
/// so every serialized rational has one shape.
inline std::string to_string(const Rational& r) {
  Rational c(r);
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline std::string to_string(const BigInt& z) { return z.get_str(); }

/// Accepts "p/q", "p" and signed forms. Throws std::invalid_argument.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  Rational r;
  if (r.set_str(text, 10) != 0) throw std::invalid_argument("malformed rational '" + text + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

inline Rational rational_pow(const Rational& base, unsigned long exponent) {
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline BigInt int_pow(long base, unsigned long exponent) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base < 0 ? -base : base), exponent);
  if (base < 0 && (exponent & 1U)) r = -r;
  return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace toombound
