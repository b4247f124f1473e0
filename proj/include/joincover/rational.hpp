#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace joincover {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Canonical "p/q" text form; integers are written as "p/1".
inline std::string to_string(const Rational& r) {
  Rational c(r);
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0 || r.get_den() == 0) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
  r.canonicalize();
  return r;
}

inline Rational make_rational(std::int64_t p, std::int64_t q = 1) {
  if (q == 0) throw std::invalid_argument("zero denominator");
  Rational r(BigInt(std::to_string(p)), BigInt(std::to_string(q)));
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

/// value <= n^(p/q)  <=>  value^q <= n^p
inline bool at_most_power(std::uint64_t value, const Rational& exponent, std::uint64_t n) {
  BigInt lhs, rhs;
  mpz_ui_pow_ui(lhs.get_mpz_t(), value, exponent.get_den().get_ui());
  mpz_ui_pow_ui(rhs.get_mpz_t(), n, exponent.get_num().get_ui());
  return lhs <= rhs;
}

/// Smallest integer m with m^q >= N^p, i.e. ceil(N^(p/q)).
inline std::uint64_t ceil_power(std::uint64_t n, const Rational& exponent) {
  unsigned long p = exponent.get_num().get_ui();
  unsigned long q = exponent.get_den().get_ui();
  BigInt target;
  mpz_ui_pow_ui(target.get_mpz_t(), n, p);
  BigInt root;
  mpz_root(root.get_mpz_t(), target.get_mpz_t(), q);
  BigInt check;
  mpz_pow_ui(check.get_mpz_t(), root.get_mpz_t(), q);
  if (check < target) root += 1;
  return root.get_ui();
}

}  // namespace joincover
