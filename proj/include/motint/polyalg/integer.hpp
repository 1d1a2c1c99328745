#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace motint {

/// Arbitrary precision integers and rationals. Every exact quantity in the
/// library (polynomial coefficients, counts, volumes) is one of these.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Integer ipow(Integer base, unsigned long exp) {
  Integer result = 1;
  while (exp > 0) {
    if (exp & 1U) result *= base;
    exp >>= 1U;
    if (exp > 0) base *= base;
  }
  return result;
}

/// q^k for possibly negative k, as an exact rational.
inline Rational qpow(const Integer& q, long k) {
  if (k >= 0) return Rational(ipow(q, static_cast<unsigned long>(k)));
  return Rational(Integer(1), ipow(q, static_cast<unsigned long>(-k)));
}

/// Euclidean remainder in [0, m).
inline Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

/// "a" for integers, "a/b" otherwise.
inline std::string to_string(const Rational& r) {
  const Integer& num = boost::multiprecision::numerator(r);
  const Integer& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline std::string to_string(const Integer& z) { return z.str(); }

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Returns (p, m) with q = p^m, or throws when q is not a prime power.
inline std::pair<std::uint64_t, unsigned> prime_power_decompose(std::uint64_t q) {
  if (q < 2) throw MathError("not a prime power: " + std::to_string(q));
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0) return {q, 1};
  unsigned m = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++m;
  }
  if (r != 1) throw MathError("not a prime power: " + std::to_string(q));
  return {p, m};
}

/// Residue of an element of Z[1/q] modulo q - 1. Since q = 1 mod (q - 1),
/// a / d with d | q^k maps to a * (q^k / d).
inline Integer residue_mod_q_minus_1(const Rational& r, const Integer& q) {
  const Integer modulus = q - 1;
  if (modulus == 1) return 0;
  const Integer& num = boost::multiprecision::numerator(r);
  const Integer& den = boost::multiprecision::denominator(r);
  Integer qk = 1;
  int guard = 0;
  while (qk % den != 0) {
    qk *= q;
    if (++guard > 4096) throw MathError("denominator " + den.str() + " is not a divisor of a power of q");
  }
  return mod_floor(num * (qk / den), modulus);
}

}  // namespace motint
