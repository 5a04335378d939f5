#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace weil {

using BigInt = mpz_class;
using Rational = mpq_class;
using i128 = __int128;

/// Raised when a fixed-width computation would overflow.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Raised when a requested computation exceeds a hard work cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 addition overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 multiplication overflow");
  return r;
}

std::int64_t checked_pow(std::int64_t base, int exp);

/// Floor of the square root of n >= 0.
std::int64_t isqrt(std::int64_t n);
/// Smallest x >= 0 with x*x >= n.
std::int64_t ceil_sqrt(std::int64_t n);

/// Floor division and non-negative remainder (mathematical convention).
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }
inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

bool is_prime(std::int64_t n);

struct PrimePower {
  std::int64_t p;
  int r;
};

/// Decomposes q = p^r; nullopt when q is not a prime power.
std::optional<PrimePower> as_prime_power(std::int64_t q);

/// Distinct prime divisors, ascending (trial division).
std::vector<std::int64_t> prime_divisors(std::int64_t n);

/// Product of the distinct primes dividing n; radical(1) == 1.
std::int64_t radical(std::int64_t n);

std::int64_t euler_phi(std::int64_t n);

std::int64_t gcd(std::int64_t a, std::int64_t b);

/// Primes <= n by the sieve of Eratosthenes.
std::vector<std::int64_t> primes_up_to(std::int64_t n);

std::int64_t binomial(int n, int k);

/// Count of integers x in [lo, hi] with x ≡ r (mod m).
std::int64_t count_in_class(std::int64_t lo, std::int64_t hi, std::int64_t r, std::int64_t m);

/// Renders an exact rational as a decimal string with `digits` places,
/// rounding half away from zero.
std::string to_decimal(const Rational& x, int digits);

std::string to_string(const BigInt& x);
std::string to_string(const Rational& x);

}  // namespace weil
