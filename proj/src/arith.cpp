#include "weil/arith.hpp"

#include <cmath>
#include <cstdlib>

namespace weil {

std::int64_t checked_pow(std::int64_t base, int exp) {
  if (exp < 0) throw std::invalid_argument("negative exponent");
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("isqrt of negative value");
  auto x = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (x > 0 && static_cast<i128>(x) * x > n) --x;
  while (static_cast<i128>(x + 1) * (x + 1) <= n) ++x;
  return x;
}

std::int64_t ceil_sqrt(std::int64_t n) {
  std::int64_t x = isqrt(n);
  return static_cast<i128>(x) * x == n ? x : x + 1;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  for (std::int64_t d = 5; d <= n / d; d += 6) {
    if (n % d == 0 || n % (d + 2) == 0) return false;
  }
  return true;
}

std::optional<PrimePower> as_prime_power(std::int64_t q) {
  if (q < 2) return std::nullopt;
  auto primes = prime_divisors(q);
  if (primes.size() != 1) return std::nullopt;
  PrimePower pp{primes.front(), 0};
  while (q > 1) {
    q /= pp.p;
    ++pp.r;
  }
  return pp;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("prime_divisors requires n >= 1");
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d <= n / d; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::int64_t radical(std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("radical requires n >= 1, got " + std::to_string(n));
  std::int64_t r = 1;
  for (auto p : prime_divisors(n)) r *= p;
  return r;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t r = n;
  for (auto p : prime_divisors(n)) r = r / p * (p - 1);
  return r;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::int64_t count_in_class(std::int64_t lo, std::int64_t hi, std::int64_t r, std::int64_t m) {
  if (hi < lo) return 0;
  // x = r + k m, lo <= x <= hi
  return floor_div(hi - r, m) - ceil_div(lo - r, m) + 1;
}

std::string to_decimal(const Rational& x, int digits) {
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Rational scaled = abs(x) * scale;
  // round half up on the magnitude
  BigInt num = scaled.get_num() * 2 + scaled.get_den();
  BigInt den = scaled.get_den() * 2;
  BigInt q = num / den;
  BigInt whole = q / scale;
  BigInt frac = q % scale;
  std::string f = frac.get_str();
  if (static_cast<int>(f.size()) < digits) f.insert(0, digits - f.size(), '0');
  std::string out = (sgn(x) < 0 && q != 0) ? "-" : "";
  out += whole.get_str();
  if (digits > 0) out += "." + f;
  return out;
}

std::string to_string(const BigInt& x) { return x.get_str(); }

std::string to_string(const Rational& x) { return x.get_str(); }

}  // namespace weil
