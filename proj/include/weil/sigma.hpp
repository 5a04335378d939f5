#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weil/arith.hpp"

namespace weil {

/// Finite set S of distinct primes, kept sorted, with F = prod(S).
class PrimeSet {
 public:
  PrimeSet() = default;
  /// Sorts and validates; throws std::invalid_argument on a non-prime or a repeat.
  explicit PrimeSet(std::vector<std::int64_t> primes);

  const std::vector<std::int64_t>& primes() const { return primes_; }
  const BigInt& F() const { return F_; }
  bool empty() const { return primes_.empty(); }
  std::size_t size() const { return primes_.size(); }
  bool contains(std::int64_t ell) const;

  /// "2,3,5"
  std::string to_string() const;
  /// Parses "2,3,5"; throws std::invalid_argument.
  static PrimeSet parse(const std::string& text);

  friend bool operator==(const PrimeSet&, const PrimeSet&) = default;

 private:
  std::vector<std::int64_t> primes_;
  BigInt F_ = 1;
};

/// sigma_i(S) = prod over S of (1 - l^-i); exact.
Rational sigma(const PrimeSet& S, int i);

struct SigmaValues {
  Rational sigma1, sigma2, sigma3;
};
SigmaValues sigma_values(const PrimeSet& S);

struct BoundPair {
  Rational lower;  // 1 - (1 - sigma2) / (1 - sigma1)
  Rational upper;  // 1 - (1 - sigma3) / (1 - sigma1)
};

/// Throws std::invalid_argument for empty S.
BoundPair theorem_bounds(const PrimeSet& S);

/// S(N) = { l prime : l <= N }. Throws std::invalid_argument for N < 2.
PrimeSet prime_set_up_to(std::int64_t N);

/// Certified enclosure of 1/zeta(i) from the Euler product over primes <= bound.
struct ZetaReciprocal {
  int i = 0;
  std::int64_t prime_bound = 0;
  double partial_product = 0;  // prod over p <= bound of (1 - p^-i)
  double lower = 0;
  double upper = 0;
  double value() const { return (lower + upper) / 2; }
  double error() const { return (upper - lower) / 2; }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

/// i in {2, 3}; i = 1 is rejected (the product diverges to 0).
ZetaReciprocal zeta_reciprocal(int i, std::int64_t prime_bound);

struct StabilizationRow {
  std::int64_t N = 0;
  Rational lower, upper;
};

/// One row per prime N <= Nmax, bounds for S(N).
std::vector<StabilizationRow> bound_stabilization_table(std::int64_t Nmax);

/// CSV "N,lower,upper" with the given number of decimals.
std::string stabilization_csv(const std::vector<StabilizationRow>& rows, int digits = 6);

}  // namespace weil
