#include "weil/sigma.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <mpfr.h>

namespace weil {

PrimeSet::PrimeSet(std::vector<std::int64_t> primes) : primes_(std::move(primes)) {
  std::sort(primes_.begin(), primes_.end());
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (!is_prime(primes_[i]))
      throw std::invalid_argument(std::to_string(primes_[i]) + " is not prime");
    if (i > 0 && primes_[i] == primes_[i - 1])
      throw std::invalid_argument("prime " + std::to_string(primes_[i]) + " listed twice");
    F_ *= BigInt(primes_[i]);
  }
}

bool PrimeSet::contains(std::int64_t ell) const {
  return std::binary_search(primes_.begin(), primes_.end(), ell);
}

std::string PrimeSet::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(primes_[i]);
  }
  return out;
}

PrimeSet PrimeSet::parse(const std::string& text) {
  std::vector<std::int64_t> primes;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) throw std::invalid_argument("empty entry in prime list '" + text + "'");
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad prime '" + item + "'");
    }
    if (used != item.size()) throw std::invalid_argument("bad prime '" + item + "'");
    primes.push_back(v);
  }
  return PrimeSet(std::move(primes));
}

Rational sigma(const PrimeSet& S, int i) {
  if (i < 1) throw std::invalid_argument("sigma index must be >= 1");
  Rational prod = 1;
  for (auto ell : S.primes()) {
    BigInt li;
    mpz_pow_ui(li.get_mpz_t(), BigInt(ell).get_mpz_t(), static_cast<unsigned long>(i));
    prod *= Rational(li - 1, li);
  }
  prod.canonicalize();
  return prod;
}

SigmaValues sigma_values(const PrimeSet& S) { return {sigma(S, 1), sigma(S, 2), sigma(S, 3)}; }

BoundPair theorem_bounds(const PrimeSet& S) {
  if (S.empty()) throw std::invalid_argument("theorem bounds need a nonempty prime set");
  const auto s = sigma_values(S);
  BoundPair b;
  b.lower = 1 - (1 - s.sigma2) / (1 - s.sigma1);
  b.upper = 1 - (1 - s.sigma3) / (1 - s.sigma1);
  b.lower.canonicalize();
  b.upper.canonicalize();
  return b;
}

PrimeSet prime_set_up_to(std::int64_t N) {
  if (N < 2) throw std::invalid_argument("S(N) is empty for N < 2");
  return PrimeSet(primes_up_to(N));
}

ZetaReciprocal zeta_reciprocal(int i, std::int64_t prime_bound) {
  if (i == 1) throw std::invalid_argument("1/zeta(1) = 0: the Euler product diverges");
  if (i < 2 || i > 3) throw std::invalid_argument("zeta_reciprocal supports i = 2 and i = 3");
  if (prime_bound < 2) throw std::invalid_argument("prime bound must be >= 2");

  // Outward-rounded products: lo rounds every step down, hi every step up.
  mpfr_t lo, hi, term, tmp;
  mpfr_inits2(128, lo, hi, term, tmp, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_ui(lo, 1, MPFR_RNDD);
  mpfr_set_ui(hi, 1, MPFR_RNDU);
  for (auto p : primes_up_to(prime_bound)) {
    // term = p^-i rounded up gives 1 - term rounded down, and vice versa
    mpfr_set_ui(tmp, static_cast<unsigned long>(p), MPFR_RNDN);
    mpfr_pow_si(term, tmp, -i, MPFR_RNDU);
    mpfr_ui_sub(term, 1, term, MPFR_RNDD);
    mpfr_mul(lo, lo, term, MPFR_RNDD);
    mpfr_pow_si(term, tmp, -i, MPFR_RNDD);
    mpfr_ui_sub(term, 1, term, MPFR_RNDU);
    mpfr_mul(hi, hi, term, MPFR_RNDU);
  }
  ZetaReciprocal z;
  z.i = i;
  z.prime_bound = prime_bound;
  z.partial_product = mpfr_get_d(hi, MPFR_RNDN);
  z.upper = mpfr_get_d(hi, MPFR_RNDU);

  // Missing factors lie in [1 - sum_{n>B} n^-i, 1] and the sum is < B^(1-i)/(i-1).
  mpfr_set_ui(tmp, static_cast<unsigned long>(prime_bound), MPFR_RNDN);
  mpfr_pow_si(term, tmp, 1 - i, MPFR_RNDU);
  mpfr_div_ui(term, term, static_cast<unsigned long>(i - 1), MPFR_RNDU);
  mpfr_ui_sub(term, 1, term, MPFR_RNDD);
  mpfr_mul(lo, lo, term, MPFR_RNDD);
  z.lower = mpfr_get_d(lo, MPFR_RNDD);
  mpfr_clears(lo, hi, term, tmp, static_cast<mpfr_ptr>(nullptr));
  return z;
}

std::vector<StabilizationRow> bound_stabilization_table(std::int64_t Nmax) {
  if (Nmax < 2) throw std::invalid_argument("Nmax must be >= 2");
  std::vector<StabilizationRow> rows;
  Rational s1 = 1, s2 = 1, s3 = 1;
  for (auto ell : primes_up_to(Nmax)) {
    const BigInt l(ell);
    s1 *= Rational(l - 1, l);
    s2 *= Rational(l * l - 1, l * l);
    s3 *= Rational(l * l * l - 1, l * l * l);
    StabilizationRow row;
    row.N = ell;
    row.lower = 1 - (1 - s2) / (1 - s1);
    row.upper = 1 - (1 - s3) / (1 - s1);
    row.lower.canonicalize();
    row.upper.canonicalize();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string stabilization_csv(const std::vector<StabilizationRow>& rows, int digits) {
  std::string out = "N,lower,upper\n";
  for (const auto& r : rows)
    out += std::to_string(r.N) + "," + to_decimal(r.lower, digits) + "," + to_decimal(r.upper, digits) + "\n";
  return out;
}

}  // namespace weil
