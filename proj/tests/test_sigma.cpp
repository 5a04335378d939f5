#include <cmath>

#include <gtest/gtest.h>

#include "weil/sigma.hpp"

using namespace weil;

namespace {

constexpr double kInvZeta2 = 0.60792710185402662866;  // 6 / pi^2
constexpr double kInvZeta3 = 0.83190737258070746868;  // 1 / 1.2020569031595942854

}  // namespace

TEST(PrimeSet, ProductAndOrder) {
  PrimeSet s({5, 2, 3});
  EXPECT_EQ(s.primes(), (std::vector<std::int64_t>{2, 3, 5}));
  EXPECT_EQ(s.F(), 30);
  EXPECT_EQ(s.to_string(), "2,3,5");
  EXPECT_EQ(PrimeSet::parse("3,2"), PrimeSet({2, 3}));
  EXPECT_THROW(PrimeSet({2, 4}), std::invalid_argument);
  EXPECT_THROW(PrimeSet({3, 3}), std::invalid_argument);
  EXPECT_THROW(PrimeSet::parse("2,,3"), std::invalid_argument);
  EXPECT_THROW(PrimeSet::parse("2,x"), std::invalid_argument);
}

TEST(Sigma, Examples) {
  EXPECT_EQ(sigma(PrimeSet({2}), 1), Rational(1, 2));
  EXPECT_EQ(sigma(PrimeSet({2}), 2), Rational(3, 4));
  EXPECT_EQ(sigma(PrimeSet({2}), 3), Rational(7, 8));
  EXPECT_EQ(sigma(PrimeSet({2, 3}), 1), Rational(1, 3));
  EXPECT_EQ(sigma(PrimeSet(), 2), Rational(1));
}

TEST(Sigma, Ordering) {
  for (std::int64_t N : {2, 3, 10, 100, 557}) {
    auto s = sigma_values(prime_set_up_to(N));
    EXPECT_LT(0, s.sigma1);
    EXPECT_LT(s.sigma1, s.sigma2);
    EXPECT_LT(s.sigma2, s.sigma3);
    EXPECT_LT(s.sigma3, 1);
  }
}

TEST(TheoremBounds, Examples) {
  auto b2 = theorem_bounds(PrimeSet({2}));
  EXPECT_EQ(b2.lower, Rational(1, 2));
  EXPECT_EQ(b2.upper, Rational(3, 4));
  for (std::int64_t ell : {3, 5, 7, 101}) {
    auto b = theorem_bounds(PrimeSet({ell}));
    EXPECT_EQ(b.lower, Rational(ell - 1, ell));
    EXPECT_EQ(b.upper, Rational(ell * ell - 1, ell * ell));
  }
  auto big = theorem_bounds(prime_set_up_to(557));
  EXPECT_NEAR(big.lower.get_d(), 0.57, 0.005);
  EXPECT_NEAR(big.upper.get_d(), 0.815, 0.005);
  EXPECT_THROW(theorem_bounds(PrimeSet()), std::invalid_argument);
}

TEST(TheoremBounds, WithinUnitInterval) {
  for (std::int64_t N = 2; N <= 200; ++N) {
    if (!is_prime(N)) continue;
    auto b = theorem_bounds(prime_set_up_to(N));
    ASSERT_LE(0, b.lower);
    ASSERT_LE(b.lower, b.upper);
    ASSERT_LE(b.upper, 1);
  }
}

TEST(PrimeSetUpTo, Examples) {
  EXPECT_EQ(prime_set_up_to(2).primes(), (std::vector<std::int64_t>{2}));
  EXPECT_EQ(prime_set_up_to(10).primes(), (std::vector<std::int64_t>{2, 3, 5, 7}));
  // independent count by trial division
  int count = 0;
  for (int n = 2; n <= 557; ++n) {
    bool prime = true;
    for (int d = 2; d * d <= n; ++d)
      if (n % d == 0) prime = false;
    count += prime;
  }
  EXPECT_EQ(count, 102);
  EXPECT_EQ(prime_set_up_to(557).size(), 102u);
  EXPECT_THROW(prime_set_up_to(1), std::invalid_argument);
}

TEST(ZetaReciprocal, EnclosesKnownConstants) {
  auto z2 = zeta_reciprocal(2, 1'000'000);
  EXPECT_TRUE(z2.contains(kInvZeta2));
  EXPECT_NEAR(z2.value(), 0.6079, 1e-4);
  EXPECT_LT(z2.error(), 1e-5);
  auto z3 = zeta_reciprocal(3, 1'000'000);
  EXPECT_TRUE(z3.contains(kInvZeta3));
  EXPECT_NEAR(z3.value(), 0.8319, 1e-4);
}

TEST(ZetaReciprocal, SmallBoundIsWide) {
  auto z = zeta_reciprocal(2, 2);
  EXPECT_DOUBLE_EQ(z.partial_product, 0.75);
  EXPECT_TRUE(z.contains(kInvZeta2));
  EXPECT_GT(z.error(), 0.1);
}

TEST(ZetaReciprocal, MatchesPlainProduct) {
  for (int i : {2, 3}) {
    for (std::int64_t b : {10, 1000, 100000}) {
      long double prod = 1;
      for (auto p : primes_up_to(b)) prod *= 1 - std::pow(static_cast<long double>(p), -i);
      auto z = zeta_reciprocal(i, b);
      EXPECT_NEAR(z.partial_product, static_cast<double>(prod), 1e-12);
      EXPECT_LE(z.lower, static_cast<double>(prod));
      EXPECT_GE(z.upper, static_cast<double>(prod) - 1e-15);
    }
  }
}

TEST(ZetaReciprocal, RejectsDivergentCase) {
  EXPECT_THROW(zeta_reciprocal(1, 100), std::invalid_argument);
}

TEST(StabilizationTable, RowsAndConvergence) {
  auto rows = bound_stabilization_table(1000);
  ASSERT_EQ(rows.front().N, 2);
  EXPECT_EQ(rows.front().lower, Rational(1, 2));
  EXPECT_EQ(rows.front().upper, Rational(3, 4));
  // S = {2,3}: sigma = (1/3, 2/3, 182/216)
  EXPECT_EQ(rows[1].N, 3);
  EXPECT_EQ(rows[1].lower, 1 - (1 - Rational(2, 3)) / (1 - Rational(1, 3)));
  EXPECT_EQ(rows[1].upper, 1 - (1 - Rational(7 * 26, 8 * 27)) / (1 - Rational(1, 3)));
  // lower = (sigma2 - sigma1) / (1 - sigma1) <= sigma2, and sigma_i(S(N)) decreases
  // toward 1/zeta(i)
  for (const auto& r : rows) {
    const auto S = prime_set_up_to(r.N);
    auto b = theorem_bounds(S);
    ASSERT_EQ(r.lower, b.lower);
    ASSERT_EQ(r.upper, b.upper);
    auto s = sigma_values(S);
    ASSERT_LE(r.lower, s.sigma2);
    ASSERT_LE(r.upper, s.sigma3);
    ASSERT_GT(s.sigma2.get_d(), kInvZeta2);
    ASSERT_GT(s.sigma3.get_d(), kInvZeta3);
  }
}

TEST(StabilizationTable, Csv) {
  auto csv = stabilization_csv(bound_stabilization_table(3));
  EXPECT_EQ(csv, "N,lower,upper\n2,0.500000,0.750000\n3,0.500000,0.763889\n");
}
