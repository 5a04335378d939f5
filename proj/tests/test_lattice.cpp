#include <cmath>

#include <gtest/gtest.h>

#include "weil/lattice.hpp"

using namespace weil;

namespace {

// vol(V_g) = (1/g!) * integral over [-2,2]^g of |Vandermonde|, via Selberg's integral.
double selberg_volume(int g) {
  double s = 1;
  for (int j = 0; j < g; ++j)
    s *= std::tgamma(1 + j / 2.0) * std::tgamma(1 + j / 2.0) * std::tgamma(1 + (j + 1) / 2.0) /
         (std::tgamma(2 + (g + j - 1) / 2.0) * std::tgamma(1.5));
  s *= std::pow(4.0, g + g * (g - 1) / 2.0);
  for (int j = 2; j <= g; ++j) s /= j;
  return s;
}

// Walks the whole coefficient box and tests membership point by point.
std::int64_t brute_count(const LatticeSpec& spec) {
  const auto box = coefficient_box(spec.field.q, spec.g);
  const std::int64_t D = spec.F * spec.F;
  WeilCoefficients c(spec.field, std::vector<std::int64_t>(spec.g));
  for (int i = 0; i < spec.g; ++i) c.a[i] = box[i].lo;
  std::int64_t n = 0;
  while (true) {
    bool in = c.a[spec.g - 1] % spec.last_divisor == 0;
    for (int i = 0; i < spec.g; ++i) in &= mod(c.a[i], D) == spec.shift[i];
    n += in && is_weil_fast(c);
    int i = spec.g - 1;
    while (i >= 0 && c.a[i] == box[i].hi) c.a[i] = box[i].lo, --i;
    if (i < 0) break;
    ++c.a[i];
  }
  return n;
}

}  // namespace

TEST(LatticeKind, RoundTrip) {
  for (auto k : {LatticeKind::Lambda, LatticeKind::LambdaPrime, LatticeKind::LambdaDoublePrime})
    EXPECT_EQ(parse_kind(to_string(k)), k);
  EXPECT_THROW(parse_kind("mu"), std::invalid_argument);
}

TEST(QMonomial, ExactCompare) {
  // 4 q^(-1/2) vs 1 at q = 16: equal
  EXPECT_EQ(QMonomial::compare({Rational(4), -1}, {Rational(1), 0}, 16), 0);
  EXPECT_EQ(QMonomial::compare({Rational(4), -1}, {Rational(1), 0}, 17), -1);
  EXPECT_EQ(QMonomial::compare({Rational(2), 1}, {Rational(1), 2}, 3), 1);
  EXPECT_NEAR(QMonomial({Rational(3), -3}).value(4), 3.0 / 8.0, 1e-15);
}

TEST(CountPoints, Examples) {
  auto L = LatticeSpec::make(LatticeKind::Lambda, 25, 1);
  EXPECT_EQ(count_points(L), 21);
  EXPECT_NEAR(4 / L.covolume.value(25), 20, 1e-12);
  auto Lp = LatticeSpec::make(LatticeKind::LambdaPrime, 25, 1);
  EXPECT_EQ(count_points(Lp), 5);
  EXPECT_NEAR(4 / Lp.covolume.value(25), 4, 1e-12);
  auto Ls = LatticeSpec::make(LatticeKind::Lambda, 25, 1, 2, {1});
  EXPECT_EQ(count_points(Ls), 5);
  EXPECT_NEAR(4 / Ls.covolume.value(25), 5, 1e-12);
}

TEST(CountPoints, GenusOneNearPrediction) {
  for (std::int64_t q = 2; q <= 10000; ++q) {
    if (!as_prime_power(q)) continue;
    const auto n = count_points(LatticeSpec::make(LatticeKind::Lambda, q, 1));
    ASSERT_LE(std::abs(static_cast<double>(n) - 4 * std::sqrt(static_cast<double>(q))), 1.0) << q;
  }
}

TEST(CountPoints, MatchesBoxScan) {
  struct Case {
    LatticeKind kind;
    std::int64_t q;
    int g;
    std::int64_t F;
    std::vector<std::int64_t> m;
  };
  const std::vector<Case> cases = {
      {LatticeKind::Lambda, 97, 2, 1, {}},
      {LatticeKind::LambdaPrime, 49, 2, 1, {}},
      {LatticeKind::LambdaDoublePrime, 32, 2, 1, {}},
      {LatticeKind::Lambda, 101, 2, 2, {1, 3}},
      {LatticeKind::LambdaPrime, 125, 2, 3, {4, 0}},
      {LatticeKind::LambdaDoublePrime, 27, 2, 2, {2, 2}},
      {LatticeKind::Lambda, 7, 3, 1, {}},
      {LatticeKind::Lambda, 8, 3, 2, {1, 2, 3}},
      {LatticeKind::LambdaDoublePrime, 9, 3, 1, {}},
      {LatticeKind::LambdaPrime, 9, 3, 1, {}},
      {LatticeKind::LambdaDoublePrime, 8, 3, 2, {0, 1, 0}},
      {LatticeKind::LambdaPrime, 37, 1, 3, {2}},
  };
  for (const auto& c : cases) {
    const auto spec = LatticeSpec::make(c.kind, c.q, c.g, c.F, c.m);
    ASSERT_EQ(count_points(spec), brute_count(spec)) << to_string(c.kind) << " q=" << c.q << " g=" << c.g;
  }
}

TEST(CountPoints, WorkersDoNotChangeCount) {
  const auto spec = LatticeSpec::make(LatticeKind::Lambda, 23, 3, 2, {1, 0, 3});
  EXPECT_EQ(count_points(spec, 1), count_points(spec, 4));
}

TEST(CountPoints, FullLatticeCountsEveryClass) {
  // prime q: every non-ordinary class is a candidate, so the enumeration sees all of them
  for (auto [q, g] : std::vector<std::pair<std::int64_t, int>>{{101, 2}, {13, 3}, {997, 1}}) {
    const auto all = enumerate_with_nonordinary(q, g);
    EXPECT_EQ(count_points(LatticeSpec::make(LatticeKind::Lambda, q, g)), static_cast<std::int64_t>(all.size()));
    std::int64_t ordinary = 0;
    for (const auto& r : all) ordinary += r.ordinary;
    EXPECT_EQ(ordinary_count(q, g, 1, {}), ordinary);
  }
}

TEST(CountPoints, Inclusion) {
  for (std::int64_t q : {9, 25, 49, 64, 81, 121}) {
    const auto L = count_points(LatticeSpec::make(LatticeKind::Lambda, q, 2));
    const auto Lp = count_points(LatticeSpec::make(LatticeKind::LambdaPrime, q, 2));
    const auto Ls = count_points(LatticeSpec::make(LatticeKind::LambdaDoublePrime, q, 2));
    EXPECT_LE(Lp, L);
    EXPECT_LE(Ls, Lp);
  }
}

TEST(CountPoints, ShiftClassesPartition) {
  const std::int64_t q = 61;
  const auto total = count_points(LatticeSpec::make(LatticeKind::Lambda, q, 2));
  std::int64_t sum = 0;
  for (std::int64_t m1 = 0; m1 < 4; ++m1)
    for (std::int64_t m2 = 0; m2 < 4; ++m2) sum += count_points(LatticeSpec::make(LatticeKind::Lambda, q, 2, 2, {m1, m2}));
  EXPECT_EQ(sum, total);
}

TEST(LatticeSpec, Geometry) {
  for (int g = 1; g <= 3; ++g) {
    for (std::int64_t q : {7, 25, 27, 64, 121}) {
      for (std::int64_t F : {1, 2, 6}) {
        for (auto kind : {LatticeKind::Lambda, LatticeKind::LambdaPrime, LatticeKind::LambdaDoublePrime}) {
          const auto s = LatticeSpec::make(kind, q, g, F);
          // covolume is the product of the edges
          Rational prod = 1;
          int he = 0;
          for (const auto& e : s.edges) {
            prod *= e.coef;
            he += e.half_exp;
          }
          ASSERT_TRUE(QMonomial::compare({prod, he}, s.covolume, q) == 0);
          if (g >= 2) {
            if (s.table_mesh_is_bound)
              ASSERT_LE(QMonomial::compare(s.mesh, s.table_mesh, q), 0);
            else
              ASSERT_TRUE(s.mesh.equals(s.table_mesh, q)) << to_string(kind) << " q=" << q << " g=" << g;
          }
        }
      }
    }
  }
  // prime field, g = 2: the last edge p * p^(-1) dominates
  const auto s = LatticeSpec::make(LatticeKind::LambdaPrime, 7, 2, 3);
  EXPECT_TRUE(s.mesh.equals({Rational(9), 0}, 7));
  // g = 1: the divisor lengthens the only edge past the tabulated value
  const auto e = LatticeSpec::make(LatticeKind::LambdaPrime, 25, 1);
  EXPECT_TRUE(e.mesh.equals({Rational(5), -1}, 25));
}

TEST(LatticeSpec, RejectsBadInput) {
  EXPECT_THROW(LatticeSpec::make(LatticeKind::Lambda, 25, 4), UnsupportedDimension);
  EXPECT_THROW(LatticeSpec::make(LatticeKind::Lambda, 25, 2, 0), std::invalid_argument);
  EXPECT_THROW(LatticeSpec::make(LatticeKind::Lambda, 25, 2, 2, {1}), std::invalid_argument);
}

TEST(Volume, GenusOneExact) {
  auto v = volume_Vg(1, 10);
  EXPECT_TRUE(v.exact);
  EXPECT_EQ(v.value, 4);
}

TEST(Volume, SelbergSanity) {
  EXPECT_NEAR(selberg_volume(1), 4, 1e-12);
  EXPECT_NEAR(selberg_volume(2), 32.0 / 3.0, 1e-12);
  EXPECT_NEAR(selberg_volume(3), 1024.0 / 45.0, 1e-10);
}

TEST(Volume, GenusTwoMonteCarlo) {
  auto v = volume_Vg(2, 1'000'000, 7);
  EXPECT_FALSE(v.exact);
  EXPECT_GT(v.std_error, 0);
  EXPECT_LE(std::abs(v.value - 32.0 / 3.0), 3 * v.std_error) << v.value << " +- " << v.std_error;
}

TEST(Volume, GenusThreeMonteCarlo) {
  auto a = volume_Vg(3, 200'000, 1);
  auto b = volume_Vg(3, 200'000, 2);
  const double combined = std::hypot(a.std_error, b.std_error);
  EXPECT_LE(std::abs(a.value - b.value), 4 * combined);
  EXPECT_LE(std::abs(a.value - selberg_volume(3)), 4 * a.std_error) << a.value;
}

TEST(Volume, WorkersAndSeedDeterminism) {
  auto a = volume_Vg(2, 100'000, 5, 1);
  auto b = volume_Vg(2, 100'000, 5, 3);
  EXPECT_EQ(a.value, b.value);
  auto c = volume_Vg(2, 100'000, 6, 1);
  EXPECT_NE(a.value, c.value);
}

TEST(Volume, Reference) {
  for (int g = 1; g <= 3; ++g) {
    EXPECT_TRUE(reference_volume(g).exact);
    EXPECT_NEAR(reference_volume(g).value, selberg_volume(g), 1e-10);
  }
}

TEST(VerifyLattice, SuppliedConstant) {
  std::vector<std::int64_t> qs = {101, 103, 107, 109, 113};
  auto v = verify_prop_lattice(LatticeKind::Lambda, qs, 2, 1, {}, 32.0 / 3.0);
  ASSERT_EQ(v.reports.size(), qs.size());
  for (const auto& r : v.reports) EXPECT_TRUE(r.pass);
  EXPECT_EQ(v.q_min, 101);
  EXPECT_EQ(v.q_max, 113);
  auto tight = verify_prop_lattice(LatticeKind::Lambda, qs, 2, 1, {}, 32.0 / 3.0, v.c_empirical / 2);
  bool any_fail = false;
  for (const auto& r : tight.reports) any_fail |= !r.pass;
  EXPECT_TRUE(any_fail);
}

TEST(VerifyLattice, Csv) {
  auto v = verify_prop_lattice(LatticeKind::LambdaPrime, {25}, 1, 1, {}, 4.0);
  EXPECT_EQ(lattice_csv(v.reports),
            "q,kind,count,prediction,residual,c_empirical,pass\n"
            "25,lambda-prime,5,4.000000,1.000000,1.000000,true\n");
}

TEST(Envelope, RatioAndContainment) {
  const double v2 = 32.0 / 3.0;
  auto e = im_envelope(10007, 2, 1, v2, 1.0);
  EXPECT_GT(e.ratio(), 0.95);
  EXPECT_FALSE(e.pre_asymptotic);
  auto small = im_envelope(101, 2, 1, v2, 1.0);
  const auto n = ordinary_count(101, 2, 1, {});
  EXPECT_TRUE(small.contains(static_cast<double>(n))) << n << " " << small.L << " " << small.R;
}

TEST(Envelope, Q0) {
  std::vector<std::int64_t> ladder = {3, 5, 7, 11};
  std::vector<std::int64_t> counts;
  for (auto q : ladder) counts.push_back(ordinary_count(q, 2, 1, {}));
  auto q0 = measure_q0(ladder, counts, 2, 1, 32.0 / 3.0, 1.0);
  ASSERT_TRUE(q0.has_value());
  EXPECT_LE(*q0, 11);
  EXPECT_THROW(measure_q0(ladder, {1}, 2, 1, 1, 1), std::invalid_argument);
}
