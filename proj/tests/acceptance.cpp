// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance            run all criteria
//   acceptance --criterion N

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "weil/census.hpp"
#include "weil/lattice.hpp"

using namespace weil;

namespace {

// tolerances
constexpr double kBoundTol = 0.005;         // S(557) bounds vs (0.57, 0.815)
constexpr double kZetaTol = 1e-3;           // 1/zeta(i) vs 0.6079, 0.8319
constexpr double kLimitTol = 0.02;          // single-prime limits
constexpr double kNontrivialTol = 0.02;         // nontrivial l-part fraction vs 1/l
constexpr double kContainmentSlack = 0.03;  // widening of the bound pair
constexpr double kLatticeResidual = 1.0;    // |count - 4 sqrt(q)|
constexpr double kEnvelopeRatio = 0.95;     // L/R beyond 10^4

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> failures;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

std::string fixed(double x, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

// q spread evenly over a sorted list
std::vector<std::int64_t> spread(const std::vector<std::int64_t>& all, std::size_t n) {
  std::vector<std::int64_t> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(all[k * (all.size() - 1) / (n - 1)]);
  return out;
}

// the n primes closest to `centre` satisfying `keep`, ascending
std::vector<std::int64_t> primes_near(std::int64_t centre, std::size_t n,
                                      const std::function<bool(std::int64_t)>& keep) {
  std::vector<std::int64_t> out;
  auto take = [&](std::int64_t q) {
    if (out.size() < n && q > 2 && is_prime(q) && keep(q)) out.push_back(q);
  };
  take(centre);
  for (std::int64_t d = 1; out.size() < n; ++d) {
    take(centre - d);
    take(centre + d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double as_double(const Rational& r) { return r.get_d(); }

// 1: bound pairs for S(2) and S(557)
Outcome criterion1() {
  Outcome o;
  const auto b2 = theorem_bounds(prime_set_up_to(2));
  o.require(b2.lower == Rational(1, 2) && b2.upper == Rational(3, 4), "S(2) bounds are (1/2, 3/4)");
  const auto b557 = theorem_bounds(prime_set_up_to(557));
  const double lo = as_double(b557.lower), hi = as_double(b557.upper);
  o.require(std::abs(lo - 0.57) < kBoundTol && std::abs(hi - 0.815) < kBoundTol, "S(557) bounds near (0.57, 0.815)");
  o.detail << "S(2)=(" << to_string(b2.lower) << ", " << to_string(b2.upper) << ") S(557)=(" << fixed(lo) << ", "
           << fixed(hi) << ")";
  return o;
}

// a decimal written with `digits` places stands for the interval of reals rounding to it
bool enclosure_covers(const ZetaReciprocal& z, double written, int digits) {
  const double half = 0.5 * std::pow(10.0, -digits);
  return z.lower <= written + half && written - half <= z.upper;
}

// 2: Euler products for 1/zeta(2), 1/zeta(3)
Outcome criterion2() {
  Outcome o;
  const auto z2 = zeta_reciprocal(2, 1'000'000);
  const auto z3 = zeta_reciprocal(3, 1'000'000);
  o.require(std::abs(z2.value() - 0.6079) <= kZetaTol, "1/zeta(2) within 1e-3 of 0.6079");
  o.require(std::abs(z3.value() - 0.8319) <= kZetaTol, "1/zeta(3) within 1e-3 of 0.8319");
  o.require(enclosure_covers(z2, 0.6, 1), "enclosure of 1/zeta(2) covers 0.6");
  o.require(enclosure_covers(z3, 0.833, 3), "enclosure of 1/zeta(3) covers 0.833");
  o.detail << "1/zeta(2) in [" << fixed(z2.lower, 7) << ", " << fixed(z2.upper, 7) << "] 1/zeta(3) in ["
           << fixed(z3.lower, 7) << ", " << fixed(z3.upper, 7) << "]";
  return o;
}

// 3: single-prime limits, g = 1
Outcome criterion3() {
  Outcome o;
  struct Ladder {
    std::int64_t ell;
    std::function<bool(std::int64_t)> keep;
    double target;
    const char* name;
  };
  const std::vector<Ladder> ladders = {
      {2, [](std::int64_t) { return true; }, 0.5, "l=2"},
      {3, [](std::int64_t q) { return q % 3 == 2; }, 8.0 / 9.0, "l=3 q=2(3)"},
      {3, [](std::int64_t q) { return q % 3 == 1; }, 2.0 / 3.0, "l=3 q=1(3)"},
  };
  for (const auto& l : ladders) {
    const auto qs = primes_near(10'000, 50, l.keep);
    const auto rows = limits_ladder(l.ell, 1, qs, EnumerationMode::OrdinaryOnly);
    double sum = 0;
    for (const auto& r : rows) sum += r.fraction ? as_double(*r.fraction) : 0;
    const double mean = sum / static_cast<double>(rows.size());
    o.detail << l.name << ": " << fixed(mean) << " (target " << fixed(l.target) << ") ";
    o.require(std::abs(mean - l.target) <= kLimitTol, std::string(l.name) + " mean within 0.02");
  }
  return o;
}

struct Config {
  std::int64_t q;
  int g;
  PrimeSet S;
  SetCensus census;
};

// configurations of criteria 4 and 6, shared with 9
std::vector<Config>& nontrivial_configs() {
  static std::vector<Config> configs = [] {
    std::vector<Config> out;
    const std::vector<PrimeSet> sets = {PrimeSet({2}), PrimeSet({3}), PrimeSet({5})};
    const auto qs = primes_near(1000, 20, [](std::int64_t) { return true; });
    for (int g = 1; g <= 2; ++g)
      for (auto q : qs) {
        auto cs = census_pass(q, g, sets, EnumerationMode::OrdinaryOnly);
        for (std::size_t k = 0; k < sets.size(); ++k) out.push_back({q, g, sets[k], cs[k]});
      }
    return out;
  }();
  return configs;
}

std::vector<Config>& containment_configs() {
  static std::vector<Config> configs = [] {
    std::vector<Config> out;
    const std::vector<PrimeSet> sets = {PrimeSet({2}), PrimeSet({3}), PrimeSet({2, 3})};
    const auto qs = spread(prime_powers_in(1000, 10'000), 20);
    for (int g = 1; g <= 2; ++g)
      for (auto q : qs) {
        auto cs = census_pass(q, g, sets, EnumerationMode::OrdinaryOnly);
        for (std::size_t k = 0; k < sets.size(); ++k) out.push_back({q, g, sets[k], cs[k]});
      }
    return out;
  }();
  return configs;
}

std::vector<Config>& residue_configs() {
  static std::vector<Config> configs = [] {
    std::vector<Config> out;
    const std::vector<PrimeSet> sets = {PrimeSet({2}), PrimeSet({3}), PrimeSet({5}), PrimeSet({2, 3})};
    for (int g = 2; g <= 3; ++g)
      for (std::int64_t q : {4, 5, 7, 9, 11, 13}) {
        auto cs = census_pass(q, g, sets, EnumerationMode::WithCandidates);
        for (std::size_t k = 0; k < sets.size(); ++k) out.push_back({q, g, sets[k], cs[k]});
      }
    return out;
  }();
  return configs;
}

// 4: fraction of classes with a non-trivial l-part
Outcome criterion4() {
  Outcome o;
  std::map<std::pair<int, std::int64_t>, std::pair<double, int>> acc;
  for (const auto& c : nontrivial_configs()) {
    auto& [sum, n] = acc[{c.g, c.S.primes().front()}];
    sum += static_cast<double>(c.census.summary.n_nontrivial) / static_cast<double>(c.census.summary.n_total);
    ++n;
  }
  for (const auto& [key, v] : acc) {
    const auto [g, ell] = key;
    const double mean = v.first / v.second;
    o.detail << "g=" << g << " l=" << ell << ": " << fixed(mean) << " ";
    o.require(std::abs(mean - 1.0 / static_cast<double>(ell)) <= kNontrivialTol,
              "g=" + std::to_string(g) + " l=" + std::to_string(ell) + " within 0.02 of 1/l");
  }
  return o;
}

// 5: residue counts against their closed forms
Outcome criterion5() {
  Outcome o;
  int checked = 0;
  for (int g = 2; g <= 3; ++g) {
    for (std::int64_t q : {4, 5, 7, 9, 11, 13}) {
      for (std::int64_t ell : {2, 3, 5}) {
        if (q % ell == 0) continue;
        const auto formula = local_solution_formula(q, g, ell);
        const auto measured = local_solution_count(q, g, ell);
        o.require(formula && *formula == measured,
                  "local count q=" + std::to_string(q) + " g=" + std::to_string(g) + " l=" + std::to_string(ell));
        ++checked;
      }
      for (const auto& S : {PrimeSet({2}), PrimeSet({3}), PrimeSet({5}), PrimeSet({2, 3}), PrimeSet({2, 5}),
                            PrimeSet({3, 5})}) {
        bool coprime = true;
        for (auto ell : S.primes()) coprime &= q % ell != 0;
        if (!coprime) continue;
        BigInt space = 1;
        for (int i = 0; i < g; ++i) space *= S.F() * S.F();
        const Rational expected = Rational(space) * (1 - sigma(S, 1));
        const auto n = count_nontrivial_residues(q, g, S);
        o.require(Rational(n) == expected, "nontrivial residues q=" + std::to_string(q) + " g=" + std::to_string(g) +
                                               " S=" + S.to_string());
        ++checked;
      }
    }
  }
  o.detail << checked << " exact identities";
  return o;
}

// 6: cyclic ratios inside the bound pair
Outcome criterion6() {
  Outcome o;
  int inside = 0, total = 0;
  for (const auto& c : containment_configs()) {
    const auto& s = c.census.summary;
    ++total;
    if (!s.fraction_cyclic) {
      o.require(false, "no nontrivial class at q=" + std::to_string(c.q));
      continue;
    }
    const double ratio = as_double(*s.fraction_cyclic);
    const bool ok = as_double(s.bound_lower) - kContainmentSlack <= ratio &&
                    ratio <= as_double(s.bound_upper) + kContainmentSlack;
    inside += ok;
    if (!ok)
      o.require(false, "q=" + std::to_string(c.q) + " g=" + std::to_string(c.g) + " S=" + c.S.to_string() +
                           " ratio " + fixed(ratio) + " outside [" + fixed(as_double(s.bound_lower)) + ", " +
                           fixed(as_double(s.bound_upper)) + "]");
  }
  o.detail << inside << "/" << total << " ratios inside the widened bound pair";
  return o;
}

// 7: gcd criterion against every elliptic curve over F_q, q <= 50
Outcome criterion7() {
  Outcome o;
  std::int64_t classes = 0, mismatches = 0;
  for (std::int64_t q = 3; q <= 50; ++q) {
    if (!is_prime(q)) continue;
    const auto oracle = elliptic_oracle(q);
    const auto max_order = q + 1 + 2 * isqrt(q) + 1;
    const auto ells = primes_up_to(max_order);
    for_each_record(q, 1, EnumerationMode::OrdinaryOnly, [&](const IsogenyClassRecord& rec) {
      ++classes;
      const auto& shapes = oracle.at(rec.coeffs.a[0]);
      for (auto ell : ells) {
        bool noncyclic = false, divides = false;
        for (const auto& s : shapes) {
          noncyclic |= !s.ell_part_cyclic(ell);
          divides |= s.order() % ell == 0;
        }
        const auto status = ell_verdict(rec, ell).status;
        mismatches += (status == CyclicityStatus::NonCyclic) != noncyclic;
        mismatches += (status == CyclicityStatus::TrivialPart) == divides;
      }
    });
  }
  o.require(mismatches == 0, "verdicts match the curve census");
  o.detail << classes << " classes, " << mismatches << " mismatches";
  return o;
}

// 8: lattice counts and the L/R envelope, g = 1, F = 1
Outcome criterion8() {
  Outcome o;
  const auto ladder = prime_powers_in(2, 10'007);
  double worst = 0, c = 0;
  for (auto q : ladder) {
    const auto n = count_points(LatticeSpec::make(LatticeKind::Lambda, q, 1));
    worst = std::max(worst, std::abs(static_cast<double>(n) - 4 * std::sqrt(static_cast<double>(q))));
  }
  o.require(worst <= kLatticeResidual, "|count - 4 sqrt q| <= 1");
  // c(1, 1) is the largest normalized residual of Lambda and Lambda' over the ladder
  for (auto kind : {LatticeKind::Lambda, LatticeKind::LambdaPrime})
    c = std::max(c, verify_prop_lattice(kind, ladder, 1, 1, {}, 4.0).c_empirical);

  std::vector<std::int64_t> counts;
  for (auto q : ladder) {
    std::int64_t n = 0;
    for_each_record(q, 1, EnumerationMode::OrdinaryOnly, [&](const IsogenyClassRecord&) { ++n; });
    counts.push_back(n);
  }
  const auto q0 = measure_q0(ladder, counts, 1, 1, 4.0, c);
  o.require(q0.has_value(), "counts inside the envelope from some q0 on");
  const auto e = im_envelope(10'007, 1, 1, 4.0, c);
  o.require(e.ratio() > kEnvelopeRatio, "L/R > 0.95 at q = 10007");
  o.detail << "max residual " << fixed(worst) << ", c=" << fixed(c) << ", q0=" << (q0 ? std::to_string(*q0) : "none")
           << ", L/R(10007)=" << fixed(e.ratio());
  return o;
}

// 9: partition identity for every configuration of criteria 4-6
Outcome criterion9() {
  Outcome o;
  int checked = 0;
  for (auto* configs : {&nontrivial_configs(), &residue_configs(), &containment_configs()}) {
    for (const auto& c : *configs) {
      ++checked;
      if (!c.census.partition_holds())
        o.require(false, "q=" + std::to_string(c.q) + " g=" + std::to_string(c.g) + " S=" + c.S.to_string());
    }
  }
  o.detail << checked << " configurations";
  return o;
}

const std::vector<std::pair<const char*, Outcome (*)()>> kCriteria = {
    {"bound table", criterion1},        {"zeta limits", criterion2},       {"single-prime limits", criterion3},
    {"nontrivial fraction", criterion4}, {"residue formulas", criterion5},  {"bound containment", criterion6},
    {"gcd criterion", criterion7},       {"lattice envelope", criterion8}, {"partition identity", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) only = std::atoi(argv[++i]);
  if (only < 0 || only > static_cast<int>(kCriteria.size())) {
    std::cerr << "criterion must be 1.." << kCriteria.size() << "\n";
    return 2;
  }
  int failed = 0;
  for (std::size_t k = 0; k < kCriteria.size(); ++k) {
    if (only && static_cast<int>(k) + 1 != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = kCriteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << " (" << kCriteria[k].first << ", "
              << fixed(secs, 1) << " s): " << o.detail.str() << std::endl;
    for (const auto& f : o.failures) std::cout << "  failed: " << f << std::endl;
  }
  return failed ? 1 : 0;
}
