#include "weil/census.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "weil/lattice.hpp"

namespace weil {

namespace {

constexpr std::int64_t kMaxHistogram = 1'000'000;

bool histogram_fits(const PrimeSet& S, int g) {
  BigInt size = 1;
  for (int i = 0; i < g; ++i) size *= S.F() * S.F();
  return size <= kMaxHistogram;
}

struct Partial {
  std::vector<Classifier> classifiers;
  std::vector<std::optional<ResidueHistogram>> histograms;
};

}  // namespace

std::vector<SetCensus> census_pass(std::int64_t q, int g, const std::vector<PrimeSet>& sets,
                                   EnumerationMode mode, int workers) {
  for (const auto& S : sets)
    if (S.empty()) throw std::invalid_argument("prime sets must be nonempty");
  require_within_cap(q, g);
  const auto parts = a1_partitions(q, g, std::max(1, workers) * 4);
  std::vector<Partial> partial(parts.size());
  run_partitioned(parts, workers, [&](std::size_t i, IntRange r) {
    auto& p = partial[i];
    for (const auto& S : sets) {
      p.classifiers.emplace_back(S);
      if (histogram_fits(S, g))
        p.histograms.emplace_back(ResidueHistogram(q, g, S));
      else
        p.histograms.emplace_back();
    }
    enumerate_range(q, g, mode, r, [&](const IsogenyClassRecord& rec) {
      for (std::size_t k = 0; k < sets.size(); ++k) {
        p.classifiers[k].add(rec);
        if (p.histograms[k]) p.histograms[k]->add(rec);
      }
    });
  });

  std::vector<SetCensus> out;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    Classifier total(sets[k]);
    std::optional<ResidueHistogram> hist;
    if (histogram_fits(sets[k], g)) hist.emplace(q, g, sets[k]);
    for (const auto& p : partial) {
      total.merge(p.classifiers[k]);
      if (hist) hist->merge(*p.histograms[k]);
    }
    SetCensus c;
    c.summary = total.summary(q, g, mode);
    c.per_ell_nontrivial = total.per_ell_nontrivial();
    c.per_ell_noncyclic = total.per_ell_noncyclic();
    if (hist) {
      c.partition_nontrivial = hist->sum_over_nontrivial();
      c.partition_noncyclic = hist->sum_over_noncyclic();
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::int64_t> prime_powers_in(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t q = std::max<std::int64_t>(lo, 2); q <= hi; ++q)
    if (as_prime_power(q)) out.push_back(q);
  return out;
}

std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t q = std::max<std::int64_t>(lo, 2); q <= hi; ++q)
    if (is_prime(q)) out.push_back(q);
  return out;
}

Rational single_ell_limit(std::int64_t ell, std::int64_t q) {
  if (mod(q - 1, ell) == 0) return Rational(ell - 1, ell);
  Rational r(ell * ell - 1, ell * ell);
  r.canonicalize();
  return r;
}

std::vector<LimitsRow> limits_ladder(std::int64_t ell, int g, const std::vector<std::int64_t>& qs,
                                     EnumerationMode mode, int workers) {
  const PrimeSet S({ell});
  std::vector<LimitsRow> rows;
  for (auto q : qs) {
    if (q % ell == 0) throw std::invalid_argument("q = " + std::to_string(q) + " is divisible by l");
    const auto s = classify(q, g, S, mode, workers);
    LimitsRow row;
    row.q = q;
    row.q_mod_ell = q % ell;
    row.n_nontrivial = s.n_nontrivial;
    row.n_noncyclic = s.n_noncyclic;
    row.fraction = s.fraction_cyclic;
    row.expected = single_ell_limit(ell, q);
    rows.push_back(row);
  }
  return rows;
}

std::string limits_csv(const std::vector<LimitsRow>& rows) {
  std::ostringstream os;
  os << "q,q_mod_ell,n_nontrivial,n_noncyclic,fraction,expected\n";
  for (const auto& r : rows)
    os << r.q << "," << r.q_mod_ell << "," << r.n_nontrivial << "," << r.n_noncyclic << ","
       << (r.fraction ? to_decimal(*r.fraction, 6) : "") << "," << to_decimal(r.expected, 6) << "\n";
  return os.str();
}

const std::vector<std::string>& fault_names() {
  static const std::vector<std::string> names = {"nontrivial-formula", "local-formula", "crt",
                                                 "noncyclic-bounds",   "partition",     "lattice-count",
                                                 "sigma-bounds",       "oracle"};
  return names;
}

std::vector<VerifyCheck> verify_suite(const std::vector<std::int64_t>& qs, const std::vector<int>& gs,
                                      const PrimeSet& base, const std::string& fault, int workers) {
  if (!fault.empty() && std::find(fault_names().begin(), fault_names().end(), fault) == fault_names().end())
    throw std::invalid_argument("unknown fault '" + fault + "'");
  if (base.empty()) throw std::invalid_argument("verify needs a nonempty prime set");
  const auto bump = [&](const char* name) -> std::int64_t { return fault == name ? 1 : 0; };

  std::vector<PrimeSet> subsets;
  const auto& ells = base.primes();
  for (std::size_t mask = 1; mask < (std::size_t{1} << ells.size()); ++mask) {
    std::vector<std::int64_t> pick;
    for (std::size_t k = 0; k < ells.size(); ++k)
      if (mask >> k & 1) pick.push_back(ells[k]);
    subsets.emplace_back(pick);
  }

  std::vector<VerifyCheck> checks;
  auto record = [&](std::string name, std::string context, bool pass, std::string detail) {
    checks.push_back({std::move(name), std::move(context), pass, std::move(detail)});
  };

  for (auto g : gs) {
    for (auto q : qs) {
      const std::string qg = "q=" + std::to_string(q) + " g=" + std::to_string(g);

      for (const auto& S : subsets) {
        const std::string ctx = qg + " S=" + S.to_string();
        const auto n_nt = count_nontrivial_residues(q, g, S, workers);
        const BigInt formula = nontrivial_residue_formula(g, S) + bump("nontrivial-formula");
        record("residue.nontrivial-formula", ctx, BigInt(n_nt) == formula,
               std::to_string(n_nt) + " vs " + to_string(formula));

        const auto n_nc = count_noncyclic_residues(q, g, S, workers);
        const BigInt crt = noncyclic_from_locals(q, g, S) + bump("crt");
        record("residue.noncyclic-crt", ctx, BigInt(n_nc) == crt, std::to_string(n_nc) + " vs " + to_string(crt));

        bool formulas_defined = g >= 2;
        for (auto ell : S.primes()) formulas_defined &= q % ell != 0;
        if (formulas_defined) {
          auto [lo, hi] = noncyclic_residue_bounds(g, S);
          hi -= bump("noncyclic-bounds") * Rational(n_nc + 1);
          record("residue.noncyclic-bounds", ctx, lo <= n_nc && n_nc <= hi,
                 to_decimal(lo, 3) + " <= " + std::to_string(n_nc) + " <= " + to_decimal(hi, 3));
        }

        const auto bounds = theorem_bounds(S);
        const Rational upper = bounds.upper - bump("sigma-bounds");
        record("sigma.bounds-ordered", ctx, 0 <= bounds.lower && bounds.lower <= upper && upper <= 1,
               to_decimal(bounds.lower, 6) + " " + to_decimal(upper, 6));
      }

      for (auto ell : base.primes()) {
        const auto formula = local_solution_formula(q, g, ell);
        if (!formula) continue;
        const std::string ctx = qg + " l=" + std::to_string(ell);
        const auto measured = local_solution_count(q, g, ell);
        const auto expected = *formula + bump("local-formula");
        record("residue.local-formula", ctx, measured == expected,
               std::to_string(measured) + " vs " + std::to_string(expected));
      }

      const auto censuses = census_pass(q, g, subsets, EnumerationMode::WithCandidates, workers);
      for (std::size_t k = 0; k < subsets.size(); ++k) {
        const auto& c = censuses[k];
        if (!c.partition_nontrivial) continue;
        const auto nt = *c.partition_nontrivial + bump("partition");
        record("partition.identity", qg + " S=" + subsets[k].to_string(),
               nt == c.summary.n_nontrivial && *c.partition_noncyclic == c.summary.n_noncyclic,
               std::to_string(nt) + "/" + std::to_string(*c.partition_noncyclic) + " vs " +
                   std::to_string(c.summary.n_nontrivial) + "/" + std::to_string(c.summary.n_noncyclic));
      }

      // every non-ordinary class is a candidate when q is prime
      if (is_prime(q)) {
        const auto points = count_points(LatticeSpec::make(LatticeKind::Lambda, q, g), workers) +
                            bump("lattice-count");
        const auto classes = censuses.front().summary.n_total;
        record("lattice.count-matches-enumeration", qg, points == classes,
               std::to_string(points) + " vs " + std::to_string(classes));
      }
      if (g == 1) {
        const auto n = count_points(LatticeSpec::make(LatticeKind::Lambda, q, 1), workers);
        const double residual = std::abs(static_cast<double>(n) - 4 * std::sqrt(static_cast<double>(q)));
        record("lattice.genus-one-residual", qg, residual <= 1.0, std::to_string(residual));
      }

      if (g == 1 && q % 2 == 1 && is_prime(q) && q <= 200) {
        const auto oracle = elliptic_oracle(q);
        std::int64_t mismatches = bump("oracle");
        for_each_record(q, 1, EnumerationMode::OrdinaryOnly, [&](const IsogenyClassRecord& rec) {
          const auto& shapes = oracle.at(rec.coeffs.a[0]);
          for (auto ell : base.primes()) {
            bool any_noncyclic = false, divides = false;
            for (const auto& s : shapes) {
              any_noncyclic |= !s.ell_part_cyclic(ell);
              divides |= s.order() % ell == 0;
            }
            const auto status = ell_verdict(rec, ell).status;
            mismatches += (status == CyclicityStatus::NonCyclic) != any_noncyclic;
            mismatches += (status == CyclicityStatus::TrivialPart) == divides;
          }
        });
        record("cyclicity.elliptic-oracle", qg, mismatches == 0, std::to_string(mismatches) + " mismatches");
      }
    }
  }
  return checks;
}

}  // namespace weil
