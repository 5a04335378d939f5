#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weil/cyclicity.hpp"
#include "weil/residue.hpp"

namespace weil {

/// Classification of one (q, g, S) from a shared enumeration pass.
struct SetCensus {
  CountSummary summary;
  std::vector<std::int64_t> per_ell_nontrivial;
  std::vector<std::int64_t> per_ell_noncyclic;
  // sums of I_m over the nontrivial / non-cyclic residues m mod F^2; absent
  // when (Z/F^2)^g is too large to histogram
  std::optional<std::int64_t> partition_nontrivial;
  std::optional<std::int64_t> partition_noncyclic;

  bool partition_holds() const {
    return partition_nontrivial == summary.n_nontrivial && partition_noncyclic == summary.n_noncyclic;
  }
};

/// One streaming enumeration of (q, g) feeding a classifier and a residue
/// histogram for every prime set.
std::vector<SetCensus> census_pass(std::int64_t q, int g, const std::vector<PrimeSet>& sets,
                                   EnumerationMode mode, int workers = 1);

/// Prime powers in [lo, hi], ascending.
std::vector<std::int64_t> prime_powers_in(std::int64_t lo, std::int64_t hi);
/// Primes in [lo, hi], ascending.
std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi);

/// Limit of the cyclic fraction for S = {l} as q grows in a fixed class:
/// (l-1)/l when l | q-1, (l^2-1)/l^2 otherwise.
Rational single_ell_limit(std::int64_t ell, std::int64_t q);

struct LimitsRow {
  std::int64_t q = 0;
  std::int64_t q_mod_ell = 0;
  std::int64_t n_nontrivial = 0;
  std::int64_t n_noncyclic = 0;
  std::optional<Rational> fraction;
  Rational expected;
};

/// Cyclic fraction for S = {l} at every q of the ladder. q divisible by l is rejected.
std::vector<LimitsRow> limits_ladder(std::int64_t ell, int g, const std::vector<std::int64_t>& qs,
                                     EnumerationMode mode, int workers = 1);

std::string limits_csv(const std::vector<LimitsRow>& rows);

struct VerifyCheck {
  std::string name;     // e.g. "residue.nontrivial-formula"
  std::string context;  // "q=5 g=2 S=2,3"
  bool pass = false;
  std::string detail;
};

/// Names accepted by `fault`: each perturbs one reference value by +1 so the
/// matching check must fail.
const std::vector<std::string>& fault_names();

/// Cross-module checks over every q, g and every nonempty subset of `base`.
/// Throws CapExceeded when a residue scan or enumeration is too large.
std::vector<VerifyCheck> verify_suite(const std::vector<std::int64_t>& qs, const std::vector<int>& gs,
                                      const PrimeSet& base, const std::string& fault = "", int workers = 1);

}  // namespace weil
