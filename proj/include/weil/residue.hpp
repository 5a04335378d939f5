#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weil/enumeration.hpp"
#include "weil/sigma.hpp"

namespace weil {

/// Largest residue space (F^(2g) vectors) a scan will walk.
inline constexpr std::int64_t kMaxResidueScan = 100'000'000;

struct ResidueVector {
  std::vector<std::int64_t> m;  // entries in [0, modulus)
  std::int64_t modulus = 1;
};

/// Reduces a coefficient vector mod `modulus`.
ResidueVector reduce(const std::vector<std::int64_t>& a, std::int64_t modulus);

/// f(1) and f'(1) mod the vector's modulus, for any lift of m.
std::int64_t f_one_mod(std::int64_t q, const ResidueVector& m);
std::int64_t f_prime_one_mod(std::int64_t q, const ResidueVector& m);

/// Number of vectors in (Z/F^2)^g; throws CapExceeded past kMaxResidueScan.
std::int64_t residue_space_size(const PrimeSet& S, int g);

/// Scan: vectors with f(1) not invertible mod F^2.
std::int64_t count_nontrivial_residues(std::int64_t q, int g, const PrimeSet& S, int workers = 1);

/// F^(2g-2) (F^2 - phi(F^2)).
BigInt nontrivial_residue_formula(int g, const PrimeSet& S);

/// Scan: vectors with l^2 | f(1) and l | f'(1) for some l in S.
std::int64_t count_noncyclic_residues(std::int64_t q, int g, const PrimeSet& S, int workers = 1);

/// [F^(2g)(1 - sigma3), F^(2g)(1 - sigma2)]
std::pair<Rational, Rational> noncyclic_residue_bounds(int g, const PrimeSet& S);

/// Scan over (Z/l^2)^g of the vectors with l^2 | f(1) and l | f'(1).
std::int64_t local_solution_count(std::int64_t q, int g, std::int64_t ell);

/// l^(2g-3) when l does not divide q(q-1), l^(2g-2) when l | q-1; nullopt otherwise
/// (g = 1, or l | q), where no closed form is asserted.
std::optional<std::int64_t> local_solution_formula(std::int64_t q, int g, std::int64_t ell);

/// CRT reassembly: F^(2g) - prod over l of (l^(2g) - local(l)).
BigInt noncyclic_from_locals(std::int64_t q, int g, const PrimeSet& S);
/// Same reassembly for the non-trivial condition.
BigInt nontrivial_from_locals(std::int64_t q, int g, const PrimeSet& S);

struct LocalCount {
  std::int64_t ell = 0;
  std::int64_t measured = 0;
  std::optional<std::int64_t> formula;
};

struct ResidueCensus {
  std::int64_t q = 0;
  int g = 0;
  PrimeSet S;
  std::int64_t space = 0;  // F^(2g)
  std::int64_t n_nontrivial_residues = 0;
  std::int64_t n_noncyclic_residues = 0;
  BigInt nontrivial_formula;
  BigInt noncyclic_crt;
  Rational noncyclic_lower, noncyclic_upper;
  std::vector<LocalCount> locals;

  bool nontrivial_matches() const { return BigInt(n_nontrivial_residues) == nontrivial_formula; }
  bool noncyclic_within_bounds() const {
    return noncyclic_lower <= n_noncyclic_residues && n_noncyclic_residues <= noncyclic_upper;
  }
  std::string to_json() const;
};

ResidueCensus residue_census(std::int64_t q, int g, const PrimeSet& S, int workers = 1);

/// Counts enumerated classes per residue class of a mod F^2 (the I_m of the
/// partition identity) and sums them over the nontrivial / non-cyclic residues.
class ResidueHistogram {
 public:
  ResidueHistogram(std::int64_t q, int g, const PrimeSet& S);

  void add(const std::vector<std::int64_t>& a);
  void add(const IsogenyClassRecord& rec) { add(rec.coeffs.a); }
  void merge(const ResidueHistogram& other);

  std::int64_t total() const { return total_; }
  std::int64_t count(const ResidueVector& m) const;
  std::int64_t sum_over_nontrivial() const;
  std::int64_t sum_over_noncyclic() const;

 private:
  ResidueVector vector_at(std::int64_t index) const;

  std::int64_t q_;
  int g_;
  PrimeSet S_;
  std::int64_t modulus_;
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

}  // namespace weil
