#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "weil/enumeration.hpp"
#include "weil/sigma.hpp"

namespace weil {

enum class CyclicityStatus { TrivialPart, Cyclic, NonCyclic };

std::string_view to_string(CyclicityStatus status);

struct CyclicityVerdict {
  std::int64_t ell = 0;
  CyclicityStatus status = CyclicityStatus::TrivialPart;
  friend bool operator==(const CyclicityVerdict&, const CyclicityVerdict&) = default;
};

/// trivial-part iff l does not divide f(1); non-cyclic iff l^2 | f(1) and l | f'(1).
CyclicityStatus ell_status(std::int64_t f1, std::int64_t fp1, std::int64_t ell);

/// Throws std::invalid_argument when rec.f1 < 1.
CyclicityVerdict ell_verdict(const IsogenyClassRecord& rec, std::int64_t ell);

/// True iff no l in S gives a non-cyclic verdict.
bool s_cyclic(const IsogenyClassRecord& rec, const PrimeSet& S);

struct CountSummary {
  std::int64_t q = 0;
  int g = 0;
  PrimeSet S;
  EnumerationMode mode = EnumerationMode::OrdinaryOnly;
  std::int64_t n_total = 0;
  std::int64_t n_nontrivial = 0;  // I_S(q, g)
  std::int64_t n_noncyclic = 0;   // I_S^n(q, g)
  std::optional<Rational> fraction_cyclic;  // (I_S - I_S^n) / I_S, absent when I_S = 0
  Rational bound_lower, bound_upper;

  /// One JSON object; numbers are rendered as decimal strings.
  std::string to_json() const;
};

/// Associative, commutative fold of per-record verdicts.
class Classifier {
 public:
  explicit Classifier(const PrimeSet& S);

  void add(std::int64_t f1, std::int64_t fp1);
  void add(const IsogenyClassRecord& rec) { add(rec.f1, rec.fp1); }
  void merge(const Classifier& other);

  std::int64_t total() const { return total_; }
  std::int64_t nontrivial() const { return nontrivial_; }
  std::int64_t noncyclic() const { return noncyclic_; }

  /// For each l in S: number of records whose l-part is non-trivial.
  const std::vector<std::int64_t>& per_ell_nontrivial() const { return per_ell_nontrivial_; }
  const std::vector<std::int64_t>& per_ell_noncyclic() const { return per_ell_noncyclic_; }

  CountSummary summary(std::int64_t q, int g, EnumerationMode mode) const;

 private:
  PrimeSet S_;
  std::vector<std::int64_t> ells_, squares_;
  std::int64_t total_ = 0, nontrivial_ = 0, noncyclic_ = 0;
  std::vector<std::int64_t> per_ell_nontrivial_, per_ell_noncyclic_;
};

/// Enumerates (q, g) and folds every record into a CountSummary.
CountSummary classify(std::int64_t q, int g, const PrimeSet& S, EnumerationMode mode,
                      int workers = 1);

/// Z/n1 x Z/n2 with n1 | n2.
struct GroupShape {
  std::int64_t n1 = 1;
  std::int64_t n2 = 1;
  std::int64_t order() const { return n1 * n2; }
  /// The l-part is non-cyclic iff l divides n1.
  bool ell_part_cyclic(std::int64_t ell) const { return n1 % ell != 0; }
  auto operator<=>(const GroupShape&) const = default;
};

/// For an odd prime q <= 200: every elliptic curve over F_q, grouped by a1 = #E - q - 1,
/// with the set of group structures that occur.
std::map<std::int64_t, std::set<GroupShape>> elliptic_oracle(std::int64_t q);

}  // namespace weil
