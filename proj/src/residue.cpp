#include "weil/residue.hpp"

#include <functional>
#include <stdexcept>

#include <json.hpp>

namespace weil {

namespace {

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<i128>(a) * b % m);
}

std::int64_t powmod(std::int64_t base, int exp, std::int64_t m) {
  std::int64_t r = 1 % m;
  base = mod(base, m);
  for (int i = 0; i < exp; ++i) r = mulmod(r, base, m);
  return r;
}

// f(1) = (1 + q^g) + sum_{i<g} a_i (1 + q^(g-i)) + a_g
// f'(1) = 2g + sum_{i<g} a_i ((2g - i) + i q^(g-i)) + g a_g
struct LinearForms {
  std::int64_t modulus;
  std::int64_t f0, fp0;
  std::vector<std::int64_t> w, wp;

  LinearForms(std::int64_t q, int g, std::int64_t m) : modulus(m), w(g), wp(g) {
    f0 = mod(1 + powmod(q, g, m), m);
    fp0 = mod(2 * g, m);
    for (int i = 1; i < g; ++i) {
      const std::int64_t qi = powmod(q, g - i, m);
      w[i - 1] = mod(1 + qi, m);
      wp[i - 1] = mod((2 * g - i) + mulmod(i, qi, m), m);
    }
    w[g - 1] = 1 % m;
    wp[g - 1] = g % m;
  }
};

using ResiduePredicate = std::function<bool(std::int64_t f1, std::int64_t fp1)>;

// Walks every vector of (Z/M)^g, split over the first coordinate.
std::int64_t scan(std::int64_t q, int g, std::int64_t M, const ResiduePredicate& pred, int workers) {
  const LinearForms L(q, g, M);
  std::vector<IntRange> parts;
  const int n = static_cast<int>(std::min<std::int64_t>(M, std::max(1, workers) * 4));
  for (int i = 0; i < n; ++i) parts.push_back({M * i / n, M * (i + 1) / n - 1});
  std::vector<std::int64_t> counts(parts.size(), 0);
  run_partitioned(parts, workers, [&](std::size_t idx, IntRange r) {
    std::int64_t local = 0;
    std::function<void(int, std::int64_t, std::int64_t)> walk = [&](int i, std::int64_t f, std::int64_t fp) {
      if (i == g) {
        local += pred(f, fp);
        return;
      }
      const std::int64_t lo = i == 0 ? r.lo : 0, hi = i == 0 ? r.hi : M - 1;
      std::int64_t fi = mod(f + mulmod(lo, L.w[i], M), M);
      std::int64_t fpi = mod(fp + mulmod(lo, L.wp[i], M), M);
      for (std::int64_t x = lo; x <= hi; ++x) {
        walk(i + 1, fi, fpi);
        fi += L.w[i];
        if (fi >= M) fi -= M;
        fpi += L.wp[i];
        if (fpi >= M) fpi -= M;
      }
    };
    walk(0, L.f0, L.fp0);
    counts[idx] = local;
  });
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

std::int64_t modulus_of(const PrimeSet& S) {
  if (S.empty()) throw std::invalid_argument("residue counts need a nonempty prime set");
  const BigInt M = S.F() * S.F();
  if (!M.fits_slong_p() || M > kMaxResidueScan) throw CapExceeded("F^2 too large for a residue scan");
  return M.get_si();
}

bool nontrivial_at(const PrimeSet& S, std::int64_t f1) {
  for (auto ell : S.primes())
    if (f1 % ell == 0) return true;
  return false;
}

bool noncyclic_at(const PrimeSet& S, std::int64_t f1, std::int64_t fp1) {
  for (auto ell : S.primes())
    if (f1 % (ell * ell) == 0 && fp1 % ell == 0) return true;
  return false;
}

BigInt pow_big(std::int64_t base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), BigInt(base).get_mpz_t(), exp);
  return r;
}

}  // namespace

ResidueVector reduce(const std::vector<std::int64_t>& a, std::int64_t modulus) {
  ResidueVector r;
  r.modulus = modulus;
  for (auto x : a) r.m.push_back(mod(x, modulus));
  return r;
}

std::int64_t f_one_mod(std::int64_t q, const ResidueVector& m) {
  const int g = static_cast<int>(m.m.size());
  const LinearForms L(q, g, m.modulus);
  std::int64_t f = L.f0;
  for (int i = 0; i < g; ++i) f = mod(f + mulmod(m.m[i], L.w[i], m.modulus), m.modulus);
  return f;
}

std::int64_t f_prime_one_mod(std::int64_t q, const ResidueVector& m) {
  const int g = static_cast<int>(m.m.size());
  const LinearForms L(q, g, m.modulus);
  std::int64_t f = L.fp0;
  for (int i = 0; i < g; ++i) f = mod(f + mulmod(m.m[i], L.wp[i], m.modulus), m.modulus);
  return f;
}

std::int64_t residue_space_size(const PrimeSet& S, int g) {
  if (g < 1) throw std::invalid_argument("g must be >= 1");
  const BigInt size = pow_big(modulus_of(S), static_cast<unsigned long>(g));
  if (size > kMaxResidueScan)
    throw CapExceeded("residue space F^(2g) = " + to_string(size) + " exceeds the scan cap of 10^8");
  return size.get_si();
}

std::int64_t count_nontrivial_residues(std::int64_t q, int g, const PrimeSet& S, int workers) {
  residue_space_size(S, g);
  return scan(q, g, modulus_of(S), [&](std::int64_t f, std::int64_t) { return nontrivial_at(S, f); },
              workers);
}

BigInt nontrivial_residue_formula(int g, const PrimeSet& S) {
  const BigInt F2 = S.F() * S.F();
  BigInt phi = 1;
  for (auto ell : S.primes()) phi *= BigInt(ell) * BigInt(ell - 1);
  BigInt scale;
  mpz_pow_ui(scale.get_mpz_t(), F2.get_mpz_t(), static_cast<unsigned long>(g - 1));
  return scale * (F2 - phi);
}

std::int64_t count_noncyclic_residues(std::int64_t q, int g, const PrimeSet& S, int workers) {
  residue_space_size(S, g);
  return scan(q, g, modulus_of(S),
              [&](std::int64_t f, std::int64_t fp) { return noncyclic_at(S, f, fp); }, workers);
}

std::pair<Rational, Rational> noncyclic_residue_bounds(int g, const PrimeSet& S) {
  BigInt space;
  mpz_pow_ui(space.get_mpz_t(), S.F().get_mpz_t(), static_cast<unsigned long>(2 * g));
  const Rational lo = Rational(space) * (1 - sigma(S, 3));
  const Rational hi = Rational(space) * (1 - sigma(S, 2));
  return {lo, hi};
}

std::int64_t local_solution_count(std::int64_t q, int g, std::int64_t ell) {
  const PrimeSet single({ell});
  residue_space_size(single, g);
  return count_noncyclic_residues(q, g, single);
}

std::optional<std::int64_t> local_solution_formula(std::int64_t q, int g, std::int64_t ell) {
  if (g < 2 || q % ell == 0) return std::nullopt;
  if ((q - 1) % ell == 0) return checked_pow(ell, 2 * g - 2);
  return checked_pow(ell, 2 * g - 3);
}

BigInt noncyclic_from_locals(std::int64_t q, int g, const PrimeSet& S) {
  BigInt space = 1, complement = 1;
  for (auto ell : S.primes()) {
    const BigInt local_space = pow_big(ell, 2 * g);
    space *= local_space;
    complement *= local_space - local_solution_count(q, g, ell);
  }
  return space - complement;
}

BigInt nontrivial_from_locals(std::int64_t q, int g, const PrimeSet& S) {
  BigInt space = 1, complement = 1;
  for (auto ell : S.primes()) {
    const BigInt local_space = pow_big(ell, 2 * g);
    space *= local_space;
    complement *= local_space - count_nontrivial_residues(q, g, PrimeSet({ell}));
  }
  return space - complement;
}

std::string ResidueCensus::to_json() const {
  nlohmann::ordered_json j;
  j["q"] = std::to_string(q);
  j["g"] = std::to_string(g);
  j["S"] = S.to_string();
  j["F"] = to_string(S.F());
  j["space"] = std::to_string(space);
  j["n_nontrivial_residues"] = std::to_string(n_nontrivial_residues);
  j["nontrivial_formula"] = to_string(nontrivial_formula);
  j["nontrivial_matches"] = nontrivial_matches();
  j["n_noncyclic_residues"] = std::to_string(n_noncyclic_residues);
  j["noncyclic_crt"] = to_string(noncyclic_crt);
  j["noncyclic_lower"] = to_decimal(noncyclic_lower, 3);
  j["noncyclic_upper"] = to_decimal(noncyclic_upper, 3);
  j["noncyclic_within_bounds"] = noncyclic_within_bounds();
  auto& locals_json = j["locals"] = nlohmann::ordered_json::array();
  for (const auto& l : locals) {
    nlohmann::ordered_json e;
    e["ell"] = std::to_string(l.ell);
    e["measured"] = std::to_string(l.measured);
    e["formula"] = l.formula ? nlohmann::ordered_json(std::to_string(*l.formula)) : nlohmann::ordered_json(nullptr);
    locals_json.push_back(e);
  }
  return j.dump(2);
}

ResidueCensus residue_census(std::int64_t q, int g, const PrimeSet& S, int workers) {
  ResidueCensus c;
  c.q = q;
  c.g = g;
  c.S = S;
  c.space = residue_space_size(S, g);
  c.n_nontrivial_residues = count_nontrivial_residues(q, g, S, workers);
  c.n_noncyclic_residues = count_noncyclic_residues(q, g, S, workers);
  c.nontrivial_formula = nontrivial_residue_formula(g, S);
  c.noncyclic_crt = noncyclic_from_locals(q, g, S);
  std::tie(c.noncyclic_lower, c.noncyclic_upper) = noncyclic_residue_bounds(g, S);
  for (auto ell : S.primes())
    c.locals.push_back({ell, local_solution_count(q, g, ell), local_solution_formula(q, g, ell)});
  return c;
}

ResidueHistogram::ResidueHistogram(std::int64_t q, int g, const PrimeSet& S)
    : q_(q), g_(g), S_(S), modulus_(modulus_of(S)), counts_(residue_space_size(S, g), 0) {}

void ResidueHistogram::add(const std::vector<std::int64_t>& a) {
  std::int64_t index = 0;
  for (int i = g_ - 1; i >= 0; --i) index = index * modulus_ + mod(a[i], modulus_);
  ++counts_[index];
  ++total_;
}

void ResidueHistogram::merge(const ResidueHistogram& other) {
  if (other.q_ != q_ || other.g_ != g_ || !(other.S_ == S_))
    throw std::invalid_argument("cannot merge histograms of different censuses");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
}

ResidueVector ResidueHistogram::vector_at(std::int64_t index) const {
  ResidueVector v;
  v.modulus = modulus_;
  for (int i = 0; i < g_; ++i) {
    v.m.push_back(index % modulus_);
    index /= modulus_;
  }
  return v;
}

std::int64_t ResidueHistogram::count(const ResidueVector& m) const {
  std::int64_t index = 0;
  for (int i = g_ - 1; i >= 0; --i) index = index * modulus_ + mod(m.m[i], modulus_);
  return counts_[index];
}

std::int64_t ResidueHistogram::sum_over_nontrivial() const {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] == 0) continue;
    if (nontrivial_at(S_, f_one_mod(q_, vector_at(static_cast<std::int64_t>(i))))) sum += counts_[i];
  }
  return sum;
}

std::int64_t ResidueHistogram::sum_over_noncyclic() const {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] == 0) continue;
    const auto v = vector_at(static_cast<std::int64_t>(i));
    if (noncyclic_at(S_, f_one_mod(q_, v), f_prime_one_mod(q_, v))) sum += counts_[i];
  }
  return sum;
}

}  // namespace weil
