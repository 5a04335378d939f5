#include "weil/cyclicity.hpp"

#include <stdexcept>

#include <json.hpp>

namespace weil {

std::string_view to_string(CyclicityStatus status) {
  switch (status) {
    case CyclicityStatus::TrivialPart:
      return "trivial-part";
    case CyclicityStatus::Cyclic:
      return "cyclic";
    default:
      return "non-cyclic";
  }
}

CyclicityStatus ell_status(std::int64_t f1, std::int64_t fp1, std::int64_t ell) {
  if (f1 % ell != 0) return CyclicityStatus::TrivialPart;
  if ((f1 / ell) % ell == 0 && fp1 % ell == 0) return CyclicityStatus::NonCyclic;
  return CyclicityStatus::Cyclic;
}

CyclicityVerdict ell_verdict(const IsogenyClassRecord& rec, std::int64_t ell) {
  if (rec.f1 < 1) throw std::invalid_argument("f(1) must be positive");
  return {ell, ell_status(rec.f1, rec.fp1, ell)};
}

bool s_cyclic(const IsogenyClassRecord& rec, const PrimeSet& S) {
  for (auto ell : S.primes())
    if (ell_verdict(rec, ell).status == CyclicityStatus::NonCyclic) return false;
  return true;
}

std::string CountSummary::to_json() const {
  nlohmann::ordered_json j;
  j["q"] = std::to_string(q);
  j["g"] = std::to_string(g);
  j["S"] = S.to_string();
  j["F"] = weil::to_string(S.F());
  j["mode"] = std::string(weil::to_string(mode));
  j["n_total"] = std::to_string(n_total);
  j["n_nontrivial"] = std::to_string(n_nontrivial);
  j["n_noncyclic"] = std::to_string(n_noncyclic);
  if (fraction_cyclic) {
    j["fraction_cyclic"] = to_decimal(*fraction_cyclic, 6);
    j["fraction_cyclic_exact"] = weil::to_string(*fraction_cyclic);
  } else {
    j["fraction_cyclic"] = nullptr;
    j["fraction_cyclic_exact"] = nullptr;
  }
  j["bound_lower"] = to_decimal(bound_lower, 6);
  j["bound_upper"] = to_decimal(bound_upper, 6);
  j["bound_lower_exact"] = weil::to_string(bound_lower);
  j["bound_upper_exact"] = weil::to_string(bound_upper);
  return j.dump(2);
}

Classifier::Classifier(const PrimeSet& S)
    : S_(S), ells_(S.primes()), per_ell_nontrivial_(S.size(), 0), per_ell_noncyclic_(S.size(), 0) {
  for (auto ell : ells_) squares_.push_back(checked_mul(ell, ell));
}

void Classifier::add(std::int64_t f1, std::int64_t fp1) {
  ++total_;
  bool nontrivial = false, noncyclic = false;
  for (std::size_t k = 0; k < ells_.size(); ++k) {
    if (f1 % ells_[k] != 0) continue;
    nontrivial = true;
    ++per_ell_nontrivial_[k];
    if (f1 % squares_[k] == 0 && fp1 % ells_[k] == 0) {
      noncyclic = true;
      ++per_ell_noncyclic_[k];
    }
  }
  nontrivial_ += nontrivial;
  noncyclic_ += noncyclic;
}

void Classifier::merge(const Classifier& other) {
  if (!(other.S_ == S_)) throw std::invalid_argument("cannot merge classifiers over different S");
  total_ += other.total_;
  nontrivial_ += other.nontrivial_;
  noncyclic_ += other.noncyclic_;
  for (std::size_t k = 0; k < ells_.size(); ++k) {
    per_ell_nontrivial_[k] += other.per_ell_nontrivial_[k];
    per_ell_noncyclic_[k] += other.per_ell_noncyclic_[k];
  }
}

CountSummary Classifier::summary(std::int64_t q, int g, EnumerationMode mode) const {
  CountSummary s;
  s.q = q;
  s.g = g;
  s.S = S_;
  s.mode = mode;
  s.n_total = total_;
  s.n_nontrivial = nontrivial_;
  s.n_noncyclic = noncyclic_;
  if (nontrivial_ > 0) {
    s.fraction_cyclic = Rational(nontrivial_ - noncyclic_, nontrivial_);
    s.fraction_cyclic->canonicalize();
  }
  const auto b = theorem_bounds(S_);
  s.bound_lower = b.lower;
  s.bound_upper = b.upper;
  return s;
}

CountSummary classify(std::int64_t q, int g, const PrimeSet& S, EnumerationMode mode, int workers) {
  if (S.empty()) throw std::invalid_argument("classify needs a nonempty prime set");
  require_within_cap(q, g);
  const auto parts = a1_partitions(q, g, std::max(1, workers) * 4);
  std::vector<Classifier> partial(parts.size(), Classifier(S));
  run_partitioned(parts, workers, [&](std::size_t i, IntRange r) {
    enumerate_range(q, g, mode, r, [&](const IsogenyClassRecord& rec) { partial[i].add(rec); });
  });
  Classifier total(S);
  for (const auto& c : partial) total.merge(c);
  return total.summary(q, g, mode);
}

namespace {

// Curve y^2 = x^3 + a x^2 + b x + c over F_q, q an odd prime.
class Curve {
 public:
  struct Point {
    std::int64_t x = 0, y = 0;
    bool inf = true;
  };

  Curve(std::int64_t q, std::int64_t a, std::int64_t b, std::int64_t c,
        const std::vector<std::int64_t>& inverse)
      : q_(q), a_(a), b_(b), c_(c), inv_(inverse) {}

  Point add(const Point& P, const Point& Q) const {
    if (P.inf) return Q;
    if (Q.inf) return P;
    std::int64_t lambda;
    if (P.x == Q.x) {
      if ((P.y + Q.y) % q_ == 0) return {};
      const std::int64_t num = (3 * P.x % q_ * P.x + 2 * a_ * P.x + b_) % q_;
      lambda = num * inv_[2 * P.y % q_] % q_;
    } else {
      lambda = (Q.y - P.y + q_) % q_ * inv_[(Q.x - P.x + q_) % q_] % q_;
    }
    const std::int64_t x3 = ((lambda * lambda - a_ - P.x - Q.x) % q_ + 3 * q_) % q_;
    const std::int64_t y3 = ((lambda * ((P.x - x3 + q_) % q_) - P.y) % q_ + q_) % q_;
    return {x3, y3, false};
  }

  Point multiply(Point P, std::int64_t k) const {
    Point R;
    while (k > 0) {
      if (k & 1) R = add(R, P);
      P = add(P, P);
      k >>= 1;
    }
    return R;
  }

 private:
  std::int64_t q_, a_, b_, c_;
  const std::vector<std::int64_t>& inv_;
};

GroupShape group_shape(std::int64_t q, std::int64_t a, std::int64_t b, std::int64_t c,
                       const std::vector<std::int64_t>& inverse, const std::vector<int>& chi,
                       const std::vector<std::int64_t>& sqrt_of) {
  std::vector<Curve::Point> points{Curve::Point{}};
  for (std::int64_t x = 0; x < q; ++x) {
    const std::int64_t rhs = ((x * x % q * x + a * x % q * x + b * x + c) % q + q) % q;
    if (chi[rhs] == 0) {
      points.push_back({x, 0, false});
    } else if (chi[rhs] == 1) {
      const std::int64_t y = sqrt_of[rhs];
      points.push_back({x, y, false});
      points.push_back({x, q - y, false});
    }
  }
  const auto n = static_cast<std::int64_t>(points.size());
  const Curve E(q, a, b, c, inverse);
  // E(F_q) = Z/n1 x Z/n2 with n1 | gcd(n, q - 1); l^e | n1 iff #E[l^e](F_q) = l^(2e).
  std::int64_t n1 = 1;
  for (auto ell : prime_divisors(gcd(n, q - 1))) {
    std::int64_t le = ell;
    while (n % (le * le) == 0) {
      std::int64_t torsion = 0;
      for (const auto& P : points) torsion += E.multiply(P, le).inf;
      if (torsion != le * le) break;
      n1 *= ell;
      le *= ell;
    }
  }
  return {n1, n / n1};
}

}  // namespace

std::map<std::int64_t, std::set<GroupShape>> elliptic_oracle(std::int64_t q) {
  if (q < 3 || q > 200 || !is_prime(q))
    throw std::invalid_argument("elliptic oracle needs an odd prime q <= 200");
  std::vector<std::int64_t> inverse(q, 0);
  for (std::int64_t x = 1; x < q; ++x)
    for (std::int64_t y = 1; y < q; ++y)
      if (x * y % q == 1) inverse[x] = y;
  std::vector<int> chi(q, -1);
  std::vector<std::int64_t> sqrt_of(q, 0);
  chi[0] = 0;
  for (std::int64_t y = 1; y < q; ++y) {
    chi[y * y % q] = 1;
    sqrt_of[y * y % q] = y;
  }
  std::map<std::int64_t, std::set<GroupShape>> out;
  auto record = [&](std::int64_t a, std::int64_t b, std::int64_t c) {
    const GroupShape shape = group_shape(q, a, b, c, inverse, chi, sqrt_of);
    out[shape.order() - q - 1].insert(shape);
  };
  if (q == 3) {
    // in characteristic 3 the x^2 term cannot be removed
    for (std::int64_t a = 0; a < q; ++a)
      for (std::int64_t b = 0; b < q; ++b)
        for (std::int64_t c = 0; c < q; ++c) {
          const std::int64_t disc =
              a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c;
          if (mod(disc, q) != 0) record(a, b, c);
        }
    return out;
  }
  for (std::int64_t A = 0; A < q; ++A)
    for (std::int64_t B = 0; B < q; ++B)
      if (mod(4 * A * A * A + 27 * B * B, q) != 0) record(0, A, B);
  return out;
}

}  // namespace weil
