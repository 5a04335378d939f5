#include "weil/polynomial.hpp"

#include <stdexcept>

namespace weil {

std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> rem = a.coeffs();
  int db = b.degree();
  int dq = a.degree() - db;
  if (dq < 0) return {RatPoly{}, a};
  std::vector<Rational> quo(dq + 1, Rational(0));
  const Rational& lb = b.leading();
  for (int k = dq; k >= 0; --k) {
    Rational t = rem[k + db] / lb;
    quo[k] = t;
    if (t == 0) continue;
    for (int j = 0; j <= db; ++j) rem[k + j] -= t * b.coeff(j);
  }
  rem.resize(db);
  return {RatPoly(std::move(quo)), RatPoly(std::move(rem))};
}

bool divide_exact(const IntPoly& a, const IntPoly& b, IntPoly& quotient) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<BigInt> rem = a.coeffs();
  int db = b.degree();
  int dq = a.degree() - db;
  if (a.is_zero()) {
    quotient = IntPoly{};
    return true;
  }
  if (dq < 0) return false;
  std::vector<BigInt> quo(dq + 1, BigInt(0));
  const BigInt& lb = b.leading();
  for (int k = dq; k >= 0; --k) {
    if (rem[k + db] % lb != 0) return false;
    BigInt t = rem[k + db] / lb;
    quo[k] = t;
    if (t == 0) continue;
    for (int j = 0; j <= db; ++j) rem[k + j] -= t * b.coeff(j);
  }
  for (int j = 0; j < db; ++j)
    if (rem[j] != 0) return false;
  quotient = IntPoly(std::move(quo));
  return true;
}

namespace {

RatPoly make_monic(const RatPoly& p) {
  if (p.is_zero()) return p;
  std::vector<Rational> c = p.coeffs();
  Rational lc = p.leading();
  for (auto& x : c) x /= lc;
  return RatPoly(std::move(c));
}

}  // namespace

RatPoly gcd(RatPoly a, RatPoly b) {
  while (!b.is_zero()) {
    RatPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

RatPoly to_rational(const IntPoly& p) {
  std::vector<Rational> c;
  c.reserve(p.coeffs().size());
  for (const auto& x : p.coeffs()) c.emplace_back(x);
  return RatPoly(std::move(c));
}

IntPoly clear_denominators(const RatPoly& p) {
  BigInt l = 1;
  for (const auto& x : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<BigInt> c;
  c.reserve(p.coeffs().size());
  for (const auto& x : p.coeffs()) c.push_back(x.get_num() * (l / x.get_den()));
  return IntPoly(std::move(c));
}

std::vector<RatPoly> squarefree_decomposition(const RatPoly& p) {
  std::vector<RatPoly> out;
  if (p.degree() <= 0) return out;
  RatPoly dp = p.derivative();
  RatPoly a = gcd(p, dp);
  RatPoly b = divmod(p, a).first;
  RatPoly c = divmod(dp, a).first;
  RatPoly d = c - b.derivative();
  while (b.degree() > 0) {
    RatPoly f = gcd(b, d);
    out.push_back(f);
    b = divmod(b, f).first;
    c = divmod(d, f).first;
    d = c - b.derivative();
  }
  // drop trailing constant factors
  while (!out.empty() && out.back().degree() <= 0) out.pop_back();
  return out;
}

std::vector<RatPoly> sturm_chain(const RatPoly& p) {
  std::vector<RatPoly> chain;
  if (p.is_zero()) return chain;
  chain.push_back(p);
  RatPoly next = p.derivative();
  while (!next.is_zero()) {
    chain.push_back(next);
    RatPoly r = divmod(chain[chain.size() - 2], chain.back()).second;
    next = -r;
  }
  return chain;
}

int sign_at(const IntPoly& p, const SurdPoint& x) {
  SurdValue acc = SurdValue::integer(0, x.radicand);
  SurdValue xv = x.value();
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * xv + SurdValue::integer(*it, x.radicand);
  return acc.sign();
}

int sign_at(const RatPoly& p, const SurdPoint& x) { return sign_at(clear_denominators(p), x); }

int sign_variations(const std::vector<RatPoly>& chain, const SurdPoint& x) {
  int variations = 0;
  int last = 0;
  for (const auto& f : chain) {
    int s = sign_at(f, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

int count_roots_open(const RatPoly& squarefree_p, const SurdPoint& lo, const SurdPoint& hi) {
  auto chain = sturm_chain(squarefree_p);
  return sign_variations(chain, lo) - sign_variations(chain, hi);
}

}  // namespace weil
