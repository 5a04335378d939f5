#include "weil/weil.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace weil {

FieldParams FieldParams::from_q(std::int64_t q) {
  auto pp = as_prime_power(q);
  if (!pp) throw std::invalid_argument("q = " + std::to_string(q) + " is not a prime power");
  FieldParams f;
  f.p = pp->p;
  f.r = pp->r;
  f.q = q;
  f.s = checked_pow(f.p, (f.r + 1) / 2);
  return f;
}

SurdPoint FieldParams::two_sqrt_q() const {
  if (sqrt_q_is_integer()) return SurdPoint{BigInt(2 * checked_pow(p, r / 2)), p, false};
  return SurdPoint{BigInt(2 * checked_pow(p, (r - 1) / 2)), p, true};
}

WeilCoefficients::WeilCoefficients(FieldParams f, std::vector<std::int64_t> coeffs)
    : field(f), g(static_cast<int>(coeffs.size())), a(std::move(coeffs)) {
  if (g < 1) throw std::invalid_argument("Weil coefficient vector must have length g >= 1");
}

IntPoly weil_polynomial(const WeilCoefficients& c) {
  const int g = c.g;
  std::vector<BigInt> coef(2 * g + 1, BigInt(0));
  BigInt q = BigInt(c.field.q);
  coef[2 * g] = 1;
  for (int i = 1; i <= g; ++i) coef[2 * g - i] = c.a[i - 1];
  BigInt qpow = 1;
  for (int i = g - 1; i >= 1; --i) {
    qpow *= q;
    coef[i] = BigInt(c.a[i - 1]) * qpow;
  }
  mpz_pow_ui(coef[0].get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(g));
  return IntPoly(std::move(coef));
}

BigInt eval_f_at_one(const WeilCoefficients& c) {
  BigInt sum = 0;
  const IntPoly f = weil_polynomial(c);
  for (const auto& x : f.coeffs()) sum += x;
  return sum;
}

BigInt eval_fprime_at_one(const WeilCoefficients& c) {
  BigInt sum = 0;
  const IntPoly f = weil_polynomial(c);
  const auto& coef = f.coeffs();
  for (std::size_t k = 1; k < coef.size(); ++k) sum += coef[k] * static_cast<unsigned long>(k);
  return sum;
}

std::int64_t f_at_one_i64(const WeilCoefficients& c) {
  const int g = c.g;
  const std::int64_t q = c.field.q;
  std::int64_t sum = checked_add(1, checked_pow(q, g));
  for (int i = 1; i < g; ++i)
    sum = checked_add(sum, checked_mul(c.a[i - 1], checked_add(1, checked_pow(q, g - i))));
  return checked_add(sum, c.a[g - 1]);
}

std::int64_t fprime_at_one_i64(const WeilCoefficients& c) {
  const int g = c.g;
  const std::int64_t q = c.field.q;
  std::int64_t sum = 2 * static_cast<std::int64_t>(g);
  for (int i = 1; i < g; ++i) {
    std::int64_t w = checked_add(2 * g - i, checked_mul(i, checked_pow(q, g - i)));
    sum = checked_add(sum, checked_mul(c.a[i - 1], w));
  }
  return checked_add(sum, checked_mul(g, c.a[g - 1]));
}

RealCounterpart real_counterpart(const WeilCoefficients& c) {
  // T_i(s) = t^i + q^i t^-i with s = t + q/t: T_0 = 2, T_1 = s, T_{i+1} = s T_i - q T_{i-1}.
  const IntPoly s{BigInt(0), BigInt(1)};
  const IntPoly qc{BigInt(c.field.q)};
  IntPoly prev{BigInt(2)};
  IntPoly cur = s;
  IntPoly p{BigInt(c.a[c.g - 1])};
  for (int i = 1; i <= c.g; ++i) {
    BigInt coeff = i == c.g ? BigInt(1) : BigInt(c.a[c.g - i - 1]);
    p = p + IntPoly{coeff} * cur;
    IntPoly next = s * cur - qc * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return RealCounterpart{std::move(p)};
}

IntPoly expand_real_counterpart(const RealCounterpart& rc, std::int64_t q, int g) {
  const IntPoly base{BigInt(q), BigInt(0), BigInt(1)};  // t^2 + q
  IntPoly total;
  IntPoly power{BigInt(1)};
  for (int k = 0; k <= rc.poly.degree(); ++k) {
    if (k > g) throw std::invalid_argument("real counterpart degree exceeds g");
    std::vector<BigInt> shift(g - k, BigInt(0));
    shift.push_back(rc.poly.coeff(k));
    total = total + IntPoly(std::move(shift)) * power;
    power = power * base;
  }
  return total;
}

int sqrt_q_root_multiplicity(const WeilCoefficients& c, int sign) {
  IntPoly f = weil_polynomial(c);
  const FieldParams& fp = c.field;
  int mult = 0;
  if (fp.sqrt_q_is_integer()) {
    BigInt root = BigInt(sign) * BigInt(checked_pow(fp.p, fp.r / 2));
    IntPoly lin{-root, BigInt(1)};
    IntPoly quo;
    while (!f.is_zero() && divide_exact(f, lin, quo)) {
      f = std::move(quo);
      ++mult;
    }
    return mult;
  }
  // f(t) = E(t^2) + t O(t^2); with √q irrational, f(±√q) = 0 iff E(q) = O(q) = 0,
  // and then t^2 - q divides f.
  const BigInt q(fp.q);
  const IntPoly quad{-q, BigInt(0), BigInt(1)};
  while (true) {
    BigInt e = 0, o = 0, qpow = 1;
    const auto& coef = f.coeffs();
    for (std::size_t k = 0; k < coef.size(); k += 2) {
      e += coef[k] * qpow;
      if (k + 1 < coef.size()) o += coef[k + 1] * qpow;
      qpow *= q;
    }
    if (e != 0 || o != 0) break;
    IntPoly quo;
    if (!divide_exact(f, quad, quo)) throw std::logic_error("t^2 - q failed to divide f");
    f = std::move(quo);
    ++mult;
  }
  return mult;
}

namespace {

/// Strips every factor of P vanishing at ±2√q; returns whether any was found.
bool deflate_boundary(IntPoly& p, const FieldParams& fp) {
  bool found = false;
  IntPoly quo;
  if (fp.sqrt_q_is_integer()) {
    BigInt b = BigInt(2 * checked_pow(fp.p, fp.r / 2));
    for (const BigInt& root : {b, BigInt(-b)}) {
      IntPoly lin{BigInt(-root), BigInt(1)};
      while (divide_exact(p, lin, quo)) {
        p = std::move(quo);
        found = true;
      }
    }
  } else {
    IntPoly quad{BigInt(-4 * fp.q), BigInt(0), BigInt(1)};
    while (divide_exact(p, quad, quo)) {
      p = std::move(quo);
      found = true;
    }
  }
  return found;
}

}  // namespace

bool is_weil(const WeilCoefficients& c) {
  const FieldParams& fp = c.field;
  IntPoly rest = real_counterpart(c).poly;
  if (deflate_boundary(rest, fp)) {
    // real roots ±√q of f must have even multiplicity
    if (sqrt_q_root_multiplicity(c, +1) % 2 != 0) return false;
    if (sqrt_q_root_multiplicity(c, -1) % 2 != 0) return false;
  }
  if (rest.degree() <= 0) return true;
  const SurdPoint hi = fp.two_sqrt_q();
  const SurdPoint lo = hi.negated();
  for (const auto& factor : squarefree_decomposition(to_rational(rest))) {
    if (factor.degree() <= 0) continue;
    if (count_roots_open(factor, lo, hi) != factor.degree()) return false;
  }
  return true;
}

namespace {

i128 add128(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("i128 add");
  return r;
}

i128 mul128(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("i128 mul");
  return r;
}

using SmallPoly = std::array<i128, 4>;  // degree <= 3, low first

/// Sign of the degree-`deg` polynomial at x = xc (integer) or x = xc·√d.
int sign_at_point(const SmallPoly& p, int deg, i128 xc, bool on_surd, std::int64_t d) {
  i128 u = 0, v = 0;
  for (int k = deg; k >= 0; --k) {
    if (on_surd) {
      i128 nu = mul128(mul128(v, xc), d);
      i128 nv = mul128(u, xc);
      u = add128(nu, p[k]);
      v = nv;
    } else {
      u = add128(mul128(u, xc), p[k]);
    }
  }
  return surd_sign(u, v, d);
}

bool is_weil_small(const WeilCoefficients& c) {
  const int g = c.g;
  const i128 q = c.field.q;
  SmallPoly p{};
  if (g == 1) {
    p = {c.a[0], 1, 0, 0};
  } else if (g == 2) {
    p = {add128(c.a[1], -2 * q), c.a[0], 1, 0};
  } else {
    p = {add128(c.a[2], -mul128(2 * q, c.a[0])), add128(c.a[1], -3 * q), c.a[0], 1};
  }
  // real-rootedness
  if (g == 2) {
    if (add128(mul128(p[1], p[1]), -mul128(4, p[0])) < 0) return false;
  } else if (g == 3) {
    const i128 b = p[2], cc = p[1], d = p[0];
    i128 disc = mul128(mul128(mul128(18, b), cc), d);
    disc = add128(disc, -mul128(mul128(4, mul128(b, mul128(b, b))), d));
    disc = add128(disc, mul128(mul128(b, b), mul128(cc, cc)));
    disc = add128(disc, -mul128(4, mul128(cc, mul128(cc, cc))));
    disc = add128(disc, -mul128(27, mul128(d, d)));
    if (disc < 0) return false;
  }
  // A real-rooted monic P has all roots <= B iff every P^(k)(B) >= 0, and all
  // roots >= -B iff every (-1)^(deg-k) P^(k)(-B) >= 0.
  const FieldParams& fp = c.field;
  const bool on_surd = !fp.sqrt_q_is_integer();
  const i128 bc = 2 * checked_pow(fp.p, on_surd ? (fp.r - 1) / 2 : fp.r / 2);
  SmallPoly d = p;
  for (int k = 0; k < g; ++k) {
    const int deg = g - k;
    if (sign_at_point(d, deg, bc, on_surd, fp.p) < 0) return false;
    int s_minus = sign_at_point(d, deg, -bc, on_surd, fp.p);
    if (deg % 2 == 1) s_minus = -s_minus;
    if (s_minus < 0) return false;
    for (int j = 0; j < deg; ++j) d[j] = mul128(d[j + 1], j + 1);
    d[deg] = 0;
  }
  return true;
}

}  // namespace

bool is_weil_fast(const WeilCoefficients& c) {
  if (c.g > 3) return is_weil(c);
  try {
    return is_weil_small(c);
  } catch (const OverflowError&) {
    return is_weil(c);
  }
}

bool is_ordinary(const WeilCoefficients& c) { return c.a[c.g - 1] % c.field.p != 0; }

}  // namespace weil
