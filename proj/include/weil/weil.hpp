#pragma once

#include <cstdint>
#include <vector>

#include "weil/arith.hpp"
#include "weil/polynomial.hpp"

namespace weil {

/// The finite field F_q, q = p^r, together with s = p^⌈r/2⌉, the smallest
/// power of p whose square is divisible by q.
struct FieldParams {
  std::int64_t p = 0;
  int r = 0;
  std::int64_t q = 0;
  std::int64_t s = 0;

  /// Throws std::invalid_argument when q is not a prime power.
  static FieldParams from_q(std::int64_t q);

  bool sqrt_q_is_integer() const { return r % 2 == 0; }

  /// 2√q as an exact point: an integer when r is even, k·√p otherwise.
  SurdPoint two_sqrt_q() const;

  friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

/// Coefficients (a_1, ..., a_g) of
///   f(t) = t^2g + a_1 t^(2g-1) + ... + a_g t^g + a_(g-1) q t^(g-1) + ... + a_1 q^(g-1) t + q^g.
struct WeilCoefficients {
  FieldParams field;
  int g = 0;
  std::vector<std::int64_t> a;

  WeilCoefficients() = default;
  WeilCoefficients(FieldParams f, std::vector<std::int64_t> coeffs);

  friend bool operator==(const WeilCoefficients&, const WeilCoefficients&) = default;
};

/// P ∈ ℤ[s] of degree g with f(t) = t^g · P(t + q/t).
struct RealCounterpart {
  IntPoly poly;
};

/// Full coefficient vector of f, t^0 first.
IntPoly weil_polynomial(const WeilCoefficients& c);

BigInt eval_f_at_one(const WeilCoefficients& c);
BigInt eval_fprime_at_one(const WeilCoefficients& c);

/// int64 evaluations for the enumeration hot path; throw OverflowError
/// rather than wrap.
std::int64_t f_at_one_i64(const WeilCoefficients& c);
std::int64_t fprime_at_one_i64(const WeilCoefficients& c);

RealCounterpart real_counterpart(const WeilCoefficients& c);

/// t^g · P(t + q/t) expanded back to a degree-2g polynomial in t.
IntPoly expand_real_counterpart(const RealCounterpart& rc, std::int64_t q, int g);

/// Multiplicity of √q (sign = +1) or -√q (sign = -1) as a root of f, found by
/// exact deflation. For odd r both share the factor t² - q.
int sqrt_q_root_multiplicity(const WeilCoefficients& c, int sign);

/// Exact membership of (a_i q^(-i/2)) in V_g: all roots of f on |t| = √q with
/// real roots of even multiplicity. Arbitrary precision Sturm sequences.
bool is_weil(const WeilCoefficients& c);

/// Same predicate via closed-form real-rootedness (g <= 3) and derivative
/// signs at ±2√q in checked 128-bit arithmetic. Falls back to is_weil when a
/// value would overflow or g > 3.
bool is_weil_fast(const WeilCoefficients& c);

/// p does not divide a_g.
bool is_ordinary(const WeilCoefficients& c);

}  // namespace weil
