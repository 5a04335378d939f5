#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "weil/arith.hpp"
#include "weil/surd.hpp"

namespace weil {

/// Dense univariate polynomial, coefficients stored low degree first.
/// The zero polynomial has no stored coefficients and degree -1.
template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) { trim(); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(int k) const { return k >= 0 && k <= degree() ? c_[k] : T(0); }
  const T& leading() const { return c_.back(); }

  template <class U>
  U evaluate(const U& x) const {
    U acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + U(*it);
    return acc;
  }

  Polynomial derivative() const {
    std::vector<T> d;
    for (int k = 1; k <= degree(); ++k) d.push_back(c_[k] * k);
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a) {
    std::vector<T> r = a.c_;
    for (auto& x : r) x = -x;
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<T> c_;
};

using IntPoly = Polynomial<BigInt>;
using RatPoly = Polynomial<Rational>;

/// Quotient and remainder over ℚ.
std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b);

/// Exact division of integer polynomials; nullopt-style failure is reported
/// by returning false when b does not divide a in ℤ[x].
bool divide_exact(const IntPoly& a, const IntPoly& b, IntPoly& quotient);

/// Monic gcd over ℚ.
RatPoly gcd(RatPoly a, RatPoly b);

RatPoly to_rational(const IntPoly& p);

/// Positive rational multiple of p with integer coefficients (same roots and
/// the same sign at every real point).
IntPoly clear_denominators(const RatPoly& p);

/// Square-free decomposition p = c · ∏ f_i^i (Yun). Entry i-1 holds f_i.
std::vector<RatPoly> squarefree_decomposition(const RatPoly& p);

/// Sturm chain p, p', -rem(...), ...
std::vector<RatPoly> sturm_chain(const RatPoly& p);

/// A real point that is either rational-integer or an integer multiple of √d.
/// The value is coeff·√d when on_surd is set, else the integer coeff.
struct SurdPoint {
  BigInt coeff;
  std::int64_t radicand = 0;
  bool on_surd = false;

  SurdValue value() const {
    return on_surd ? SurdValue(0, coeff, radicand) : SurdValue::integer(coeff, radicand);
  }
  SurdPoint negated() const { return SurdPoint{-coeff, radicand, on_surd}; }
};

/// Exact sign of p at the point.
int sign_at(const IntPoly& p, const SurdPoint& x);
int sign_at(const RatPoly& p, const SurdPoint& x);

/// Number of sign variations of the chain at x (zeros dropped).
int sign_variations(const std::vector<RatPoly>& chain, const SurdPoint& x);

/// Distinct real roots of the square-free p in the open interval (lo, hi);
/// requires p(lo) != 0 and p(hi) != 0.
int count_roots_open(const RatPoly& squarefree_p, const SurdPoint& lo, const SurdPoint& hi);

}  // namespace weil
