#include "weil/surd.hpp"

namespace weil {

namespace {

int sgn_of(const BigInt& x) { return sgn(x) > 0 ? 1 : (sgn(x) < 0 ? -1 : 0); }

template <class T>
int sgn_of(T x) {
  return x > 0 ? 1 : (x < 0 ? -1 : 0);
}

}  // namespace

int SurdValue::sign() const {
  int su = sgn_of(u_);
  int sv = sgn_of(v_);
  if (sv == 0) return su;
  if (su == 0 || su == sv) return sv;
  // opposite signs: compare u^2 with v^2 d
  BigInt lhs = u_ * u_;
  BigInt rhs = v_ * v_ * d_;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;
  return c > 0 ? su : sv;
}

std::int64_t SurdValue::merged_radicand(const SurdValue& o) const {
  if (v_ == 0) return o.d_ != 0 ? o.d_ : d_;
  if (o.v_ != 0 && o.d_ != d_) throw std::invalid_argument("mixed radicands in SurdValue");
  return d_;
}

SurdValue SurdValue::operator+(const SurdValue& o) const {
  return SurdValue(u_ + o.u_, v_ + o.v_, merged_radicand(o));
}

SurdValue SurdValue::operator-(const SurdValue& o) const {
  return SurdValue(u_ - o.u_, v_ - o.v_, merged_radicand(o));
}

SurdValue SurdValue::operator*(const SurdValue& o) const {
  std::int64_t d = merged_radicand(o);
  return SurdValue(u_ * o.u_ + v_ * o.v_ * d, u_ * o.v_ + v_ * o.u_, d);
}

int surd_sign(i128 u, i128 v, std::int64_t d) {
  int su = sgn_of(u);
  int sv = sgn_of(v);
  if (sv == 0) return su;
  if (su == 0 || su == sv) return sv;
  i128 lhs, rhs;
  if (__builtin_mul_overflow(u, u, &lhs) || __builtin_mul_overflow(v, v, &rhs) ||
      __builtin_mul_overflow(rhs, static_cast<i128>(d), &rhs)) {
    throw OverflowError("surd sign comparison overflow");
  }
  if (lhs == rhs) return 0;
  return lhs > rhs ? su : sv;
}

}  // namespace weil
