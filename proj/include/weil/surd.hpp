#pragma once

#include <cstdint>

#include "weil/arith.hpp"

namespace weil {

/// Exact element u + v·√d of ℤ[√d] for a non-square radicand d (a prime in
/// practice). With v == 0 it degenerates to a plain integer, which is how the
/// even-exponent case q = p^(2k) is carried.
class SurdValue {
 public:
  SurdValue() = default;
  SurdValue(BigInt u, BigInt v, std::int64_t radicand)
      : u_(std::move(u)), v_(std::move(v)), d_(radicand) {}
  static SurdValue integer(BigInt u, std::int64_t radicand = 0) {
    return SurdValue(std::move(u), 0, radicand);
  }

  const BigInt& rational_part() const { return u_; }
  const BigInt& surd_part() const { return v_; }
  std::int64_t radicand() const { return d_; }

  /// Exact sign in {-1, 0, 1}; never consults floating point.
  int sign() const;
  bool is_zero() const { return u_ == 0 && v_ == 0; }

  SurdValue operator+(const SurdValue& o) const;
  SurdValue operator-(const SurdValue& o) const;
  SurdValue operator*(const SurdValue& o) const;
  SurdValue operator-() const { return SurdValue(-u_, -v_, d_); }

  friend bool operator==(const SurdValue& a, const SurdValue& b) {
    return a.u_ == b.u_ && a.v_ == b.v_;
  }

 private:
  std::int64_t merged_radicand(const SurdValue& o) const;

  BigInt u_ = 0;
  BigInt v_ = 0;
  std::int64_t d_ = 0;
};

/// Sign of u + v·√d for 128-bit operands; throws OverflowError when the
/// squared comparison does not fit.
int surd_sign(i128 u, i128 v, std::int64_t d);

}  // namespace weil
