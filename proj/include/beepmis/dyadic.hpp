#pragma once

#include <cstdint>
#include <stdexcept>

// Exact arithmetic for the per-round analytic quantities. Levels are
// integers and beeping probabilities are powers of two, so p, d, d_light,
// eta and eta' are dyadic rationals and mu is a ratio of two small
// integers. Exact comparisons mean the classifier thresholds (10, 0.02,
// 0.001, 0.0001, 2^-15) need no floating-point tolerance.
namespace beepmis {

// value = mant / 2^exp, exp >= 0, normalized so mant is odd or exp is 0.
class Dyadic {
 public:
  constexpr Dyadic() = default;

  static Dyadic from_int(int64_t v) { return Dyadic(static_cast<__int128>(v), 0); }

  // 2^k for k <= 0 stored as 1 / 2^-k; k > 0 as an integer.
  static Dyadic pow2(int32_t k) {
    if (k >= 0) {
      if (k > 120) throw std::overflow_error("Dyadic::pow2 exponent too large");
      return Dyadic(static_cast<__int128>(1) << k, 0);
    }
    if (k < -120) throw std::overflow_error("Dyadic::pow2 exponent too small");
    return Dyadic(1, -k);
  }

  bool is_zero() const { return mant_ == 0; }

  Dyadic& operator+=(const Dyadic& o) {
    const int e = exp_ > o.exp_ ? exp_ : o.exp_;
    mant_ = shifted(mant_, e - exp_) + shifted(o.mant_, e - o.exp_);
    exp_ = e;
    normalize();
    return *this;
  }

  friend Dyadic operator+(Dyadic a, const Dyadic& b) {
    a += b;
    return a;
  }

  Dyadic& operator-=(const Dyadic& o) {
    const int e = exp_ > o.exp_ ? exp_ : o.exp_;
    mant_ = shifted(mant_, e - exp_) - shifted(o.mant_, e - o.exp_);
    exp_ = e;
    normalize();
    return *this;
  }

  // -1, 0, +1 against another dyadic.
  int cmp(const Dyadic& o) const {
    const int e = exp_ > o.exp_ ? exp_ : o.exp_;
    const __int128 a = shifted(mant_, e - exp_);
    const __int128 b = shifted(o.mant_, e - o.exp_);
    return a < b ? -1 : (a > b ? 1 : 0);
  }

  // -1, 0, +1 against num/den (den > 0). Cross-multiplication stays exact.
  int cmp_fraction(int64_t num, int64_t den) const {
    if (den <= 0) throw std::invalid_argument("cmp_fraction: den must be positive");
    __int128 lhs, rhs;
    if (__builtin_mul_overflow(mant_, static_cast<__int128>(den), &lhs) ||
        __builtin_mul_overflow(static_cast<__int128>(num), shifted(1, exp_), &rhs))
      throw std::overflow_error("Dyadic::cmp_fraction overflow");
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }

  bool operator==(const Dyadic& o) const { return cmp(o) == 0; }
  bool operator<(const Dyadic& o) const { return cmp(o) < 0; }
  bool operator<=(const Dyadic& o) const { return cmp(o) <= 0; }
  bool operator>(const Dyadic& o) const { return cmp(o) > 0; }
  bool operator>=(const Dyadic& o) const { return cmp(o) >= 0; }

  // Display only; comparisons go through cmp/cmp_fraction.
  double to_double() const {
    double m = static_cast<double>(static_cast<int64_t>(mant_ >> 64)) * 1.8446744073709552e19 +
               static_cast<double>(static_cast<uint64_t>(mant_));
    for (int e = exp_; e > 0; e -= 60) m /= static_cast<double>(1ull << (e < 60 ? e : 60));
    return m;
  }

 private:
  Dyadic(__int128 m, int e) : mant_(m), exp_(e) { normalize(); }

  static __int128 shifted(__int128 m, int by) {
    if (by == 0) return m;
    if (by > 124) throw std::overflow_error("Dyadic: exponent spread too large");
    const __int128 limit = static_cast<__int128>((~static_cast<unsigned __int128>(0)) >> 1) >> by;
    if (m > limit || m < -limit) throw std::overflow_error("Dyadic: mantissa overflow");
    return m << by;
  }

  void normalize() {
    if (mant_ == 0) {
      exp_ = 0;
      return;
    }
    while (exp_ > 0 && (mant_ & 1) == 0) {
      mant_ >>= 1;
      --exp_;
    }
  }

  __int128 mant_ = 0;
  int exp_ = 0;
};

// Small exact fraction for mu = min over neighbors of level/lmax; den > 0,
// |num| <= den at the call sites (mu is in [-1, 1]).
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  static Rational one() { return {1, 1}; }

  int cmp(const Rational& o) const {
    const __int128 a = static_cast<__int128>(num) * o.den;
    const __int128 b = static_cast<__int128>(o.num) * den;
    return a < b ? -1 : (a > b ? 1 : 0);
  }

  int cmp_int(int64_t v) const {
    const __int128 a = num;
    const __int128 b = static_cast<__int128>(v) * den;
    return a < b ? -1 : (a > b ? 1 : 0);
  }

  bool operator==(const Rational& o) const { return cmp(o) == 0; }
  bool operator<(const Rational& o) const { return cmp(o) < 0; }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

}  // namespace beepmis
