#pragma once

#include <mpfr.h>

#include <functional>

#include "distlab/rational.hpp"

namespace distlab {

// Closed interval [lo, hi] with MPFR endpoints rounded outward.
class Interval {
 public:
  explicit Interval(mpfr_prec_t precision);
  Interval(const Interval& other);
  Interval& operator=(const Interval& other);
  ~Interval();

  static Interval exact(const Rational& q, mpfr_prec_t precision);
  static Interval log2_3(mpfr_prec_t precision);

  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }

  friend Interval operator+(const Interval& a, const Interval& b);
  // Both operands must be nonnegative.
  friend Interval operator*(const Interval& a, const Interval& b);
  // base^exponent for a strictly positive base.
  friend Interval pow(const Interval& base, const Interval& exponent);

  // Certainly a <= b, certainly a > b.
  friend bool certainly_le(const Interval& a, const Interval& b) { return mpfr_lessequal_p(a.hi_, b.lo_) != 0; }
  friend bool certainly_gt(const Interval& a, const Interval& b) { return mpfr_greater_p(a.lo_, b.hi_) != 0; }

 private:
  mpfr_t lo_, hi_;
};

// Starting precision: DISTLAB_PRECISION_BITS if set and valid, else 128.
mpfr_prec_t initial_precision();
constexpr mpfr_prec_t kMaxPrecision = 4096;

struct Decision {
  bool holds = false;
  long precision = 0;  // bits needed; 0 when decided exactly
};

// Decides lhs(p) <= rhs(p), doubling p until the intervals separate; throws
// BracketTooCoarse past kMaxPrecision. Touching-but-equal values never
// separate, so callers settle exact equalities before coming here.
Decision decide_le(const std::function<Interval(mpfr_prec_t)>& lhs, const std::function<Interval(mpfr_prec_t)>& rhs);

// lhs <= scale * base^{log2 3}, for scale >= 0 and base > 0. Exact when base
// is a power of two (then base^{log2 3} = 3^m).
Decision decide_le_scaled_power(const Rational& lhs, const Rational& scale, const Rational& base);

// 2x^c + y^c <= (x+y)^c with c = log2 3, for 0 < x <= y.
Decision decide_superadditive(const Rational& x, const Rational& y);

Rational pow3(long m);

}  // namespace distlab
