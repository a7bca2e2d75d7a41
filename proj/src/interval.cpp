#include "distlab/interval.hpp"

#include <cstdlib>
#include <string>

#include "distlab/errors.hpp"

namespace distlab {

Interval::Interval(mpfr_prec_t precision) {
  mpfr_init2(lo_, precision);
  mpfr_init2(hi_, precision);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) : Interval(other.precision()) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.precision());
    mpfr_set_prec(hi_, other.precision());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::exact(const Rational& q, mpfr_prec_t precision) {
  Interval r(precision);
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::log2_3(mpfr_prec_t precision) {
  Interval r(precision);
  mpfr_t three;
  mpfr_init2(three, 8);
  mpfr_set_ui(three, 3, MPFR_RNDN);
  mpfr_log2(r.lo_, three, MPFR_RNDD);
  mpfr_log2(r.hi_, three, MPFR_RNDU);
  mpfr_clear(three);
  return r;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(std::max(a.precision(), b.precision()));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval operator*(const Interval& a, const Interval& b) {
  if (mpfr_sgn(a.lo_) < 0 || mpfr_sgn(b.lo_) < 0) throw InvalidParam("interval product needs nonnegative operands");
  Interval r(std::max(a.precision(), b.precision()));
  mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_mul(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Interval pow(const Interval& base, const Interval& exponent) {
  if (mpfr_sgn(base.lo_) <= 0) throw InvalidParam("interval power needs a positive base");
  // x^y is monotone in each argument for x > 0, so the extremes sit at corners.
  Interval r(std::max(base.precision(), exponent.precision()));
  mpfr_t t;
  mpfr_init2(t, r.precision());
  bool first = true;
  for (mpfr_srcptr x : {base.lo_, base.hi_})
    for (mpfr_srcptr y : {exponent.lo_, exponent.hi_}) {
      mpfr_pow(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_pow(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  mpfr_clear(t);
  return r;
}

mpfr_prec_t initial_precision() {
  if (const char* env = std::getenv("DISTLAB_PRECISION_BITS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= MPFR_PREC_MIN && v <= kMaxPrecision) return static_cast<mpfr_prec_t>(v);
  }
  return 128;
}

Decision decide_le(const std::function<Interval(mpfr_prec_t)>& lhs, const std::function<Interval(mpfr_prec_t)>& rhs) {
  for (mpfr_prec_t p = initial_precision(); p <= kMaxPrecision; p *= 2) {
    Interval a = lhs(p), b = rhs(p);
    if (certainly_le(a, b)) return {true, p};
    if (certainly_gt(a, b)) return {false, p};
  }
  throw BracketTooCoarse("interval comparison undecided at " + std::to_string(kMaxPrecision) + " bits");
}

Rational pow3(long m) {
  mpz_class z;
  mpz_ui_pow_ui(z.get_mpz_t(), 3, static_cast<unsigned long>(m < 0 ? -m : m));
  return m < 0 ? Rational(mpz_class(1), z) : Rational(z);
}

Decision decide_le_scaled_power(const Rational& lhs, const Rational& scale, const Rational& base) {
  if (sgn(scale) < 0 || sgn(base) <= 0) throw InvalidParam("scale must be nonnegative and base positive");
  if (sgn(scale) == 0) return {lhs <= 0, 0};
  long m = 0;
  if (is_power_of_two(base, &m)) return {lhs <= scale * pow3(m), 0};
  return decide_le([&](mpfr_prec_t p) { return Interval::exact(lhs, p); },
                   [&](mpfr_prec_t p) {
                     return Interval::exact(scale, p) * pow(Interval::exact(base, p), Interval::log2_3(p));
                   });
}

Decision decide_superadditive(const Rational& x, const Rational& y) {
  if (sgn(x) <= 0 || x > y) throw InvalidParam("need 0 < x <= y");
  long sx = 0, sy = 0, sxy = 0;
  if (is_power_of_two(x, &sx) && is_power_of_two(y, &sy) && is_power_of_two(Rational(x + y), &sxy))
    return {2 * pow3(sx) + pow3(sy) <= pow3(sxy), 0};
  // Divide through by y^c: 2t^c + 1 <= (1+t)^c with t = x/y in (0, 1].
  const Rational t = x / y;
  if (t == 1) return {true, 0};  // 2 + 1 = 2^c
  return decide_le(
      [&](mpfr_prec_t p) {
        Interval c = Interval::log2_3(p);
        Interval tc = pow(Interval::exact(t, p), c);
        return Interval::exact(Rational(2), p) * tc + Interval::exact(Rational(1), p);
      },
      [&](mpfr_prec_t p) { return pow(Interval::exact(Rational(1 + t), p), Interval::log2_3(p)); });
}

}  // namespace distlab
