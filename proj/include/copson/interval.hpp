#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cassert>
#include <optional>
#include <string>
#include <utility>

#include "copson/errors.hpp"
#include "copson/exact.hpp"

namespace copson {

inline constexpr mpfr_prec_t kDefaultPrecision = 128;
inline constexpr mpfr_prec_t kDefaultPrecisionCap = 4096;
inline constexpr mpfr_prec_t kMinPrecision = 16;

// Closed interval [lo, hi] with arbitrary-precision binary endpoints.
// lo is always rounded down and hi up, so the result of every operation
// encloses the exact real result (outward rounding).
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec) : prec_(checked(prec)) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }

  Interval(const Interval& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }

  Interval(Interval&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(lo_, kMinPrecision);
    mpfr_init2(hi_, kMinPrecision);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }

  Interval& operator=(const Interval& o) {
    if (this != &o) {
      Interval tmp(o);
      swap(tmp);
    }
    return *this;
  }

  Interval& operator=(Interval&& o) noexcept {
    swap(o);
    return *this;
  }

  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  void swap(Interval& o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    std::swap(prec_, o.prec_);
  }

  static Interval from_exact(const Rational& v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  // Hull of two exact rationals (either order).
  static Interval from_exact_bounds(const Rational& a, const Rational& b, mpfr_prec_t prec) {
    const Rational& lo = a <= b ? a : b;
    const Rational& hi = a <= b ? b : a;
    Interval r(prec);
    mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  static Interval from_long(long v, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_si(r.lo_, v, MPFR_RNDD);
    mpfr_set_si(r.hi_, v, MPFR_RNDU);
    return r;
  }

  static Interval zero(mpfr_prec_t prec) { return Interval(prec); }

  mpfr_prec_t precision() const { return prec_; }
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }

  bool is_point() const { return mpfr_equal_p(lo_, hi_); }
  bool strictly_positive() const { return mpfr_sgn(lo_) > 0; }
  bool strictly_negative() const { return mpfr_sgn(hi_) < 0; }
  bool nonpositive_upper() const { return mpfr_sgn(hi_) <= 0; }
  bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

  bool contains(const Rational& v) const {
    return mpfr_cmp_q(lo_, v.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, v.get_mpq_t()) >= 0;
  }

  bool contains(const Interval& o) const {
    return mpfr_lessequal_p(lo_, o.lo_) && mpfr_greaterequal_p(hi_, o.hi_);
  }

  bool intersects(const Interval& o) const {
    return mpfr_lessequal_p(lo_, o.hi_) && mpfr_lessequal_p(o.lo_, hi_);
  }

  // Endpoints are dyadic rationals, so the width is exact.
  Rational width_exact() const {
    Rational lo_q, hi_q;
    mpfr_get_q(lo_q.get_mpq_t(), lo_);
    mpfr_get_q(hi_q.get_mpq_t(), hi_);
    return Rational(hi_q - lo_q);
  }

  Rational lower_exact() const {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), lo_);
    return q;
  }

  Rational upper_exact() const {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), hi_);
    return q;
  }

  Rational midpoint_exact() const { return Rational((lower_exact() + upper_exact()) / 2); }

  // Decimal endpoint strings rounded outward, so the printed decimal
  // interval still encloses the value.
  std::string decimal_lo(int digits) const { return format(lo_, digits, MPFR_RNDD); }
  std::string decimal_hi(int digits) const { return format(hi_, digits, MPFR_RNDU); }

  mpfr_ptr mutable_lo() { return lo_; }
  mpfr_ptr mutable_hi() { return hi_; }

  void finish() {
    // Invariant after every op.
    assert(mpfr_lessequal_p(lo_, hi_));
  }

 private:
  static mpfr_prec_t checked(mpfr_prec_t p) {
    if (p < kMinPrecision) raise(errc::range_error, "precision below 16 bits");
    return p;
  }

  static std::string format(mpfr_srcptr v, int digits, mpfr_rnd_t rnd) {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*R*e", digits, rnd, v);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  mpfr_t lo_, hi_;
  mpfr_prec_t prec_;
};

namespace detail {
inline mpfr_prec_t join_prec(const Interval& a, const Interval& b) {
  return std::max(a.precision(), b.precision());
}
}  // namespace detail

inline Interval add(const Interval& a, const Interval& b) {
  Interval r(detail::join_prec(a, b));
  mpfr_add(r.mutable_lo(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_add(r.mutable_hi(), a.hi(), b.hi(), MPFR_RNDU);
  r.finish();
  return r;
}

inline Interval sub(const Interval& a, const Interval& b) {
  Interval r(detail::join_prec(a, b));
  mpfr_sub(r.mutable_lo(), a.lo(), b.hi(), MPFR_RNDD);
  mpfr_sub(r.mutable_hi(), a.hi(), b.lo(), MPFR_RNDU);
  r.finish();
  return r;
}

inline Interval neg(const Interval& a) {
  Interval r(a.precision());
  mpfr_neg(r.mutable_lo(), a.hi(), MPFR_RNDD);
  mpfr_neg(r.mutable_hi(), a.lo(), MPFR_RNDU);
  r.finish();
  return r;
}

inline Interval mul(const Interval& a, const Interval& b) {
  Interval r(detail::join_prec(a, b));
  mpfr_t t;
  mpfr_init2(t, r.precision());
  mpfr_mul(r.mutable_lo(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_mul(t, a.lo(), b.hi(), MPFR_RNDD);
  mpfr_min(r.mutable_lo(), r.lo(), t, MPFR_RNDD);
  mpfr_mul(t, a.hi(), b.lo(), MPFR_RNDD);
  mpfr_min(r.mutable_lo(), r.lo(), t, MPFR_RNDD);
  mpfr_mul(t, a.hi(), b.hi(), MPFR_RNDD);
  mpfr_min(r.mutable_lo(), r.lo(), t, MPFR_RNDD);

  mpfr_mul(r.mutable_hi(), a.lo(), b.lo(), MPFR_RNDU);
  mpfr_mul(t, a.lo(), b.hi(), MPFR_RNDU);
  mpfr_max(r.mutable_hi(), r.hi(), t, MPFR_RNDU);
  mpfr_mul(t, a.hi(), b.lo(), MPFR_RNDU);
  mpfr_max(r.mutable_hi(), r.hi(), t, MPFR_RNDU);
  mpfr_mul(t, a.hi(), b.hi(), MPFR_RNDU);
  mpfr_max(r.mutable_hi(), r.hi(), t, MPFR_RNDU);
  mpfr_clear(t);
  r.finish();
  return r;
}

inline Interval div(const Interval& a, const Interval& b) {
  if (b.contains_zero()) raise(errc::division_by_zero, "interval divisor contains zero");
  Interval r(detail::join_prec(a, b));
  mpfr_t t;
  mpfr_init2(t, r.precision());
  mpfr_div(r.mutable_lo(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_div(t, a.lo(), b.hi(), MPFR_RNDD);
  mpfr_min(r.mutable_lo(), r.lo(), t, MPFR_RNDD);
  mpfr_div(t, a.hi(), b.lo(), MPFR_RNDD);
  mpfr_min(r.mutable_lo(), r.lo(), t, MPFR_RNDD);
  mpfr_div(t, a.hi(), b.hi(), MPFR_RNDD);
  mpfr_min(r.mutable_lo(), r.lo(), t, MPFR_RNDD);

  mpfr_div(r.mutable_hi(), a.lo(), b.lo(), MPFR_RNDU);
  mpfr_div(t, a.lo(), b.hi(), MPFR_RNDU);
  mpfr_max(r.mutable_hi(), r.hi(), t, MPFR_RNDU);
  mpfr_div(t, a.hi(), b.lo(), MPFR_RNDU);
  mpfr_max(r.mutable_hi(), r.hi(), t, MPFR_RNDU);
  mpfr_div(t, a.hi(), b.hi(), MPFR_RNDU);
  mpfr_max(r.mutable_hi(), r.hi(), t, MPFR_RNDU);
  mpfr_clear(t);
  r.finish();
  return r;
}

// Fused ops with an exact rational operand (tighter and cheaper than
// converting the rational to an interval first).
inline Interval add_q(const Interval& a, const Rational& q) {
  Interval r(a.precision());
  mpfr_add_q(r.mutable_lo(), a.lo(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_add_q(r.mutable_hi(), a.hi(), q.get_mpq_t(), MPFR_RNDU);
  r.finish();
  return r;
}

inline Interval sub_q(const Interval& a, const Rational& q) {
  Interval r(a.precision());
  mpfr_sub_q(r.mutable_lo(), a.lo(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_sub_q(r.mutable_hi(), a.hi(), q.get_mpq_t(), MPFR_RNDU);
  r.finish();
  return r;
}

inline Interval mul_q(const Interval& a, const Rational& q) {
  Interval r(a.precision());
  if (sgn(q) >= 0) {
    mpfr_mul_q(r.mutable_lo(), a.lo(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(r.mutable_hi(), a.hi(), q.get_mpq_t(), MPFR_RNDU);
  } else {
    mpfr_mul_q(r.mutable_lo(), a.hi(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(r.mutable_hi(), a.lo(), q.get_mpq_t(), MPFR_RNDU);
  }
  r.finish();
  return r;
}

inline Interval div_q(const Interval& a, const Rational& q) {
  if (sgn(q) == 0) raise(errc::division_by_zero, "rational divisor is zero");
  Interval r(a.precision());
  if (sgn(q) > 0) {
    mpfr_div_q(r.mutable_lo(), a.lo(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_div_q(r.mutable_hi(), a.hi(), q.get_mpq_t(), MPFR_RNDU);
  } else {
    mpfr_div_q(r.mutable_lo(), a.hi(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_div_q(r.mutable_hi(), a.lo(), q.get_mpq_t(), MPFR_RNDU);
  }
  r.finish();
  return r;
}

inline Interval operator+(const Interval& a, const Interval& b) { return add(a, b); }
inline Interval operator-(const Interval& a, const Interval& b) { return sub(a, b); }
inline Interval operator*(const Interval& a, const Interval& b) { return mul(a, b); }
inline Interval operator/(const Interval& a, const Interval& b) { return div(a, b); }
inline Interval operator-(const Interval& a) { return neg(a); }

inline Interval operator+(const Interval& a, const Rational& q) { return add_q(a, q); }
inline Interval operator+(const Rational& q, const Interval& a) { return add_q(a, q); }
inline Interval operator-(const Interval& a, const Rational& q) { return sub_q(a, q); }
inline Interval operator-(const Rational& q, const Interval& a) { return add_q(neg(a), q); }
inline Interval operator*(const Interval& a, const Rational& q) { return mul_q(a, q); }
inline Interval operator*(const Rational& q, const Interval& a) { return mul_q(a, q); }
inline Interval operator/(const Interval& a, const Rational& q) { return div_q(a, q); }
inline Interval operator/(const Rational& q, const Interval& a) {
  return div(Interval::from_exact(q, a.precision()), a);
}

inline Interval operator+(const Interval& a, long v) { return add_q(a, Rational(v)); }
inline Interval operator-(const Interval& a, long v) { return sub_q(a, Rational(v)); }
inline Interval operator-(long v, const Interval& a) { return add_q(neg(a), Rational(v)); }
inline Interval operator*(const Interval& a, long v) { return mul_q(a, Rational(v)); }
inline Interval operator/(const Interval& a, long v) { return div_q(a, Rational(v)); }
inline Interval operator+(long v, const Interval& a) { return add_q(a, Rational(v)); }

inline Interval square(const Interval& a) {
  Interval r(a.precision());
  int slo = mpfr_sgn(a.lo());
  int shi = mpfr_sgn(a.hi());
  if (slo >= 0) {
    mpfr_sqr(r.mutable_lo(), a.lo(), MPFR_RNDD);
    mpfr_sqr(r.mutable_hi(), a.hi(), MPFR_RNDU);
  } else if (shi <= 0) {
    mpfr_sqr(r.mutable_lo(), a.hi(), MPFR_RNDD);
    mpfr_sqr(r.mutable_hi(), a.lo(), MPFR_RNDU);
  } else {
    mpfr_set_zero(r.mutable_lo(), 1);
    mpfr_t t;
    mpfr_init2(t, r.precision());
    mpfr_sqr(r.mutable_hi(), a.lo(), MPFR_RNDU);
    mpfr_sqr(t, a.hi(), MPFR_RNDU);
    mpfr_max(r.mutable_hi(), r.hi(), t, MPFR_RNDU);
    mpfr_clear(t);
  }
  r.finish();
  return r;
}

inline Interval sqrt(const Interval& a) {
  if (mpfr_sgn(a.lo()) < 0) raise(errc::nonpositive_base, "sqrt of interval with negative lower bound");
  Interval r(a.precision());
  mpfr_sqrt(r.mutable_lo(), a.lo(), MPFR_RNDD);
  mpfr_sqrt(r.mutable_hi(), a.hi(), MPFR_RNDU);
  r.finish();
  return r;
}

inline Interval log(const Interval& a) {
  if (mpfr_sgn(a.lo()) <= 0) raise(errc::nonpositive_base, "log of interval touching zero");
  Interval r(a.precision());
  mpfr_log(r.mutable_lo(), a.lo(), MPFR_RNDD);
  mpfr_log(r.mutable_hi(), a.hi(), MPFR_RNDU);
  r.finish();
  return r;
}

namespace detail {

// x^k for x > 0; monotone in x with direction given by the sign of k.
inline Interval pow_int(const Interval& base, long k) {
  Interval r(base.precision());
  if (k == 0) {
    mpfr_set_si(r.mutable_lo(), 1, MPFR_RNDD);
    mpfr_set_si(r.mutable_hi(), 1, MPFR_RNDU);
  } else if (k > 0) {
    mpfr_pow_si(r.mutable_lo(), base.lo(), k, MPFR_RNDD);
    mpfr_pow_si(r.mutable_hi(), base.hi(), k, MPFR_RNDU);
  } else {
    mpfr_pow_si(r.mutable_lo(), base.hi(), k, MPFR_RNDD);
    mpfr_pow_si(r.mutable_hi(), base.lo(), k, MPFR_RNDU);
  }
  r.finish();
  return r;
}

// All-corner fallback when neither monotonicity direction is known.
inline Interval pow_corners(const Interval& base, const Interval& expo) {
  Interval r(join_prec(base, expo));
  mpfr_t t;
  mpfr_init2(t, r.precision());
  mpfr_srcptr xs[2] = {base.lo(), base.hi()};
  mpfr_srcptr es[2] = {expo.lo(), expo.hi()};
  bool first = true;
  for (auto x : xs)
    for (auto e : es) {
      mpfr_pow(t, x, e, MPFR_RNDD);
      if (first)
        mpfr_set(r.mutable_lo(), t, MPFR_RNDD);
      else
        mpfr_min(r.mutable_lo(), r.lo(), t, MPFR_RNDD);
      mpfr_pow(t, x, e, MPFR_RNDU);
      if (first)
        mpfr_set(r.mutable_hi(), t, MPFR_RNDU);
      else
        mpfr_max(r.mutable_hi(), r.hi(), t, MPFR_RNDU);
      first = false;
    }
  mpfr_clear(t);
  r.finish();
  return r;
}

}  // namespace detail

// Enclosure of { x^e : x in base, e in expo } for base.lo > 0. For x >= 1
// the map is increasing in e, for x <= 1 decreasing; in x the direction is
// the sign of e. Two mpfr_pow calls cover the common cases.
inline Interval pow(const Interval& base, const Interval& expo) {
  if (mpfr_sgn(base.lo()) <= 0) raise(errc::nonpositive_base, "power base must be strictly positive");
  int elo = mpfr_sgn(expo.lo());
  int ehi = mpfr_sgn(expo.hi());
  if (elo == 0 && ehi == 0) {
    Interval one(detail::join_prec(base, expo));
    mpfr_set_si(one.mutable_lo(), 1, MPFR_RNDD);
    mpfr_set_si(one.mutable_hi(), 1, MPFR_RNDU);
    return one;
  }
  bool e_nonneg = elo >= 0;
  bool e_nonpos = ehi <= 0;
  if (!e_nonneg && !e_nonpos) return detail::pow_corners(base, expo);

  bool base_ge1 = mpfr_cmp_si(base.lo(), 1) >= 0;
  bool base_le1 = mpfr_cmp_si(base.hi(), 1) <= 0;
  if (!base_ge1 && !base_le1) return detail::pow_corners(base, expo);

  // x endpoint for each result endpoint follows the sign of e.
  mpfr_srcptr x_for_lo = e_nonneg ? base.lo() : base.hi();
  mpfr_srcptr x_for_hi = e_nonneg ? base.hi() : base.lo();
  // e endpoint follows whether the base is above or below 1.
  mpfr_srcptr e_for_lo = base_ge1 ? expo.lo() : expo.hi();
  mpfr_srcptr e_for_hi = base_ge1 ? expo.hi() : expo.lo();

  Interval r(detail::join_prec(base, expo));
  mpfr_pow(r.mutable_lo(), x_for_lo, e_for_lo, MPFR_RNDD);
  mpfr_pow(r.mutable_hi(), x_for_hi, e_for_hi, MPFR_RNDU);
  r.finish();
  return r;
}

// x^e for exact rational exponent; the spec's interval power primitive.
inline Interval pow(const Interval& base, const Rational& expo, mpfr_prec_t prec) {
  if (mpfr_sgn(base.lo()) <= 0) raise(errc::nonpositive_base, "power base must be strictly positive");
  if (is_integer(expo) && mpz_fits_slong_p(expo.get_num().get_mpz_t())) {
    Interval b = base.precision() == prec ? base : [&] {
      Interval t(prec);
      mpfr_set(t.mutable_lo(), base.lo(), MPFR_RNDD);
      mpfr_set(t.mutable_hi(), base.hi(), MPFR_RNDU);
      return t;
    }();
    return detail::pow_int(b, mpz_get_si(expo.get_num().get_mpz_t()));
  }
  if (expo == Rational(1, 2)) {
    Interval r(prec);
    mpfr_sqrt(r.mutable_lo(), base.lo(), MPFR_RNDD);
    mpfr_sqrt(r.mutable_hi(), base.hi(), MPFR_RNDU);
    r.finish();
    return r;
  }
  return pow(base, Interval::from_exact(expo, prec));
}

inline Interval pow(const Interval& base, const Rational& expo) {
  return pow(base, expo, base.precision());
}

inline Interval hull(const Interval& a, const Interval& b) {
  Interval r(detail::join_prec(a, b));
  mpfr_min(r.mutable_lo(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_max(r.mutable_hi(), a.hi(), b.hi(), MPFR_RNDU);
  r.finish();
  return r;
}

inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  if (!a.intersects(b)) return std::nullopt;
  Interval r(detail::join_prec(a, b));
  mpfr_max(r.mutable_lo(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_min(r.mutable_hi(), a.hi(), b.hi(), MPFR_RNDU);
  r.finish();
  return r;
}

}  // namespace copson
