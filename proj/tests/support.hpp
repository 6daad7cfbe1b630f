#pragma once

// Shared test helpers. Reference values are computed with plain mpfr calls
// at 512 bits, independently of the Interval layer under test, and compared
// in exact rational arithmetic.

#include <mpfr.h>

#include <string>

#include <copson/exact.hpp>
#include <copson/interval.hpp>

namespace testsupport {

using copson::Integer;
using copson::Interval;
using copson::Rational;

constexpr mpfr_prec_t kRefPrec = 512;

// x^e rounded to nearest at 512 bits, returned exactly as a rational.
inline Rational ref_pow(const Rational& base, const Rational& expo) {
  mpfr_t b, e, r;
  mpfr_inits2(kRefPrec, b, e, r, (mpfr_ptr)0);
  mpfr_set_q(b, base.get_mpq_t(), MPFR_RNDN);
  mpfr_set_q(e, expo.get_mpq_t(), MPFR_RNDN);
  mpfr_pow(r, b, e, MPFR_RNDN);
  Rational out;
  mpfr_get_q(out.get_mpq_t(), r);
  mpfr_clears(b, e, r, (mpfr_ptr)0);
  return out;
}

inline Rational ref_sqrt(const Rational& x) {
  mpfr_t b, r;
  mpfr_inits2(kRefPrec, b, r, (mpfr_ptr)0);
  mpfr_set_q(b, x.get_mpq_t(), MPFR_RNDN);
  mpfr_sqrt(r, b, MPFR_RNDN);
  Rational out;
  mpfr_get_q(out.get_mpq_t(), r);
  mpfr_clears(b, r, (mpfr_ptr)0);
  return out;
}

inline Rational ref_log(const Rational& x) {
  mpfr_t b, r;
  mpfr_inits2(kRefPrec, b, r, (mpfr_ptr)0);
  mpfr_set_q(b, x.get_mpq_t(), MPFR_RNDN);
  mpfr_log(r, b, MPFR_RNDN);
  Rational out;
  mpfr_get_q(out.get_mpq_t(), r);
  mpfr_clears(b, r, (mpfr_ptr)0);
  return out;
}

inline Rational ref_slack(const Rational& ref) {
  Rational mag(abs(ref));
  if (mag < 1) mag = 1;
  Integer big = Integer(1) << 400;
  return Rational(mag / Rational(big));
}

// The interval is consistent with containing the true value the reference
// approximates (reference error << slack).
inline bool encloses_ref(const Interval& iv, const Rational& ref) {
  Rational s = ref_slack(ref);
  return iv.lower_exact() <= ref + s && iv.upper_exact() >= ref - s;
}

// The whole interval lies inside [center - radius, center + radius];
// asserts both value and tightness against a frozen decimal literal.
inline bool within_band(const Interval& iv, const std::string& center, const std::string& radius) {
  Rational c = copson::parse_rational(center);
  Rational r = copson::parse_rational(radius);
  return iv.lower_exact() >= c - r && iv.upper_exact() <= c + r;
}

inline Rational width_of(const Interval& iv) { return iv.width_exact(); }

inline Rational pow2(long e) {  // 2^e as a rational, e may be negative
  Integer big = Integer(1) << (e >= 0 ? e : -e);
  return e >= 0 ? Rational(big) : Rational(Rational(1) / Rational(big));
}

}  // namespace testsupport
