#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

#include "copson/errors.hpp"

namespace copson {

// Exact rational scalar. gmpxx keeps values canonical (lowest terms,
// positive denominator) after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer factorial(unsigned long k) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return f;
}

// Generalized binomial coefficient: beta (beta-1) ... (beta-k+1) / k!.
// Total for every rational beta and k >= 0; gen_binomial(beta, 0) == 1.
inline Rational gen_binomial(const Rational& beta, unsigned long k) {
  Rational num(1);
  for (unsigned long i = 0; i < k; ++i) num *= beta - static_cast<long>(i);
  return Rational(num / Rational(factorial(k)));
}

// x^e when the result is an exact rational, nullopt otherwise.
// Requires x >= 0 (and e > 0 when x == 0). With e = p/q in lowest terms the
// result is rational iff numerator and denominator of x are exact q-th powers.
inline std::optional<Rational> exact_rational_pow(const Rational& x, const Rational& e) {
  if (sgn(x) < 0) return std::nullopt;
  if (sgn(x) == 0) {
    if (sgn(e) > 0) return Rational(0);
    if (sgn(e) == 0) return Rational(1);
    return std::nullopt;
  }
  const Integer& p = e.get_num();
  const Integer& q = e.get_den();
  Integer root_num, root_den;
  if (q == 1) {
    root_num = x.get_num();
    root_den = x.get_den();
  } else {
    if (!mpz_fits_ulong_p(q.get_mpz_t())) return std::nullopt;
    unsigned long qu = mpz_get_ui(q.get_mpz_t());
    if (!mpz_root(root_num.get_mpz_t(), x.get_num().get_mpz_t(), qu)) return std::nullopt;
    if (!mpz_root(root_den.get_mpz_t(), x.get_den().get_mpz_t(), qu)) return std::nullopt;
  }
  Integer pabs = abs(p);
  if (!mpz_fits_ulong_p(pabs.get_mpz_t())) return std::nullopt;
  unsigned long pu = mpz_get_ui(pabs.get_mpz_t());
  Integer rn, rd;
  mpz_pow_ui(rn.get_mpz_t(), root_num.get_mpz_t(), pu);
  mpz_pow_ui(rd.get_mpz_t(), root_den.get_mpz_t(), pu);
  Rational out = sgn(p) >= 0 ? Rational(rn, rd) : Rational(rd, rn);
  out.canonicalize();
  return out;
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline Integer parse_unsigned_integer(std::string_view s, std::string_view full) {
  if (!all_digits(s)) raise(errc::parse_error, "not a number: '" + std::string(full) + "'");
  return Integer(std::string(s), 10);
}

}  // namespace detail

// Accepts "p/q", plain integers, and decimal literals ("0.34", "2.5e-3").
// Decimals are converted exactly; there is no floating-point intermediate.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) raise(errc::parse_error, "empty rational literal");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
    if (s.empty()) raise(errc::parse_error, "sign with no digits: '" + std::string(text) + "'");
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = detail::parse_unsigned_integer(s.substr(0, slash), text);
    Integer den = detail::parse_unsigned_integer(s.substr(slash + 1), text);
    if (den == 0) raise(errc::parse_error, "zero denominator: '" + std::string(text) + "'");
    value = Rational(num, den);
    value.canonicalize();
  } else {
    std::string_view mantissa = s;
    long exp10 = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
      mantissa = s.substr(0, epos);
      std::string_view es = s.substr(epos + 1);
      bool eneg = false;
      if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
        eneg = es.front() == '-';
        es.remove_prefix(1);
      }
      if (!detail::all_digits(es) || es.size() > 6)
        raise(errc::parse_error, "bad exponent: '" + std::string(text) + "'");
      exp10 = std::stol(std::string(es));
      if (eneg) exp10 = -exp10;
    }
    std::string digits;
    long frac_len = 0;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      digits = std::string(mantissa.substr(0, dot)) + std::string(mantissa.substr(dot + 1));
      frac_len = static_cast<long>(mantissa.size() - dot - 1);
    } else {
      digits = std::string(mantissa);
    }
    if (!detail::all_digits(digits)) raise(errc::parse_error, "not a number: '" + std::string(text) + "'");
    Integer mant(digits, 10);
    long net = exp10 - frac_len;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(net >= 0 ? net : -net));
    value = net >= 0 ? Rational(mant * scale) : Rational(mant, scale);
    value.canonicalize();
  }
  if (negative) value = -value;
  return value;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace copson
