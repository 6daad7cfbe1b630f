#pragma once

#include <vector>

#include "copson/errors.hpp"
#include "copson/exact.hpp"
#include "copson/polynomial.hpp"
#include "copson/verdict.hpp"

namespace copson {

// Sturm chain p, p', -rem(...), ..., with every element content-stripped.
// Content is positive so sign patterns are unchanged.
inline std::vector<Polynomial> sturm_chain(const Polynomial& p) {
  if (p.is_zero()) raise(errc::zero_polynomial, "Sturm chain of zero polynomial");
  std::vector<Polynomial> chain;
  chain.push_back(p.primitive_part());
  Polynomial d = p.derivative();
  if (d.is_zero()) return chain;
  chain.push_back(d.primitive_part());
  while (true) {
    const Polynomial& a = chain[chain.size() - 2];
    const Polynomial& b = chain.back();
    Polynomial r = a.remainder(b);
    if (r.is_zero()) break;
    chain.push_back((-r).primitive_part());
  }
  return chain;
}

inline int sign_variations_at(const std::vector<Polynomial>& chain, const Rational& x) {
  int variations = 0;
  int prev = 0;
  for (const auto& s : chain) {
    int cur = sgn(s.eval(x));
    if (cur == 0) continue;
    if (prev != 0 && cur != prev) ++variations;
    prev = cur;
  }
  return variations;
}

// Number of distinct real roots in (a, b]; requires p(a) != 0.
inline long count_roots_in(const std::vector<Polynomial>& chain, const Rational& a, const Rational& b) {
  return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

namespace detail {

// Narrow a root bracket by bisection on the Sturm count; returns a point
// inside (or at) the located root interval.
inline Rational locate_root(const std::vector<Polynomial>& chain, const Polynomial& p, Rational a,
                            Rational b) {
  const Rational initial_width = b - a;
  for (int iter = 0; iter < 64; ++iter) {
    Rational mid((a + b) / 2);
    if (sgn(p.eval(mid)) == 0) return mid;
    if (count_roots_in(chain, a, mid) > 0)
      b = mid;
    else
      a = mid;
    if ((b - a) * Rational(1L << 30) < initial_width) break;
  }
  return Rational((a + b) / 2);
}

}  // namespace detail

// Exact positivity of p on the closed interval [a, b]: Positive iff
// p(a) > 0, p(b) > 0 and the Sturm count of roots in (a, b) is zero.
// The method is exact, so the verdict is never Undecided.
inline Verdict certify_poly_positive(const Polynomial& p, const Rational& a, const Rational& b) {
  if (p.is_zero()) raise(errc::zero_polynomial, "positivity query on zero polynomial");
  if (!(a < b)) raise(errc::range_error, "need a < b");

  Verdict v;
  v.method = Method::SturmExact;

  Rational pa = p.eval(a);
  if (sgn(pa) <= 0) {
    v.state = Sign::NonPositive;
    v.witness_point = a;
    return v;
  }
  Rational pb = p.eval(b);
  if (sgn(pb) <= 0) {
    v.state = Sign::NonPositive;
    v.witness_point = b;
    return v;
  }
  auto chain = sturm_chain(p);
  long roots = count_roots_in(chain, a, b);
  if (roots == 0) {
    v.state = Sign::Positive;
    return v;
  }
  v.state = Sign::NonPositive;
  v.witness_point = detail::locate_root(chain, p, a, b);
  return v;
}

}  // namespace copson
