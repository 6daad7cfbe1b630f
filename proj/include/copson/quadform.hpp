#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "copson/errors.hpp"
#include "copson/exact.hpp"
#include "copson/interval.hpp"
#include "copson/prng.hpp"
#include "copson/verdict.hpp"

namespace copson {

// Symmetric tridiagonal matrix M of the quadratic form
//   sum_{n=1}^{N+1} |A_n - A_{n-1}|^2 / l_n - sum_{n=1}^{N} w_n |A_n|^2
// on vectors supported in [1, N] (A_0 = A_{N+1} = 0):
//   diag_n = 1/l_n + 1/l_{n+1} - w_n, off_n = -1/l_{n+1}.
// The boundary difference term |0 - A_N|^2 / l_{N+1} is folded into diag_N.
struct TridiagonalForm {
  long N = 0;
  std::vector<Interval> diag;  // N entries
  std::vector<Interval> off;   // N-1 entries
};

using IntervalAccessor = std::function<Interval(long)>;

inline TridiagonalForm build_form(const IntervalAccessor& lambda, const IntervalAccessor& weight,
                                  long N) {
  if (N < 1) raise(errc::range_error, "form size N must be >= 1");
  TridiagonalForm form;
  form.N = N;
  form.diag.reserve(static_cast<std::size_t>(N));
  form.off.reserve(static_cast<std::size_t>(N - 1));
  Interval inv_next = Rational(1) / lambda(1);
  for (long n = 1; n <= N; ++n) {
    Interval inv_here = inv_next;
    inv_next = Rational(1) / lambda(n + 1);
    form.diag.push_back(inv_here + inv_next - weight(n));
    if (n < N) form.off.push_back(neg(inv_next));
  }
  return form;
}

// A^T M A for exact rational A (converted outward inside).
inline Interval form_value(const TridiagonalForm& form, const std::vector<Rational>& A,
                           mpfr_prec_t prec) {
  if (static_cast<long>(A.size()) != form.N) raise(errc::range_error, "vector length must equal N");
  Interval acc = Interval::zero(prec);
  for (long n = 0; n < form.N; ++n) {
    const Rational& an = A[static_cast<std::size_t>(n)];
    acc = acc + mul_q(form.diag[static_cast<std::size_t>(n)], Rational(an * an));
    if (n + 1 < form.N) {
      const Rational& an1 = A[static_cast<std::size_t>(n + 1)];
      acc = acc + mul_q(form.off[static_cast<std::size_t>(n)], Rational(2 * an * an1));
    }
  }
  return acc;
}

// Number of eigenvalues strictly below sigma via the signed pivot recursion
//   d_1 = diag_1 - sigma, d_k = diag_k - sigma - off_{k-1}^2 / d_{k-1},
// counting negative pivots. nullopt when a pivot interval straddles zero.
inline std::optional<long> count_eigs_below(const TridiagonalForm& form, const Rational& sigma) {
  long negatives = 0;
  std::optional<Interval> prev;
  for (long k = 0; k < form.N; ++k) {
    Interval d = sub_q(form.diag[static_cast<std::size_t>(k)], sigma);
    if (k > 0) d = d - square(form.off[static_cast<std::size_t>(k - 1)]) / *prev;
    if (d.strictly_negative())
      ++negatives;
    else if (!d.strictly_positive())
      return std::nullopt;  // pivot straddles zero at this precision
    prev = std::move(d);
  }
  return negatives;
}

// Exact Gershgorin bounds on the spectrum, from the interval entries.
inline std::pair<Rational, Rational> gershgorin_bounds(const TridiagonalForm& form) {
  Rational lo, hi;
  for (long k = 0; k < form.N; ++k) {
    const Interval& d = form.diag[static_cast<std::size_t>(k)];
    Rational radius(0);
    auto off_mag = [&](long j) {
      const Interval& o = form.off[static_cast<std::size_t>(j)];
      Rational a(abs(o.lower_exact())), b(abs(o.upper_exact()));
      return a > b ? a : b;
    };
    if (k > 0) radius += off_mag(k - 1);
    if (k + 1 < form.N) radius += off_mag(k);
    Rational cand_lo = d.lower_exact() - radius;
    Rational cand_hi = d.upper_exact() + radius;
    if (k == 0 || cand_lo < lo) lo = cand_lo;
    if (k == 0 || cand_hi > hi) hi = cand_hi;
  }
  return {lo, hi};
}

// Width-<=tol bracket around the smallest eigenvalue, by bisection on the
// pivot count between Gershgorin bounds. nullopt if a pivot straddle makes
// some count undecidable at this precision.
inline std::optional<Interval> min_eig_bracket(const TridiagonalForm& form, const Rational& tol,
                                               mpfr_prec_t prec) {
  if (sgn(tol) <= 0) raise(errc::range_error, "tolerance must be positive");
  auto [glo, ghi] = gershgorin_bounds(form);
  Rational lo = glo, hi = ghi + tol;  // count(lo) = 0, count(hi) >= 1
  while (hi - lo > tol) {
    Rational mid((lo + hi) / 2);
    auto count = count_eigs_below(form, mid);
    if (!count) return std::nullopt;
    if (*count >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return Interval::from_exact_bounds(lo, hi, prec);
}

// Build the form at escalating precision until the PSD question at sigma is
// decided. Positive = no eigenvalue below sigma.
struct PsdBuilder {
  std::function<Interval(long, mpfr_prec_t)> lambda;
  std::function<Interval(long, mpfr_prec_t)> weight;
};

struct PsdOutcome {
  Verdict verdict;
  std::optional<long> eigs_below;
};

inline PsdOutcome psd_verdict(const PsdBuilder& builder, long N, const Rational& sigma,
                              mpfr_prec_t start, mpfr_prec_t cap) {
  PsdOutcome out;
  out.verdict.method = Method::PointwiseInterval;
  for (mpfr_prec_t prec = start;; prec *= 2) {
    if (prec > cap) {
      out.verdict.state = Sign::Undecided;
      out.verdict.precision_bits = cap;
      return out;
    }
    TridiagonalForm form =
        build_form([&](long n) { return builder.lambda(n, prec); },
                   [&](long n) { return builder.weight(n, prec); }, N);
    auto count = count_eigs_below(form, sigma);
    out.verdict.precision_bits = prec;
    if (count) {
      out.eigs_below = count;
      out.verdict.state = *count == 0 ? Sign::Positive : Sign::NonPositive;
      return out;
    }
    ++out.verdict.subdivisions;
  }
}

// Randomized falsification harness: min over seeded random small-denominator
// rational vectors of A^T M A.
struct RandomFormResult {
  std::optional<Interval> min_value;
  long min_trial = 0;
  long trials = 0;
  bool any_certainly_negative = false;
};

inline RandomFormResult random_quadform_test(const IntervalAccessor& lambda,
                                             const IntervalAccessor& weight, long N, long trials,
                                             std::uint64_t seed, mpfr_prec_t prec) {
  if (trials < 1) raise(errc::range_error, "need at least one trial");
  TridiagonalForm form = build_form(lambda, weight, N);
  SplitMix64 rng(seed);
  RandomFormResult out;
  out.trials = trials;
  for (long t = 0; t < trials; ++t) {
    std::vector<Rational> A;
    A.reserve(static_cast<std::size_t>(N));
    for (long i = 0; i < N; ++i) A.push_back(rng.rational(-8, 8));
    Interval v = form_value(form, A, prec);
    if (v.strictly_negative()) out.any_certainly_negative = true;
    if (!out.min_value || mpfr_less_p(v.lo(), out.min_value->lo())) {
      out.min_value = v;
      out.min_trial = t;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact-rational twin used as the identity oracle in tests.
// ---------------------------------------------------------------------------

struct ExactTridiagonalForm {
  long N = 0;
  std::vector<Rational> diag, off;
};

inline ExactTridiagonalForm build_form_exact(const std::vector<Rational>& lambda,
                                             const std::vector<Rational>& weight) {
  const long N = static_cast<long>(weight.size());
  if (N < 1 || static_cast<long>(lambda.size()) < N + 1)
    raise(errc::range_error, "need weights for 1..N and lambda for 1..N+1");
  ExactTridiagonalForm form;
  form.N = N;
  for (long n = 1; n <= N; ++n) {
    const Rational& ln = lambda[static_cast<std::size_t>(n - 1)];
    const Rational& ln1 = lambda[static_cast<std::size_t>(n)];
    if (sgn(ln) <= 0 || sgn(ln1) <= 0) raise(errc::nonpositive_lambda_mu, "lambda must be positive");
    form.diag.push_back(1 / ln + 1 / ln1 - weight[static_cast<std::size_t>(n - 1)]);
    if (n < N) form.off.push_back(Rational(-1 / ln1));
  }
  return form;
}

inline Rational form_value_exact(const ExactTridiagonalForm& form, const std::vector<Rational>& A) {
  if (static_cast<long>(A.size()) != form.N) raise(errc::range_error, "vector length must equal N");
  Rational acc(0);
  for (long n = 0; n < form.N; ++n) {
    acc += form.diag[static_cast<std::size_t>(n)] * A[static_cast<std::size_t>(n)] *
           A[static_cast<std::size_t>(n)];
    if (n + 1 < form.N)
      acc += 2 * form.off[static_cast<std::size_t>(n)] * A[static_cast<std::size_t>(n)] *
             A[static_cast<std::size_t>(n + 1)];
  }
  return acc;
}

// Direct two-sum route for the same quantity.
inline Rational direct_difference_exact(const std::vector<Rational>& lambda,
                                        const std::vector<Rational>& weight,
                                        const std::vector<Rational>& A) {
  const long N = static_cast<long>(A.size());
  auto at = [&](long n) {
    return (n <= 0 || n > N) ? Rational(0) : A[static_cast<std::size_t>(n - 1)];
  };
  Rational acc(0);
  for (long n = 1; n <= N + 1; ++n) {
    Rational d = at(n) - at(n - 1);
    acc += d * d / lambda[static_cast<std::size_t>(n - 1)];
  }
  for (long n = 1; n <= N; ++n)
    acc -= weight[static_cast<std::size_t>(n - 1)] * at(n) * at(n);
  return acc;
}

}  // namespace copson
