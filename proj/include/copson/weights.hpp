#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "copson/errors.hpp"
#include "copson/exact.hpp"
#include "copson/interval.hpp"
#include "copson/sequences.hpp"

namespace copson {

// ---------------------------------------------------------------------------
// Improved weights
//
// The general improved weight for a positive sequence q with partial sums Q:
//
//   w_n = (Q_n^a / q_n) * [ 1 + (q_n/q_{n+1}) (1 + q_{n+1}/Q_n)^a
//                             - (1 - q_n/Q_n)^{(1-a)/2}
//                             - (q_n/q_{n+1}) (1 + q_{n+1}/Q_n)^{(1+a)/2} ]
//
// At n = 1 the middle term is 0^{positive} = 0 exactly (Q_0 = 0), which makes
// the single code path reproduce the separate n = 1 closed forms.
// ---------------------------------------------------------------------------

namespace detail {

struct WeightTerms {
  Rational prefactor_base;  // Q_n
  Rational ratio;           // q_n / q_{n+1}
  Rational up_base;         // 1 + q_{n+1} / Q_n
  Rational down_base;       // 1 - q_n / Q_n  (zero at n = 1)
  Rational inv_qn;          // 1 / q_n
};

inline WeightTerms weight_terms(const WeightSequence& seq, long n) {
  if (n < 1 || n > seq.nmax())
    raise(errc::index_beyond_nmax, "weight index " + std::to_string(n) + " outside [1, nmax]");
  WeightTerms t;
  t.prefactor_base = seq.Q(n);
  t.ratio = seq.q(n) / seq.q(n + 1);
  t.up_base = 1 + seq.q(n + 1) / t.prefactor_base;
  t.down_base = 1 - seq.q(n) / t.prefactor_base;
  t.inv_qn = Rational(1) / seq.q(n);
  return t;
}

}  // namespace detail

// Exact rational value of the improved weight when every power involved is
// rational (e.g. cubic family at alpha = 0); nullopt otherwise.
inline std::optional<Rational> copson_weight_rational(const WeightSequence& seq, const Rational& alpha,
                                                      long n) {
  check_alpha(alpha);
  auto t = detail::weight_terms(seq, n);
  Rational gamma1((1 - alpha) / 2), gamma2((1 + alpha) / 2);
  auto pref = exact_rational_pow(t.prefactor_base, alpha);
  if (!pref) return std::nullopt;
  auto up_a = exact_rational_pow(t.up_base, alpha);
  if (!up_a) return std::nullopt;
  auto down_g1 = exact_rational_pow(t.down_base, gamma1);
  if (!down_g1) return std::nullopt;
  auto up_g2 = exact_rational_pow(t.up_base, gamma2);
  if (!up_g2) return std::nullopt;
  Rational bracket = 1 + t.ratio * *up_a - *down_g1 - t.ratio * *up_g2;
  return Rational(*pref * t.inv_qn * bracket);
}

inline Interval copson_weight(const WeightSequence& seq, const Rational& alpha, long n,
                              mpfr_prec_t prec) {
  check_alpha(alpha);
  if (auto exact = copson_weight_rational(seq, alpha, n)) return Interval::from_exact(*exact, prec);
  auto t = detail::weight_terms(seq, n);
  Rational gamma1((1 - alpha) / 2), gamma2((1 + alpha) / 2);
  Interval up_a = pow_enclosure(t.up_base, alpha, prec);
  Interval down_g1 = pow_enclosure(t.down_base, gamma1, prec);
  Interval up_g2 = pow_enclosure(t.up_base, gamma2, prec);
  Interval bracket = add_q(mul_q(up_a, t.ratio) - down_g1 - mul_q(up_g2, t.ratio), Rational(1));
  Interval pref = mul_q(pow_enclosure(t.prefactor_base, alpha, prec), t.inv_qn);
  return pref * bracket;
}

// Hardy power weight (unit sequence); same formula, q_n = 1, Q_n = n.
inline std::optional<Rational> power_weight_rational(const Rational& alpha, long n) {
  WeightSequence unit(FamilySpec::unit(), n);
  return copson_weight_rational(unit, alpha, n);
}

inline Interval power_weight(const Rational& alpha, long n, mpfr_prec_t prec) {
  check_alpha(alpha);
  if (n < 1) raise(errc::range_error, "n must be >= 1");
  WeightSequence unit(FamilySpec::unit(), n);
  return copson_weight(unit, alpha, n, prec);
}

// 2 - sqrt((n-1)/n) - sqrt((n+1)/n); the alpha = 0 power weight.
inline Interval kpp_weight(long n, mpfr_prec_t prec) {
  if (n < 1) raise(errc::range_error, "n must be >= 1");
  Rational down(Rational(n - 1) / n), up(Rational(n + 1) / n);
  Interval s1 = n == 1 ? Interval::zero(prec) : sqrt(Interval::from_exact(down, prec));
  Interval s2 = sqrt(Interval::from_exact(up, prec));
  return Rational(2) - (s1 + s2);
}

// Classical right-hand side weight ((1-a)^2/4) q_n / Q_n^{2-a}.
inline std::optional<Rational> classical_weight_rational(const WeightSequence& seq,
                                                         const Rational& alpha, long n) {
  check_alpha(alpha);
  if (n < 1 || n > seq.nmax())
    raise(errc::index_beyond_nmax, "weight index " + std::to_string(n) + " outside [1, nmax]");
  auto p = exact_rational_pow(seq.Q(n), Rational(alpha - 2));
  if (!p) return std::nullopt;
  Rational c((1 - alpha) * (1 - alpha) / 4);
  return Rational(c * seq.q(n) * *p);
}

inline Interval classical_weight(const WeightSequence& seq, const Rational& alpha, long n,
                                 mpfr_prec_t prec) {
  check_alpha(alpha);
  if (auto exact = classical_weight_rational(seq, alpha, n)) return Interval::from_exact(*exact, prec);
  Rational c((1 - alpha) * (1 - alpha) / 4 * seq.q(n));
  return mul_q(pow_enclosure(seq.Q(n), Rational(alpha - 2), prec), c);
}

// ---------------------------------------------------------------------------
// Master weight w_n(lambda, mu) = 1/l_n + 1/l_{n+1} - m_{n-1}/(l_n m_n)
//                                              - m_{n+1}/(l_{n+1} m_n).
// ---------------------------------------------------------------------------

inline Interval master_weight(const LambdaMuPair& pair, long n) {
  if (n < 1 || n > pair.nmax())
    raise(errc::index_beyond_nmax, "master weight index " + std::to_string(n) + " outside [1, nmax]");
  Interval ln = pair.lambda(n);
  Interval ln1 = pair.lambda(n + 1);
  Interval mn = pair.mu(n);
  Interval mn1 = pair.mu(n + 1);
  Interval acc = Rational(1) / ln + Rational(1) / ln1 - (mn1 / (ln1 * mn));
  if (n > 1) acc = acc - pair.mu(n - 1) / (ln * mn);
  return acc;
}

// Exact-table variant: lambda[i] = lambda_{i+1} (i = 0..), mu[i] = mu_i with
// mu[0] = 0 by convention.
inline Rational master_weight_exact(const std::vector<Rational>& lambda,
                                    const std::vector<Rational>& mu, long n) {
  const auto ln = lambda.at(static_cast<std::size_t>(n - 1));
  const auto ln1 = lambda.at(static_cast<std::size_t>(n));
  const auto mn = mu.at(static_cast<std::size_t>(n));
  const auto mn_1 = mu.at(static_cast<std::size_t>(n - 1));
  const auto mn1 = mu.at(static_cast<std::size_t>(n + 1));
  if (sgn(ln) <= 0 || sgn(ln1) <= 0 || sgn(mn) <= 0)
    raise(errc::nonpositive_lambda_mu, "lambda and mu must be positive");
  return Rational(1 / ln + 1 / ln1 - mn_1 / (ln * mn) - mn1 / (ln1 * mn));
}

// ---------------------------------------------------------------------------
// Series residual C_k(q, alpha), exact rational.
// ---------------------------------------------------------------------------

inline Rational series_ck(const WeightSequence& seq, const Rational& alpha, long n, long k) {
  check_alpha(alpha);
  if (k < 3) raise(errc::k_too_small, "series residual starts at k = 3");
  if (n < 1 || n > seq.nmax())
    raise(errc::index_beyond_nmax, "series index " + std::to_string(n) + " outside [1, nmax]");
  Rational qn = seq.q(n), qn1 = seq.q(n + 1), Qn = seq.Q(n);
  if (qn1 > Qn)
    raise(errc::series_domain,
          "q_{n+1} > Q_n at n = " + std::to_string(n) + "; series expansion not valid");
  Rational gamma1((1 - alpha) / 2), gamma2((1 + alpha) / 2);
  unsigned long ku = static_cast<unsigned long>(k);
  auto ipow = [&](const Rational& x, unsigned long e) {
    auto r = exact_rational_pow(x, Rational(static_cast<long>(e)));
    return *r;
  };
  Rational mixed = qn * ipow(qn1, ku - 1) / ipow(Qn, ku);
  Rational pure = ipow(qn / Qn, ku);
  Rational sign(k % 2 == 0 ? 1 : -1);
  return Rational(gen_binomial(alpha, ku) * mixed - gen_binomial(gamma2, ku) * mixed -
                  sign * gen_binomial(gamma1, ku) * pure);
}

// Geometric majorant for the tail beyond K: 3 r^{K+1} / (1 - r) with
// r = max(q_n, q_{n+1}) / Q_n. Only valid when r < 1.
inline Rational series_tail_bound(const WeightSequence& seq, long n, long K) {
  Rational qn = seq.q(n), qn1 = seq.q(n + 1), Qn = seq.Q(n);
  Rational r = std::max(qn, qn1) / Qn;
  if (r >= 1) raise(errc::series_domain, "tail bound needs max(q_n, q_{n+1}) < Q_n");
  auto rk = exact_rational_pow(r, Rational(K + 1));
  return Rational(3 * *rk / (1 - r));
}

// ---------------------------------------------------------------------------
// Remainder decomposition: the sum-of-squares identity behind the master
// inequality.  With A_0 = 0 and support in [1, N] (A_{N+1} = 0):
//
//   sum_{n=1}^{N+1} |A_n - A_{n-1}|^2 / l_n  -  sum_{n=1}^{N} w_n |A_n|^2
//     = sum_{n=2}^{N+1} (m_{n-1} m_n / l_n) (A_n/m_n - A_{n-1}/m_{n-1})^2.
//
// In exact rational mode the defect between the two routes must be zero.
// ---------------------------------------------------------------------------

struct FinSuppVector {
  std::vector<Rational> entries;  // entries[i] = A_{i+1}; A_0 = 0 implied
  long support() const { return static_cast<long>(entries.size()); }
  Rational at(long n) const {  // valid for any n >= 0
    if (n <= 0 || n > support()) return Rational(0);
    return entries[static_cast<std::size_t>(n - 1)];
  }
};

struct ExactRemainder {
  Rational lhs;
  Rational weighted_sum;
  Rational remainder;  // computed through the sum-of-squares route
  Rational defect;     // (lhs - weighted_sum) - remainder; zero when exact
};

// lambda[i] = lambda_{i+1} for i = 0..N, mu[i] = mu_i for i = 0..N+1 (mu[0] = 0).
inline ExactRemainder remainder_decomposition(const std::vector<Rational>& lambda,
                                              const std::vector<Rational>& mu,
                                              const FinSuppVector& A) {
  const long N = A.support();
  if (static_cast<long>(lambda.size()) < N + 1 || static_cast<long>(mu.size()) < N + 2)
    raise(errc::range_error, "lambda needs N+1 entries and mu needs N+2");
  if (sgn(mu[0]) != 0) raise(errc::range_error, "mu_0 must be 0");
  for (long i = 0; i < N + 1; ++i)
    if (sgn(lambda[static_cast<std::size_t>(i)]) <= 0)
      raise(errc::nonpositive_lambda_mu, "lambda must be positive");
  for (long i = 1; i < N + 2; ++i)
    if (sgn(mu[static_cast<std::size_t>(i)]) <= 0)
      raise(errc::nonpositive_lambda_mu, "mu must be positive for n >= 1");

  auto lam = [&](long n) { return lambda[static_cast<std::size_t>(n - 1)]; };
  auto muv = [&](long n) { return n == 0 ? Rational(0) : mu[static_cast<std::size_t>(n)]; };

  ExactRemainder out;
  out.lhs = 0;
  for (long n = 1; n <= N + 1; ++n) {
    Rational d = A.at(n) - A.at(n - 1);
    out.lhs += d * d / lam(n);
  }
  out.weighted_sum = 0;
  for (long n = 1; n <= N; ++n) {
    Rational w = 1 / lam(n) + 1 / lam(n + 1) - muv(n - 1) / (lam(n) * muv(n)) -
                 muv(n + 1) / (lam(n + 1) * muv(n));
    out.weighted_sum += w * A.at(n) * A.at(n);
  }
  out.remainder = 0;
  for (long n = 2; n <= N + 1; ++n) {
    Rational b = A.at(n) / muv(n) - A.at(n - 1) / muv(n - 1);
    out.remainder += muv(n - 1) * muv(n) / lam(n) * b * b;
  }
  out.defect = out.lhs - out.weighted_sum - out.remainder;
  return out;
}

struct IntervalRemainder {
  Interval lhs;
  Interval weighted_sum;
  Interval remainder;
};

// Interval mode for irrational lambda/mu (and optionally irrational A).
// The remainder is a sum of squares, so its lower bound is >= 0 by
// construction.
inline IntervalRemainder remainder_decomposition(const std::function<Interval(long)>& lambda,
                                                 const std::function<Interval(long)>& mu,
                                                 const std::vector<Interval>& A, mpfr_prec_t prec) {
  const long N = static_cast<long>(A.size());
  auto a = [&](long n) {
    if (n <= 0 || n > N) return Interval::zero(prec);
    return A[static_cast<std::size_t>(n - 1)];
  };
  Interval mu0 = mu(0);
  if (!(mpfr_zero_p(mu0.lo()) && mpfr_zero_p(mu0.hi()))) raise(errc::range_error, "mu_0 must be 0");
  for (long n = 1; n <= N + 1; ++n)
    if (!lambda(n).strictly_positive() || !mu(n).strictly_positive())
      raise(errc::nonpositive_lambda_mu, "lambda and mu must be certainly positive");

  IntervalRemainder out{Interval::zero(prec), Interval::zero(prec), Interval::zero(prec)};
  for (long n = 1; n <= N + 1; ++n) out.lhs = out.lhs + square(a(n) - a(n - 1)) / lambda(n);
  for (long n = 1; n <= N; ++n) {
    Interval w = Rational(1) / lambda(n) + Rational(1) / lambda(n + 1) -
                 mu(n + 1) / (lambda(n + 1) * mu(n));
    if (n > 1) w = w - mu(n - 1) / (lambda(n) * mu(n));
    out.weighted_sum = out.weighted_sum + w * square(a(n));
  }
  for (long n = 2; n <= N + 1; ++n) {
    Interval b = a(n) / mu(n) - a(n - 1) / mu(n - 1);
    out.remainder = out.remainder + mu(n - 1) * mu(n) / lambda(n) * square(b);
  }
  return out;
}

inline IntervalRemainder remainder_decomposition(const LambdaMuPair& pair,
                                                 const std::vector<Interval>& A) {
  return remainder_decomposition([&](long n) { return pair.lambda(n); },
                                 [&](long n) { return pair.mu(n); }, A, pair.precision());
}

// ---------------------------------------------------------------------------
// Margin of improved over classical weight at one index.
// ---------------------------------------------------------------------------

struct WeightValue {
  long n = 0;
  Interval value;      // improved weight
  Interval classical;  // classical weight
  Interval margin;     // value - classical; margin.lo > 0 certifies dominance at n
};

inline WeightValue weight_value(const WeightSequence& seq, const Rational& alpha, long n,
                                mpfr_prec_t prec) {
  auto wr = copson_weight_rational(seq, alpha, n);
  auto cr = classical_weight_rational(seq, alpha, n);
  Interval w = wr ? Interval::from_exact(*wr, prec) : copson_weight(seq, alpha, n, prec);
  Interval c = cr ? Interval::from_exact(*cr, prec) : classical_weight(seq, alpha, n, prec);
  Interval m = (wr && cr) ? Interval::from_exact(Rational(*wr - *cr), prec) : w - c;
  return WeightValue{n, std::move(w), std::move(c), std::move(m)};
}

}  // namespace copson
