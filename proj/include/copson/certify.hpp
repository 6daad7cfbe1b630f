#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "copson/errors.hpp"
#include "copson/exact.hpp"
#include "copson/interval.hpp"
#include "copson/sequences.hpp"
#include "copson/sturm.hpp"
#include "copson/verdict.hpp"
#include "copson/weights.hpp"

namespace copson {

// Start precision, doubling on Undecided up to the cap.
struct PrecisionPolicy {
  mpfr_prec_t start = kDefaultPrecision;
  mpfr_prec_t cap = kDefaultPrecisionCap;
};

// ---------------------------------------------------------------------------
// Pointwise dominance of the improved weight over the classical one.
// ---------------------------------------------------------------------------

struct DominanceReport {
  std::string family_id;
  Rational alpha;
  long n_lo = 0, n_hi = 0;
  Verdict verdict;
  long min_margin_n = 0;                   // index attaining the smallest certified lower bound
  std::optional<Interval> min_margin;      // margin interval at that index
  long max_precision_bits = 0;
  long escalations = 0;                    // precision doublings over the whole range
  std::chrono::duration<double> elapsed{0};
};

namespace detail {

struct DominanceChunk {
  std::optional<long> nonpositive_n;
  std::optional<long> undecided_n;
  std::optional<Interval> min_margin;
  long min_margin_n = 0;
  long max_prec = 0;
  long escalations = 0;
};

inline DominanceChunk dominance_over_range(const WeightSequence& seq, const Rational& alpha,
                                           long lo, long hi, const PrecisionPolicy& policy) {
  DominanceChunk out;
  for (long n = lo; n <= hi; ++n) {
    mpfr_prec_t prec = policy.start;
    while (true) {
      WeightValue wv = weight_value(seq, alpha, n, prec);
      if (wv.margin.strictly_positive()) {
        if (static_cast<long>(prec) > out.max_prec) out.max_prec = prec;
        if (!out.min_margin || mpfr_less_p(wv.margin.lo(), out.min_margin->lo())) {
          out.min_margin = wv.margin;
          out.min_margin_n = n;
        }
        break;
      }
      if (wv.margin.nonpositive_upper()) {
        if (static_cast<long>(prec) > out.max_prec) out.max_prec = prec;
        out.nonpositive_n = n;
        if (!out.min_margin || mpfr_less_p(wv.margin.lo(), out.min_margin->lo())) {
          out.min_margin = wv.margin;
          out.min_margin_n = n;
        }
        return out;
      }
      if (prec >= policy.cap) {
        if (static_cast<long>(prec) > out.max_prec) out.max_prec = prec;
        out.undecided_n = n;
        return out;
      }
      prec *= 2;
      ++out.escalations;
    }
  }
  return out;
}

}  // namespace detail

// Certifies margin(n) > 0 for every n in [n_lo, n_hi], escalating precision
// per index. Work is split into per-thread chunks whose results merge in
// index order, so the report is identical for any job count.
inline DominanceReport certify_dominance(const WeightSequence& seq, const Rational& alpha, long n_lo,
                                         long n_hi, const PrecisionPolicy& policy = {},
                                         int jobs = 1) {
  check_alpha(alpha);
  if (n_lo < 1 || n_lo > n_hi || n_hi > seq.nmax())
    raise(errc::range_error, "need 1 <= n_lo <= n_hi <= nmax");

  auto t0 = std::chrono::steady_clock::now();
  DominanceReport rep;
  rep.family_id = seq.family_id();
  rep.alpha = alpha;
  rep.n_lo = n_lo;
  rep.n_hi = n_hi;
  rep.verdict.method = Method::PointwiseInterval;

  long total = n_hi - n_lo + 1;
  int chunks = jobs > 1 ? std::min<long>(jobs, total) : 1;
  std::vector<detail::DominanceChunk> results(static_cast<std::size_t>(chunks));
  if (chunks == 1) {
    results[0] = detail::dominance_over_range(seq, alpha, n_lo, n_hi, policy);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
    long per = total / chunks, extra = total % chunks;
    long start = n_lo;
    for (int c = 0; c < chunks; ++c) {
      long len = per + (c < extra ? 1 : 0);
      long lo = start, hi = start + len - 1;
      start += len;
      workers.emplace_back([&, c, lo, hi] {
        try {
          results[static_cast<std::size_t>(c)] =
              detail::dominance_over_range(seq, alpha, lo, hi, policy);
        } catch (...) {
          errors[static_cast<std::size_t>(c)] = std::current_exception();
        }
      });
    }
    for (auto& w : workers) w.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::optional<long> nonpositive_n, undecided_n;
  for (const auto& r : results) {
    rep.escalations += r.escalations;
    rep.max_precision_bits = std::max(rep.max_precision_bits, r.max_prec);
    if (r.min_margin &&
        (!rep.min_margin || mpfr_less_p(r.min_margin->lo(), rep.min_margin->lo()))) {
      rep.min_margin = r.min_margin;
      rep.min_margin_n = r.min_margin_n;
    }
    if (r.nonpositive_n && (!nonpositive_n || *r.nonpositive_n < *nonpositive_n))
      nonpositive_n = r.nonpositive_n;
    if (r.undecided_n && (!undecided_n || *r.undecided_n < *undecided_n)) undecided_n = r.undecided_n;
  }

  rep.verdict.precision_bits = rep.max_precision_bits;
  if (nonpositive_n) {
    rep.verdict.state = Sign::NonPositive;
    rep.verdict.witness_index = nonpositive_n;
  } else if (undecided_n) {
    rep.verdict.state = Sign::Undecided;
    rep.verdict.witness_index = undecided_n;
  } else {
    rep.verdict.state = Sign::Positive;
  }
  rep.verdict.subdivisions = rep.escalations;
  rep.elapsed = std::chrono::steady_clock::now() - t0;
  return rep;
}

// ---------------------------------------------------------------------------
// Positivity of a function on a closed rational interval by adaptive
// bisection with interval evaluation.
// ---------------------------------------------------------------------------

using IntervalFn = std::function<Interval(const Interval&, mpfr_prec_t)>;

inline Verdict certify_positive_on(const IntervalFn& f, const Rational& a, const Rational& b,
                                   const PrecisionPolicy& policy = {}) {
  if (!(a < b)) raise(errc::range_error, "need a < b");
  Verdict v;
  v.method = Method::IntervalSubdivision;
  v.precision_bits = policy.start;

  struct Seg {
    Rational a, b;
    mpfr_prec_t prec;
  };
  const Rational total_width = b - a;
  const Rational min_width = total_width / Rational(Integer(1) << 48);
  std::vector<Seg> stack{{a, b, policy.start}};
  long leaves = 0;
  const long leaf_budget = 2'000'000;

  while (!stack.empty()) {
    Seg seg = stack.back();
    stack.pop_back();
    if (++leaves > leaf_budget) {
      v.state = Sign::Undecided;
      v.witness_point = Rational((seg.a + seg.b) / 2);
      return v;
    }
    Interval x = Interval::from_exact_bounds(seg.a, seg.b, seg.prec);
    Interval fx = f(x, seg.prec);
    if (static_cast<long>(seg.prec) > v.precision_bits) v.precision_bits = seg.prec;
    if (fx.strictly_positive()) continue;
    if (fx.strictly_negative()) {
      v.state = Sign::NonPositive;
      v.witness_point = Rational((seg.a + seg.b) / 2);
      return v;
    }
    if (seg.b - seg.a > min_width) {
      Rational mid((seg.a + seg.b) / 2);
      ++v.subdivisions;
      stack.push_back({mid, seg.b, seg.prec});
      stack.push_back({seg.a, mid, seg.prec});
    } else if (seg.prec < policy.cap) {
      stack.push_back({seg.a, seg.b, std::min<mpfr_prec_t>(seg.prec * 2, policy.cap)});
    } else {
      v.state = Sign::Undecided;
      v.witness_point = Rational((seg.a + seg.b) / 2);
      return v;
    }
  }
  v.state = Sign::Positive;
  return v;
}

// ---------------------------------------------------------------------------
// Lemma registry: the named polynomial and transcendental sign claims.
// ---------------------------------------------------------------------------

struct LemmaEntry {
  std::string id;
  enum class Kind { PolynomialExact, TranscendentalInterval } kind;
  Rational domain_lo, domain_hi;  // claimed closed rational domain
  bool needs_param = false;       // extra rational parameter (lemma35_gap: alpha)
  Rational param_lo, param_hi;    // allowed parameter range when needs_param
  Polynomial poly;
  std::function<Interval(const Interval&, const Rational&, mpfr_prec_t)> fn;
};

namespace detail {

inline std::map<std::string, LemmaEntry> build_lemma_registry() {
  std::map<std::string, LemmaEntry> reg;
  auto add_poly = [&](const std::string& id, Polynomial p, const Rational& lo, const Rational& hi) {
    LemmaEntry e;
    e.id = id;
    e.kind = LemmaEntry::Kind::PolynomialExact;
    e.domain_lo = lo;
    e.domain_hi = hi;
    e.poly = std::move(p);
    reg[id] = std::move(e);
  };
  auto add_fn = [&](const std::string& id,
                    std::function<Interval(const Interval&, const Rational&, mpfr_prec_t)> f,
                    const Rational& lo, const Rational& hi, bool needs_param = false,
                    const Rational& plo = Rational(0), const Rational& phi = Rational(0)) {
    LemmaEntry e;
    e.id = id;
    e.kind = LemmaEntry::Kind::TranscendentalInterval;
    e.domain_lo = lo;
    e.domain_hi = hi;
    e.needs_param = needs_param;
    e.param_lo = plo;
    e.param_hi = phi;
    e.fn = std::move(f);
    reg[id] = std::move(e);
  };

  const Rational r0(0), r1(1);
  auto R = [](long n, long d = 1) {
    Rational r(n);
    if (d != 1) r /= Rational(d);
    return r;
  };

  // Quintic controlling the even-k residuals.
  Polynomial H({R(-10395), R(46941), R(-24898), R(8654), R(-1187), R(85)});
  add_poly("H", H, R(1, 3), r1);

  // (a^2 - 6a + 5)(7a^2 - 6a + 3) / (4! * 8)
  Polynomial j1_factors = Polynomial({R(5), R(-6), R(1)}) * Polynomial({R(3), R(-6), R(7)});
  add_poly("J1", Rational(1) / Rational(192) * j1_factors, R(1, 3), R(99, 100));

  // Degree-6 numerator over 6! * 32.
  Polynomial j2_num({R(945), R(-3840), R(8029), R(-7200), R(2515), R(-480), R(31)});
  add_poly("J2", Rational(1) / Rational(23040) * j2_num, R(1, 3), R(99, 100));

  Polynomial f_factor({R(105), R(-415), R(846), R(-706), R(201), R(-31)});
  add_poly("f_factor", f_factor, R(27, 50), R(99, 100));

  add_poly("quartic69", Polynomial({R(69), R(-282), R(353), R(-134), R(25)}), R(27, 50), R(99, 100));
  add_poly("S_alpha", Polynomial({R(0), R(-16), R(104), R(-24)}), R(17, 100), R(1, 2));
  add_poly("U_alpha0", Polynomial({R(0), R(0), R(0), R(6), R(2)}), R(1, 100), R(1, 2));

  // f(a) = 1 + 2^a - 2^{(1+a)/2} - (a-1)^2/4
  add_fn("lemma21_f",
         [](const Interval& x, const Rational&, mpfr_prec_t prec) {
           Interval two = Interval::from_long(2, prec);
           Interval t = pow(two, x) - pow(two, (x + 1L) / 2L);
           return Rational(1) + t - square(x - 1L) / 4L;
         },
         r0, R(99, 100));

  // G(a) = log(8a(2-a)) - log((3-a)(1+a)) - ((1-a)/2) log 2
  add_fn("G_1750",
         [](const Interval& x, const Rational&, mpfr_prec_t prec) {
           Interval log2 = log(Interval::from_long(2, prec));
           Interval lhs = log(mul_q(x, Rational(8)) * (Rational(2) - x));
           Interval rhs = log((Rational(3) - x) * (Rational(1) + x));
           return lhs - rhs - ((Rational(1) - x) / 2L) * log2;
         },
         R(17, 50), R(99, 100));

  // T(a) = 1 + (3^a - 3^{(a+1)/2})/2 - (a-1)^2/4
  add_fn("T_linear",
         [](const Interval& x, const Rational&, mpfr_prec_t prec) {
           Interval three = Interval::from_long(3, prec);
           Interval t = (pow(three, x) - pow(three, (x + 1L) / 2L)) / 2L;
           return Rational(1) + t - square(x - 1L) / 4L;
         },
         R(17, 50), R(99, 100));

  // T(a) = 1 + (3^{2a} - 3^{a+1})/8 - (a-1)^2/4
  add_fn("T_cubic",
         [](const Interval& x, const Rational&, mpfr_prec_t prec) {
           Interval three = Interval::from_long(3, prec);
           Interval t = (pow(three, x * 2L) - pow(three, x + 1L)) / 8L;
           return Rational(1) + t - square(x - 1L) / 4L;
         },
         r0, R(1, 2));

  // 8a(1-a)(2-a)(1+2x)^{a-3} - (3-a)(1-a^2)(1+2x)^{(a-5)/2} in x, a fixed.
  add_fn("lemma35_gap",
         [](const Interval& x, const Rational& a, mpfr_prec_t prec) {
           Rational c1 = 8 * a * (1 - a) * (2 - a);
           Rational c2 = (3 - a) * (1 - a * a);
           Interval base = mul_q(x, Rational(2)) + 1L;
           Interval lhs = mul_q(pow(base, Rational(a - 3), prec), c1);
           Interval rhs = mul_q(pow(base, Rational((a - 5) / 2), prec), c2);
           return lhs - rhs;
         },
         r0, R(1, 2), true, R(17, 50), R(99, 100));

  return reg;
}

}  // namespace detail

inline const std::map<std::string, LemmaEntry>& lemma_registry() {
  static const std::map<std::string, LemmaEntry> reg = detail::build_lemma_registry();
  return reg;
}

// Certify the registered claim on [a, b] (must be inside the claimed domain).
// Polynomial entries are decided exactly by Sturm counting and are never
// Undecided; transcendental entries use adaptive bisection.
inline Verdict certify_lemma(const std::string& id, const Rational& a, const Rational& b,
                             const PrecisionPolicy& policy = {},
                             const std::optional<Rational>& param = std::nullopt) {
  const auto& reg = lemma_registry();
  auto it = reg.find(id);
  if (it == reg.end()) raise(errc::unknown_lemma, "no lemma registered as '" + id + "'");
  const LemmaEntry& e = it->second;
  if (a < e.domain_lo || b > e.domain_hi || !(a < b))
    raise(errc::domain_not_contained,
          "[" + copson::to_string(a) + ", " + copson::to_string(b) + "] not inside claimed [" +
              copson::to_string(e.domain_lo) + ", " + copson::to_string(e.domain_hi) + "]");
  if (e.needs_param) {
    if (!param) raise(errc::range_error, "lemma '" + id + "' needs a rational parameter");
    if (*param < e.param_lo || *param > e.param_hi)
      raise(errc::alpha_out_of_range, "parameter outside [" + copson::to_string(e.param_lo) + ", " +
                                          copson::to_string(e.param_hi) + "]");
  }
  if (e.kind == LemmaEntry::Kind::PolynomialExact) return certify_poly_positive(e.poly, a, b);
  Rational p = param.value_or(Rational(0));
  return certify_positive_on(
      [&e, p](const Interval& x, mpfr_prec_t prec) { return e.fn(x, p, prec); }, a, b, policy);
}

// ---------------------------------------------------------------------------
// Alpha scans: uniform exact-rational grid, one dominance run per point.
// ---------------------------------------------------------------------------

struct ScanEntry {
  Rational alpha;
  Sign verdict;
  long min_margin_n = 0;
  std::optional<Interval> min_margin;
};

struct ScanReport {
  std::string family_id;
  Rational alpha_lo, alpha_hi;
  long steps = 0;
  long nmax = 0;
  std::vector<ScanEntry> entries;
  // Bracket between the largest failing and the smallest passing grid point
  // above it, when both exist.
  std::optional<Rational> alpha_fail_max;
  std::optional<Rational> alpha_pass_min;
  bool all_pass = false;
};

namespace detail {
inline void fill_scan_bracket(ScanReport& rep) {
  rep.all_pass = true;
  for (const auto& e : rep.entries)
    if (e.verdict != Sign::Positive) rep.all_pass = false;
  if (rep.all_pass) return;
  for (const auto& e : rep.entries)
    if (e.verdict != Sign::Positive) rep.alpha_fail_max = e.alpha;
  for (const auto& e : rep.entries)
    if (e.verdict == Sign::Positive && rep.alpha_fail_max && e.alpha > *rep.alpha_fail_max) {
      rep.alpha_pass_min = e.alpha;
      break;
    }
}
}  // namespace detail

inline ScanReport scan_alpha(const WeightSequence& seq, const Rational& alpha_lo,
                             const Rational& alpha_hi, long steps, long nmax,
                             const PrecisionPolicy& policy = {}, int jobs = 1) {
  if (alpha_lo < 0 || !(alpha_lo < alpha_hi) || alpha_hi >= 1)
    raise(errc::alpha_out_of_range, "need 0 <= alpha_lo < alpha_hi < 1");
  if (steps < 2) raise(errc::range_error, "need steps >= 2");
  if (nmax < 1 || nmax > seq.nmax()) raise(errc::range_error, "nmax outside [1, sequence nmax]");

  ScanReport rep;
  rep.family_id = seq.family_id();
  rep.alpha_lo = alpha_lo;
  rep.alpha_hi = alpha_hi;
  rep.steps = steps;
  rep.nmax = nmax;
  rep.entries.resize(static_cast<std::size_t>(steps));

  Rational step((alpha_hi - alpha_lo) / Rational(steps - 1));
  auto run_point = [&](long i) {
    Rational alpha(alpha_lo + Rational(i) * step);
    auto dom = certify_dominance(seq, alpha, 1, nmax, policy, 1);
    ScanEntry e;
    e.alpha = alpha;
    e.verdict = dom.verdict.state;
    e.min_margin_n = dom.min_margin_n;
    e.min_margin = dom.min_margin;
    rep.entries[static_cast<std::size_t>(i)] = std::move(e);
  };

  if (jobs <= 1) {
    for (long i = 0; i < steps; ++i) run_point(i);
  } else {
    std::vector<std::thread> workers;
    std::atomic<long> next{0};
    int nworkers = static_cast<int>(std::min<long>(jobs, steps));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nworkers));
    for (int w = 0; w < nworkers; ++w)
      workers.emplace_back([&, w] {
        try {
          for (long i = next.fetch_add(1); i < steps; i = next.fetch_add(1)) run_point(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    for (auto& w : workers) w.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  detail::fill_scan_bracket(rep);
  return rep;
}

}  // namespace copson
