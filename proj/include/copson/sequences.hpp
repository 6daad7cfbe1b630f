#pragma once

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "copson/errors.hpp"
#include "copson/exact.hpp"
#include "copson/interval.hpp"

namespace copson {

enum class FamilyKind { Unit, Linear, Cubic, Power, Custom };

struct FamilySpec {
  FamilyKind kind = FamilyKind::Unit;
  Rational power_exponent;        // Power only; must be an integer
  std::vector<Rational> table;    // Custom only; q_n = table[n-1]

  static FamilySpec unit() { return {FamilyKind::Unit, Rational(0), {}}; }
  static FamilySpec linear() { return {FamilyKind::Linear, Rational(0), {}}; }
  static FamilySpec cubic() { return {FamilyKind::Cubic, Rational(0), {}}; }
  static FamilySpec power(const Rational& p) { return {FamilyKind::Power, p, {}}; }
  static FamilySpec custom(std::vector<Rational> values) {
    return {FamilyKind::Custom, Rational(0), std::move(values)};
  }
};

// Positive weight sequence q with exact cached/closed-form partial sums Q.
// Accessors are valid for n in [1, nmax+1] (q) and [0, nmax+1] (Q): the
// weight at n consumes q_{n+1} and Q_{n+1}.
class WeightSequence {
 public:
  WeightSequence(FamilySpec spec, long nmax, Rational scale = Rational(1))
      : spec_(std::move(spec)), nmax_(nmax), scale_(std::move(scale)) {
    if (nmax_ < 1) raise(errc::range_error, "nmax must be >= 1");
    if (sgn(scale_) <= 0) raise(errc::nonpositive_entry, "scale must be positive");
    switch (spec_.kind) {
      case FamilyKind::Unit:
      case FamilyKind::Linear:
      case FamilyKind::Cubic:
        break;
      case FamilyKind::Power: {
        if (!is_integer(spec_.power_exponent))
          raise(errc::non_rational_power,
                "power family needs an integer exponent for exact values; got " +
                    copson::to_string(spec_.power_exponent));
        build_cache();
        break;
      }
      case FamilyKind::Custom: {
        if (spec_.table.empty()) raise(errc::empty_table, "custom table has no entries");
        for (std::size_t i = 0; i < spec_.table.size(); ++i)
          if (sgn(spec_.table[i]) <= 0)
            raise(errc::nonpositive_entry,
                  "custom table entry " + std::to_string(i + 1) + " is not positive");
        if (static_cast<long>(spec_.table.size()) < nmax_ + 1)
          raise(errc::range_error, "custom table has " + std::to_string(spec_.table.size()) +
                                       " entries; need nmax+1 = " + std::to_string(nmax_ + 1));
        build_cache();
        break;
      }
    }
  }

  long nmax() const { return nmax_; }
  const FamilySpec& family() const { return spec_; }
  const Rational& scale() const { return scale_; }

  std::string family_id() const {
    std::string id;
    switch (spec_.kind) {
      case FamilyKind::Unit: id = "unit"; break;
      case FamilyKind::Linear: id = "linear"; break;
      case FamilyKind::Cubic: id = "cubic"; break;
      case FamilyKind::Power: id = "power:" + copson::to_string(spec_.power_exponent); break;
      case FamilyKind::Custom: id = "table[" + std::to_string(spec_.table.size()) + "]"; break;
    }
    if (scale_ != 1) id += "*" + copson::to_string(scale_);
    return id;
  }

  Rational q(long n) const {
    if (n < 1 || n > nmax_ + 1)
      raise(errc::index_beyond_nmax, "q(" + std::to_string(n) + ") outside [1, nmax+1]");
    switch (spec_.kind) {
      case FamilyKind::Unit: return scale_;
      case FamilyKind::Linear: return Rational(scale_ * n);
      case FamilyKind::Cubic: {
        Integer cube;
        mpz_ui_pow_ui(cube.get_mpz_t(), static_cast<unsigned long>(n), 3);
        return Rational(scale_ * Rational(cube));
      }
      default: return q_cache_[static_cast<std::size_t>(n - 1)];
    }
  }

  Rational Q(long n) const {
    if (n < 0 || n > nmax_ + 1)
      raise(errc::index_beyond_nmax, "Q(" + std::to_string(n) + ") outside [0, nmax+1]");
    if (n == 0) return Rational(0);
    switch (spec_.kind) {
      case FamilyKind::Unit: return Rational(scale_ * n);
      case FamilyKind::Linear: return Rational(scale_ * Rational(n) * Rational(n + 1) / 2);
      case FamilyKind::Cubic: {
        Rational tri = Rational(n) * Rational(n + 1) / 2;
        return Rational(scale_ * tri * tri);
      }
      default: return Q_cache_[static_cast<std::size_t>(n - 1)];
    }
  }

  WeightSequence scaled(const Rational& c) const {
    return WeightSequence(spec_, nmax_, Rational(scale_ * c));
  }

 private:
  void build_cache() {
    q_cache_.reserve(static_cast<std::size_t>(nmax_) + 1);
    Q_cache_.reserve(static_cast<std::size_t>(nmax_) + 1);
    Rational running(0);
    for (long n = 1; n <= nmax_ + 1; ++n) {
      Rational qn;
      if (spec_.kind == FamilyKind::Power) {
        long e = static_cast<long>(mpz_get_si(spec_.power_exponent.get_num().get_mpz_t()));
        Integer p;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(n),
                      static_cast<unsigned long>(e >= 0 ? e : -e));
        qn = e >= 0 ? Rational(p) : Rational(Integer(1), p);
        qn.canonicalize();
      } else {
        qn = spec_.table[static_cast<std::size_t>(n - 1)];
      }
      qn *= scale_;
      running += qn;
      q_cache_.push_back(qn);
      Q_cache_.push_back(running);
    }
  }

  FamilySpec spec_;
  long nmax_;
  Rational scale_;
  std::vector<Rational> q_cache_, Q_cache_;  // index n-1; Power/Custom only
};

inline WeightSequence make_family(const FamilySpec& spec, long nmax) {
  return WeightSequence(spec, nmax);
}

// One positive rational or decimal per line; blank lines and '#' comments
// are skipped; entry index = position among kept lines.
inline std::vector<Rational> load_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::parse_error, "cannot open table file: " + path);
  std::vector<Rational> values;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view s(line);
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    if (s.empty() || s.front() == '#') continue;
    values.push_back(parse_rational(s));
  }
  if (values.empty()) raise(errc::empty_table, "no entries in " + path);
  return values;
}

enum class Monotonicity { Decreasing, Increasing, Neither };

inline const char* to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::Decreasing: return "Decreasing";
    case Monotonicity::Increasing: return "Increasing";
    case Monotonicity::Neither: return "Neither";
  }
  return "?";
}

// Ties are allowed in both directions; constant sequences report Decreasing,
// matching the decreasing-sequence hypothesis they satisfy.
inline Monotonicity classify_monotonicity(const WeightSequence& seq, long nmax) {
  if (nmax < 2) raise(errc::range_error, "monotonicity check needs nmax >= 2");
  nmax = std::min(nmax, seq.nmax());
  bool dec = true, inc = true;
  for (long n = 1; n < nmax + 1; ++n) {
    int c = cmp(seq.q(n + 1), seq.q(n));
    if (c > 0) dec = false;
    if (c < 0) inc = false;
    if (!dec && !inc) return Monotonicity::Neither;
  }
  if (dec) return Monotonicity::Decreasing;
  return Monotonicity::Increasing;
}

inline void check_alpha(const Rational& alpha) {
  if (alpha < 0 || alpha >= 1)
    raise(errc::alpha_out_of_range, "alpha = " + copson::to_string(alpha) + " outside [0, 1)");
}

// x^e with the exact-rational fast path; falls back to interval power.
inline Interval pow_enclosure(const Rational& base, const Rational& expo, mpfr_prec_t prec) {
  if (sgn(base) == 0) {
    if (sgn(expo) > 0) return Interval::zero(prec);
    raise(errc::nonpositive_base, "0 base with nonpositive exponent");
  }
  if (sgn(base) < 0) raise(errc::nonpositive_base, "negative power base");
  if (auto exact = exact_rational_pow(base, expo)) return Interval::from_exact(*exact, prec);
  return pow(Interval::from_exact(base, prec), expo, prec);
}

// The Copson choice lambda_n = q_n / Q_n^alpha, mu_n = Q_n^{(1-alpha)/2},
// with mu_0 = 0 exactly.
class LambdaMuPair {
 public:
  LambdaMuPair(std::shared_ptr<const WeightSequence> seq, Rational alpha, mpfr_prec_t prec)
      : seq_(std::move(seq)), alpha_(std::move(alpha)), prec_(prec) {
    check_alpha(alpha_);
  }

  const Rational& alpha() const { return alpha_; }
  mpfr_prec_t precision() const { return prec_; }
  const WeightSequence& sequence() const { return *seq_; }
  long nmax() const { return seq_->nmax(); }

  Interval lambda(long n) const {
    if (auto r = lambda_rational(n)) return Interval::from_exact(*r, prec_);
    return mul_q(pow_enclosure(seq_->Q(n), Rational(-alpha_), prec_), seq_->q(n));
  }

  Interval mu(long n) const {
    if (n == 0) return Interval::zero(prec_);
    return pow_enclosure(seq_->Q(n), mu_exponent(), prec_);
  }

  std::optional<Rational> lambda_rational(long n) const {
    auto p = exact_rational_pow(seq_->Q(n), alpha_);
    if (!p) return std::nullopt;
    return Rational(seq_->q(n) / *p);
  }

  std::optional<Rational> mu_rational(long n) const {
    if (n == 0) return Rational(0);
    return exact_rational_pow(seq_->Q(n), mu_exponent());
  }

  Rational mu_exponent() const { return Rational((Rational(1) - alpha_) / 2); }

 private:
  std::shared_ptr<const WeightSequence> seq_;
  Rational alpha_;
  mpfr_prec_t prec_;
};

inline LambdaMuPair copson_lambda_mu(std::shared_ptr<const WeightSequence> seq, const Rational& alpha,
                                     mpfr_prec_t prec) {
  return LambdaMuPair(std::move(seq), alpha, prec);
}

inline LambdaMuPair copson_lambda_mu(const WeightSequence& seq, const Rational& alpha,
                                     mpfr_prec_t prec) {
  return LambdaMuPair(std::make_shared<const WeightSequence>(seq), alpha, prec);
}

}  // namespace copson
