#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "copson/errors.hpp"
#include "copson/exact.hpp"

namespace copson {

// Dense polynomial with exact rational coefficients, index = degree.
// The zero polynomial has an empty coefficient vector.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }
  Polynomial(std::initializer_list<Rational> coeffs) : c_(coeffs) { normalize(); }

  static Polynomial constant(const Rational& v) { return Polynomial({v}); }
  // x as a polynomial; handy for building products of linear factors.
  static Polynomial x() { return Polynomial({Rational(0), Rational(1)}); }

  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }

  const Rational& leading() const { return c_.back(); }

  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

  Rational eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Rational(static_cast<long>(k));
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> s(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) s[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) s[k] += b.c_[k];
    return Polynomial(std::move(s));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> s(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) s[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) s[k] -= b.c_[k];
    return Polynomial(std::move(s));
  }

  friend Polynomial operator-(const Polynomial& a) { return Polynomial::constant(Rational(-1)) * a; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Rational> p(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) p[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(p));
  }

  friend Polynomial operator*(const Rational& s, const Polynomial& a) {
    if (sgn(s) == 0) return Polynomial();
    std::vector<Rational> p(a.c_);
    for (auto& v : p) v *= s;
    return Polynomial(std::move(p));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  // Exact euclidean remainder of *this by d.
  Polynomial remainder(const Polynomial& d) const {
    if (d.is_zero()) raise(errc::zero_polynomial, "division by zero polynomial");
    Polynomial rem = *this;
    while (!rem.is_zero() && rem.degree() >= d.degree()) {
      Rational factor = rem.leading() / d.leading();
      long shift = rem.degree() - d.degree();
      std::vector<Rational> sub(rem.c_.size(), Rational(0));
      for (std::size_t k = 0; k < d.c_.size(); ++k) sub[k + shift] = d.c_[k] * factor;
      rem = rem - Polynomial(std::move(sub));
    }
    return rem;
  }

  // Divide out the (positive) content: gcd of numerators over lcm of
  // denominators. Signs are preserved; keeps Sturm remainders small.
  Polynomial primitive_part() const {
    if (is_zero()) return Polynomial();
    Integer num_gcd(0), den_lcm(1);
    for (const auto& v : c_) {
      if (sgn(v) == 0) continue;
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_num().get_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), v.get_den().get_mpz_t());
    }
    Rational content(num_gcd, den_lcm);
    content.canonicalize();
    std::vector<Rational> p(c_);
    for (auto& v : p) v /= content;
    return Polynomial(std::move(p));
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (long k = degree(); k >= 0; --k) {
      const Rational& v = c_[static_cast<std::size_t>(k)];
      if (sgn(v) == 0) continue;
      if (!out.empty()) out += sgn(v) > 0 ? " + " : " - ";
      else if (sgn(v) < 0) out += "-";
      Rational a = abs(v);
      if (k == 0 || a != 1) out += copson::to_string(a);
      if (k > 0) out += "x";
      if (k > 1) out += "^" + std::to_string(k);
    }
    return out;
  }

 private:
  void normalize() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

// Coefficient-wise identity after normalization (trailing zeros stripped).
inline bool poly_identity_check(const Polynomial& p, const Polynomial& q) { return p == q; }

// Product of (i - f) for i = 1..count, as a polynomial in f's variable.
inline Polynomial falling_product(const Polynomial& f, long count) {
  Polynomial acc = Polynomial::constant(Rational(1));
  for (long i = 1; i <= count; ++i) acc = acc * (Polynomial::constant(Rational(i)) - f);
  return acc;
}

}  // namespace copson
