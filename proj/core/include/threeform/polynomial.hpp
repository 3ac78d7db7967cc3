#pragma once

#include "threeform/jet.hpp"
#include "threeform/scalar.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace threeform {

using Monomial = std::array<std::uint8_t, kDim>;

/// Polynomial in the six patch coordinates with exact rational coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(int c) : Polynomial(Rational(c)) {}  // NOLINT
  Polynomial(const Rational& c);                  // NOLINT

  static Polynomial variable(int axis);
  static Polynomial monomial(const Monomial& m, const Rational& c = Rational(1));

  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  int degree() const;

  Polynomial derivative(int axis) const;

  template <class S>
  S evaluate(const std::array<S, kDim>& p) const;
  template <class S>
  Jet<S> jet(const std::array<S, kDim>& p) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    return r *= b;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  /// Quotient by a nonzero constant; other divisions are not polynomial.
  Polynomial& operator/=(const Polynomial& o);
  friend Polynomial operator/(Polynomial a, const Polynomial& b) { return a /= b; }

  std::string str(const std::array<std::string, kDim>& names) const;

 private:
  void add_term(const Monomial& m, const Rational& c);

  std::map<Monomial, Rational> terms_;
};

template <class S>
S Polynomial::evaluate(const std::array<S, kDim>& p) const {
  S total(0);
  for (const auto& [m, c] : terms_) {
    S t;
    if constexpr (std::is_same_v<S, double>)
      t = to_double(c);
    else
      t = S(c);
    for (int i = 0; i < kDim; ++i)
      for (int e = 0; e < m[i]; ++e) t *= p[i];
    total += t;
  }
  return total;
}

template <class S>
Jet<S> Polynomial::jet(const std::array<S, kDim>& p) const {
  Jet<S> j(evaluate(p));
  for (int a = 0; a < kDim; ++a) j.grad[a] = derivative(a).evaluate(p);
  return j;
}

template <>
struct scalar_traits<Polynomial> {
  static constexpr bool exact = true;
  static bool is_zero(const Polynomial& x) { return x.is_zero(); }
  static double magnitude(const Polynomial& x) { return x.is_zero() ? 0.0 : 1.0; }
  static int sign(const Polynomial&) { throw std::logic_error("a polynomial has no sign"); }
  static double approx(const Polynomial&) { throw std::logic_error("a polynomial has no value"); }
};

}  // namespace threeform
