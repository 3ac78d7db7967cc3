#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace threeform {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

// Thrown when two values from different scalar backends (or incompatible
// radicands) meet in one arithmetic expression.
class BackendMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

/// Exact square root of a non-negative rational, if it is a perfect square.
bool exact_sqrt(const Rational& q, Rational& root);
/// Exact fourth root of a non-negative rational, if it exists.
bool exact_fourth_root(const Rational& q, Rational& root);

/// Elements a + b*sqrt(d) of the real quadratic field Q(sqrt d), d > 0.
/// Values with b == 0 mix freely with any radicand; two irrational values
/// must share d.
class QuadSurd {
 public:
  QuadSurd() = default;
  QuadSurd(int a) : a_(a) {}  // NOLINT
  QuadSurd(const Rational& a) : a_(a) {}  // NOLINT
  QuadSurd(const Rational& a, const Rational& b, const Rational& d);

  /// sqrt(s) for s >= 0, folded to a rational when s is a perfect square.
  static QuadSurd sqrt_of(const Rational& s);

  const Rational& rational_part() const { return a_; }
  const Rational& surd_part() const { return b_; }
  const Rational& radicand() const { return d_; }
  bool is_rational() const { return b_ == 0; }

  int sign() const;
  double to_double() const;

  QuadSurd operator-() const { return {-a_, -b_, d_}; }
  QuadSurd& operator+=(const QuadSurd& o);
  QuadSurd& operator-=(const QuadSurd& o) { return *this += -o; }
  QuadSurd& operator*=(const QuadSurd& o);
  QuadSurd& operator/=(const QuadSurd& o);
  QuadSurd inverse() const;

  friend QuadSurd operator+(QuadSurd x, const QuadSurd& y) { return x += y; }
  friend QuadSurd operator-(QuadSurd x, const QuadSurd& y) { return x -= y; }
  friend QuadSurd operator*(QuadSurd x, const QuadSurd& y) { return x *= y; }
  friend QuadSurd operator/(QuadSurd x, const QuadSurd& y) { return x /= y; }
  friend bool operator==(const QuadSurd& x, const QuadSurd& y);
  friend bool operator!=(const QuadSurd& x, const QuadSurd& y) { return !(x == y); }

  std::string str() const;

 private:
  void join_radicand(const QuadSurd& o);
  void normalize();

  Rational a_{0};
  Rational b_{0};
  Rational d_{1};
};

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& x) { return x == 0; }
  static double magnitude(const Rational& x) { return std::fabs(to_double(x)); }
  static int sign(const Rational& x) { return x.sign(); }
  static double approx(const Rational& x) { return to_double(x); }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static bool is_zero(double x) { return x == 0.0; }
  static double magnitude(double x) { return std::fabs(x); }
  static int sign(double x) { return (x > 0) - (x < 0); }
  static double approx(double x) { return x; }
};

template <>
struct scalar_traits<QuadSurd> {
  static constexpr bool exact = true;
  static bool is_zero(const QuadSurd& x) { return x.sign() == 0; }
  static double magnitude(const QuadSurd& x) { return std::fabs(x.to_double()); }
  static int sign(const QuadSurd& x) { return x.sign(); }
  static double approx(const QuadSurd& x) { return x.to_double(); }
};

template <class S>
inline constexpr bool is_exact_v = scalar_traits<S>::exact;

// Real-closed companion used when a square root is taken: exact rationals
// extend to Q(sqrt s), doubles stay doubles.
template <class S>
struct root_field;
template <>
struct root_field<Rational> {
  using type = QuadSurd;
};
template <>
struct root_field<double> {
  using type = double;
};
template <class S>
using root_field_t = typename root_field<S>::type;

inline QuadSurd lift_root(const Rational& x) { return QuadSurd(x); }
inline double lift_root(double x) { return x; }

inline QuadSurd root_sqrt(const Rational& s) { return QuadSurd::sqrt_of(s); }
inline double root_sqrt(double s) { return std::sqrt(s); }

// Build the ratio p/q in a field scalar.
template <class S>
S ratio(long p, long q) {
  if constexpr (std::is_same_v<S, double>) {
    return static_cast<double>(p) / static_cast<double>(q);
  } else {
    return S(Rational(p, q));
  }
}

}  // namespace threeform
