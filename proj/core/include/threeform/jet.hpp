#pragma once

#include "threeform/scalar.hpp"

#include <array>
#include <cmath>

namespace threeform {

inline constexpr int kDim = 6;

/// First-order jet of a function of the six patch coordinates at one point:
/// the value together with its six partial derivatives. Arithmetic applies the
/// product and quotient rules, so any polynomial or rational expression of
/// jets yields the exact first derivatives of the composite.
template <class S>
struct Jet {
  S value{0};
  std::array<S, kDim> grad{};

  Jet() { grad.fill(S(0)); }
  Jet(int c) : value(c) { grad.fill(S(0)); }  // NOLINT
  Jet(const S& c) : value(c) { grad.fill(S(0)); }  // NOLINT
  Jet(const S& v, const std::array<S, kDim>& g) : value(v), grad(g) {}

  static Jet variable(const S& v, int axis) {
    Jet j(v);
    j.grad[axis] = S(1);
    return j;
  }

  Jet operator-() const {
    Jet r;
    r.value = -value;
    for (int i = 0; i < kDim; ++i) r.grad[i] = -grad[i];
    return r;
  }
  Jet& operator+=(const Jet& o) {
    value += o.value;
    for (int i = 0; i < kDim; ++i) grad[i] += o.grad[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    value -= o.value;
    for (int i = 0; i < kDim; ++i) grad[i] -= o.grad[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    for (int i = 0; i < kDim; ++i) grad[i] = grad[i] * o.value + value * o.grad[i];
    value *= o.value;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    S inv = S(1) / o.value;
    for (int i = 0; i < kDim; ++i) grad[i] = (grad[i] * o.value - value * o.grad[i]) * inv * inv;
    value *= inv;
    return *this;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  friend bool operator==(const Jet& a, const Jet& b) { return a.value == b.value && a.grad == b.grad; }
  friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

  /// Derivative along the direction v.
  S along(const std::array<S, kDim>& v) const {
    S s(0);
    for (int i = 0; i < kDim; ++i) s += grad[i] * v[i];
    return s;
  }
};

template <class S>
struct scalar_traits<Jet<S>> {
  static constexpr bool exact = scalar_traits<S>::exact;
  // zero only when the derivatives vanish too, so sparse loops never drop
  // a term that still contributes to a gradient
  static bool is_zero(const Jet<S>& x) {
    if (!scalar_traits<S>::is_zero(x.value)) return false;
    for (const auto& g : x.grad)
      if (!scalar_traits<S>::is_zero(g)) return false;
    return true;
  }
  static double magnitude(const Jet<S>& x) { return scalar_traits<S>::magnitude(x.value); }
  static int sign(const Jet<S>& x) { return scalar_traits<S>::sign(x.value); }
  static double approx(const Jet<S>& x) { return scalar_traits<S>::approx(x.value); }
};

template <class S>
Jet<S> jet_sqrt(const Jet<S>& x) requires std::is_same_v<S, double> {
  double r = std::sqrt(x.value);
  Jet<double> out(r);
  for (int i = 0; i < kDim; ++i) out.grad[i] = x.grad[i] / (2.0 * r);
  return out;
}

}  // namespace threeform
