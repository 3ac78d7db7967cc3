#pragma once

#include "threeform/classify.hpp"

#include <optional>

namespace threeform {

/// Sign s in ι_{JX}φ = s·ι_Xφ̂ and ι_{JX}φ̂ = −s·ι_Xφ, fixed once on the
/// O₋⁺ catalog form with J = K/√(−λ), √(−λ) > 0 and φ̂ = φ(J·,J·,J·).
inline constexpr int kType30Sign = -1;

template <class S>
Form<root_field_t<S>> lift_form(const Form<S>& f) {
  return f.map([](const S& x) { return lift_root(x); });
}

template <class S>
Matrix<root_field_t<S>> lift_matrix(const Matrix<S>& m) {
  return m.map([](const S& x) { return lift_root(x); });
}

/// Complex-structure data of a 3-form with Q < 0. Values in units of the
/// frame's ω³/3! when a frame is given, of e^{123456} otherwise.
template <class S>
struct HitchinPackage {
  using R = root_field_t<S>;
  DensityScalar<S> lambda;  // Q/4, untrivialized
  S neg_lambda;             // −λ trivialized, > 0
  R sqrt_neg_lambda;
  Matrix<R> J;
  Form<R> phi_hat;
  std::optional<R> norm_sq;  // |φ|², with a frame
  std::optional<MuValue<S>> mu;
};

template <class S>
HitchinPackage<S> hitchin_package(const Form<S>& phi, const std::optional<SymplecticFrame<S>>& frame = std::nullopt) {
  using R = root_field_t<S>;
  require_three_form(phi);
  DensityEndo<S> k = K_of(phi);
  DensityScalar<S> q = Q_from_F(phi, F_from_K(phi, k));
  if (scalar_traits<S>::sign(q.value) >= 0) throw std::domain_error("hitchin_package needs Q(φ) < 0");
  S c = frame ? frame->trivialization() : S(1);
  HitchinPackage<S> p;
  p.lambda = {q.value / S(4), 2};
  p.neg_lambda = -p.lambda.value / power(c, 2);
  if (scalar_traits<S>::sign(p.neg_lambda) <= 0)
    throw InternalInconsistency("trivialized −λ is not positive although Q < 0");
  p.sqrt_neg_lambda = root_sqrt(p.neg_lambda);
  Matrix<R> kt = lift_matrix(k.matrix) * (R(1) / lift_root(c));
  p.J = kt * (R(1) / p.sqrt_neg_lambda);
  p.phi_hat = pullback(p.J, lift_form(phi));
  if (frame) {
    p.norm_sq = top_coeff(wedge(lift_form(phi), p.phi_hat)) / lift_root(c);
    if (lefschetz(*frame, phi).is_primitive) {
      SpOrbit<S> orbit = sp_classify(*frame, phi);
      p.mu = orbit.mu;
    }
  }
  return p;
}

/// Real form of the (3,0)-type condition for all basis vectors.
template <class S>
bool is_type_30(const HitchinPackage<S>& p, const Form<S>& phi, double tol = 1e-10) {
  using R = root_field_t<S>;
  Form<R> ph = lift_form(phi);
  for (int x = 0; x < 6; ++x) {
    Vec6<R> jx;
    for (int i = 0; i < 6; ++i) jx[i] = p.J(i, x);
    Form<R> a = interior(jx, ph) - interior_basis(x, p.phi_hat) * R(kType30Sign);
    Form<R> b = interior(jx, p.phi_hat) + interior_basis(x, ph) * R(kType30Sign);
    if (!is_zero_form(a, tol) || !is_zero_form(b, tol)) return false;
  }
  return true;
}

/// Split analogue for Q > 0: P = 2K/√Q squares to the identity.
template <class S>
struct ParaPackage {
  using R = root_field_t<S>;
  Matrix<R> P;
  std::vector<Vec6<R>> eigen_plus;
  std::vector<Vec6<R>> eigen_minus;
};

template <class S>
ParaPackage<S> para_package(const Form<S>& phi) {
  using R = root_field_t<S>;
  require_three_form(phi);
  DensityEndo<S> k = K_of(phi);
  S q = Q_from_F(phi, F_from_K(phi, k)).value;
  if (scalar_traits<S>::sign(q) <= 0) throw std::domain_error("para_package needs Q(φ) > 0");
  ParaPackage<S> p;
  p.P = lift_matrix(k.matrix) * (R(2) / root_sqrt(q));
  Matrix<R> id = Matrix<R>::identity(6);
  p.eigen_plus = matrix_kernel(p.P - id);
  p.eigen_minus = matrix_kernel(p.P + id);
  if (p.eigen_plus.size() != 3 || p.eigen_minus.size() != 3)
    throw InternalInconsistency("para-complex eigenspaces are not both 3-dimensional");
  return p;
}

/// |φ|² as the coefficient of φ∧φ̂ against ω³/3!, for φ ∈ O₋⁺.
template <class S>
root_field_t<S> norm_sq(const SymplecticFrame<S>& frame, const Form<S>& phi) {
  SpOrbit<S> orbit = sp_classify(frame, phi);
  if (orbit.tag != SpTag::O_minus_plus) throw std::domain_error("norm_sq is defined on O-+ only");
  return *hitchin_package(phi, std::optional<SymplecticFrame<S>>(frame)).norm_sq;
}

}  // namespace threeform
