#pragma once

#include "threeform/invariants.hpp"

#include <optional>
#include <string>
#include <vector>

namespace threeform {

enum class GlTag { O_minus, O_plus, O_0, O_1, O_3, O_6 };

enum class SpTag { O_minus_plus, O_minus_minus, O_plus, O_0_plus, O_0_minus, O_1_plus, O_1_minus, O_3_prim, O_6 };

std::string tag_name(GlTag t);
std::string tag_name(SpTag t);
GlTag parse_gl_tag(const std::string& s);
SpTag parse_sp_tag(const std::string& s);
const std::vector<GlTag>& all_gl_tags();
const std::vector<SpTag>& all_sp_tags();

inline bool is_stable(SpTag t) {
  return t == SpTag::O_minus_plus || t == SpTag::O_minus_minus || t == SpTag::O_plus;
}

// Thrown by numeric classification when neither the sign of Q nor the kernel
// rank can be decided at the configured tolerance.
class Indeterminate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Catalog signatures of q(ω,φ) per Sp-orbit.
Signature catalog_signature(SpTag t);

/// μ for a stable orbit. μ⁴ is always in the base field; the value itself is
/// present when it is (always for doubles).
template <class S>
struct MuValue {
  S fourth_power;
  std::optional<S> exact;
  double approx = 0;
};

template <class S>
struct SpOrbit {
  SpTag tag;
  std::optional<MuValue<S>> mu;
};

template <class S>
MuValue<S> make_mu(const S& fourth) {
  MuValue<S> m;
  m.fourth_power = fourth;
  m.approx = std::pow(scalar_traits<S>::approx(fourth), 0.25);
  if constexpr (std::is_same_v<S, Rational>) {
    Rational r;
    if (exact_fourth_root(fourth, r)) m.exact = r;
  } else {
    m.exact = S(m.approx);
  }
  return m;
}

// Q on the μ = 1 normal forms: −16 on both O₋ families, +4 on O₊.
inline constexpr int kQMinusAtUnitMu = -16;
inline constexpr int kQPlusAtUnitMu = 4;

template <class S>
double q_zero_tolerance(const Form<S>& phi, double tol) {
  double s = form_max_abs(phi);
  return tol * s * s * s * s;
}

template <class S>
int q_sign(const S& q, const Form<S>& phi, double tol) {
  if constexpr (is_exact_v<S>) {
    return scalar_traits<S>::sign(q);
  } else {
    if (std::fabs(q) <= q_zero_tolerance(phi, tol)) return 0;
    return q > 0 ? 1 : -1;
  }
}

/// Kernel dimension; for doubles it must be stable across two tolerances
/// and one of {0,1,3,6}, otherwise Indeterminate.
template <class S>
int robust_kernel_dim(const Form<S>& phi, double tol) {
  int d = static_cast<int>(kernel(phi, tol).size());
  if constexpr (!is_exact_v<S>) {
    int loose = static_cast<int>(kernel(phi, std::sqrt(tol)).size());
    bool allowed = d == 0 || d == 1 || d == 3 || d == 6;
    if (loose != d || !allowed)
      throw Indeterminate("kernel rank of φ is unstable at the numeric tolerance");
  }
  return d;
}

template <class S>
GlTag gl_classify(const Form<S>& phi, double tol = kRankTolerance) {
  require_three_form(phi);
  S q = Q_of(phi).value;
  int sign = q_sign(q, phi, tol);
  if (sign > 0) return GlTag::O_plus;
  if (sign < 0) return GlTag::O_minus;
  int d;
  try {
    d = robust_kernel_dim(phi, tol);
  } catch (const Indeterminate&) {
    throw Indeterminate("|Q| is below tolerance and the kernel rank of φ is unstable");
  }
  switch (d) {
    case 0: return GlTag::O_0;
    case 1: return GlTag::O_1;
    case 3: return GlTag::O_3;
    case 6: return GlTag::O_6;
  }
  throw InternalInconsistency("dim ker φ = " + std::to_string(d) + " is impossible for a 3-form");
}

/// μ = (−Q/16)^{1/4} on O₋^±, (Q/4)^{1/4} on O₊, with Q in units of ω³/3!.
template <class S>
MuValue<S> mu_of(const SymplecticFrame<S>& frame, const Form<S>& phi, SpTag tag) {
  if (!is_stable(tag)) throw std::invalid_argument("μ is defined only on the stable orbits");
  S q = frame.trivialize(Q_of(phi));
  S fourth = tag == SpTag::O_plus ? q / S(kQPlusAtUnitMu) : q / S(kQMinusAtUnitMu);
  if (scalar_traits<S>::sign(fourth) <= 0) throw std::domain_error("Q has the wrong sign for the given orbit");
  return make_mu(fourth);
}

template <class S>
SpOrbit<S> sp_classify(const SymplecticFrame<S>& frame, const Form<S>& phi, double tol = kRankTolerance) {
  require_three_form(phi);
  if (!lefschetz(frame, phi, tol).is_primitive) throw NotPrimitive("sp_classify needs a primitive 3-form");
  if (is_zero_form(phi, 0.0)) return {SpTag::O_6, std::nullopt};
  SymBilinear<S> q = q_of(frame, phi, tol);
  S qv = Q_of(phi).value;
  int sign = q_sign(qv, phi, tol);
  const Signature& sg = q.signature;
  auto pick = [&](std::initializer_list<SpTag> tags) -> SpTag {
    for (SpTag t : tags)
      if (catalog_signature(t) == sg) return t;
    std::string msg = "q signature (" + std::to_string(sg.zeros) + "," + std::to_string(sg.positives) + "," +
                      std::to_string(sg.negatives) + ") is outside the case list";
    // on floats this means Q, ker φ and q were resolved inconsistently
    if constexpr (!is_exact_v<S>) throw Indeterminate(msg);
    throw InternalInconsistency(msg);
  };
  if (sign != 0) {
    SpTag t = sign < 0 ? pick({SpTag::O_minus_plus, SpTag::O_minus_minus}) : pick({SpTag::O_plus});
    return {t, mu_of(frame, phi, t)};
  }
  int d = robust_kernel_dim(phi, tol);
  switch (d) {
    case 0: return {pick({SpTag::O_0_plus, SpTag::O_0_minus}), std::nullopt};
    case 1: return {pick({SpTag::O_1_plus, SpTag::O_1_minus}), std::nullopt};
    case 3: return {pick({SpTag::O_3_prim}), std::nullopt};
    case 6: return {SpTag::O_6, std::nullopt};
  }
  throw InternalInconsistency("dim ker φ = " + std::to_string(d) + " is impossible for a 3-form");
}

/// Normal forms exactly as tabulated (ω = e12 + e34 + e56 for the Sp list).
template <class S>
Form<S> normal_form(GlTag tag) {
  using F = Form<S>;
  switch (tag) {
    case GlTag::O_minus: return F::basis({1, 3, 5}) - F::basis({1, 4, 6}) - F::basis({2, 3, 6}) - F::basis({2, 4, 5});
    case GlTag::O_plus: return F::basis({1, 2, 3}) + F::basis({4, 5, 6});
    case GlTag::O_0: return F::basis({1, 4, 6}) + F::basis({2, 3, 6}) + F::basis({2, 4, 5});
    case GlTag::O_1: return F::basis({1, 3, 5}) + F::basis({2, 4, 5});
    case GlTag::O_3: return F::basis({1, 3, 5});
    case GlTag::O_6: return F(3);
  }
  throw std::invalid_argument("unknown GL tag");
}

template <class S>
Form<S> normal_form(SpTag tag, std::optional<S> mu = std::nullopt) {
  using F = Form<S>;
  if (is_stable(tag) && !mu) throw std::invalid_argument("stable Sp normal forms need μ");
  if (!is_stable(tag) && mu) throw std::invalid_argument("μ is only meaningful on stable Sp orbits");
  switch (tag) {
    case SpTag::O_minus_plus:
      return (F::basis({1, 3, 5}) - F::basis({1, 4, 6}) - F::basis({2, 3, 6}) - F::basis({2, 4, 5})) * *mu;
    case SpTag::O_minus_minus:
      return (F::basis({1, 3, 5}) - F::basis({1, 4, 6}) + F::basis({2, 3, 6}) + F::basis({2, 4, 5})) * *mu;
    case SpTag::O_plus: return (F::basis({1, 3, 5}) + F::basis({2, 4, 6})) * *mu;
    case SpTag::O_0_plus: return F::basis({1, 4, 6}) + F::basis({2, 3, 6}) + F::basis({2, 4, 5});
    case SpTag::O_0_minus: return F::basis({1, 4, 6}) - F::basis({2, 3, 6}) - F::basis({2, 4, 5});
    // (e13 ∓ e24)∧e5: the upper sign has signature (5,1,0)
    case SpTag::O_1_plus: return F::basis({1, 3, 5}) - F::basis({2, 4, 5});
    case SpTag::O_1_minus: return F::basis({1, 3, 5}) + F::basis({2, 4, 5});
    case SpTag::O_3_prim: return F::basis({1, 3, 5});
    case SpTag::O_6: return F(3);
  }
  throw std::invalid_argument("unknown Sp tag");
}

/// m*φ = det(m)^{density_power}·φ; density_power 0 is plain invariance, 1 is
/// the right weight for F(φ).
template <class S>
bool is_stabilizer(const LinearMap<S>& m, const Form<S>& phi, int density_power = 0, double tol = 1e-12) {
  Form<S> lhs = pullback(m, phi);
  Form<S> rhs = phi * power(m.det(), density_power);
  if constexpr (is_exact_v<S>)
    return lhs == rhs;
  else
    return is_zero_form(lhs - rhs, tol * std::max(1.0, form_max_abs(phi)));
}

/// Block matrix [[A,0],[B,C]] in the (dx¹,dx²,dx³,dy¹,dy²,dy³) covector basis,
/// returned as the map on V (its transpose, reindexed so dxʲ = e^{2j−1},
/// dyʲ = e^{2j}).
template <class S>
LinearMap<S> darboux_block_map(const Matrix<S>& a, const Matrix<S>& b, const Matrix<S>& c) {
  static constexpr int pos[6] = {0, 2, 4, 1, 3, 5};
  Matrix<S> p(6, 6);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      p(i, j) = a(i, j);
      p(3 + i, j) = b(i, j);
      p(3 + i, 3 + j) = c(i, j);
    }
  Matrix<S> m(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) m(pos[j], pos[i]) = p(i, j);
  return LinearMap<S>(m);
}

template <class S>
struct FOrbitPair {
  SpOrbit<S> phi;
  SpOrbit<S> f;
};

template <class S>
FOrbitPair<S> verify_F_orbit(const SymplecticFrame<S>& frame, const Form<S>& phi, double tol = kRankTolerance) {
  SpOrbit<S> a = sp_classify(frame, phi, tol);
  Form<S> f = frame.trivialize(F_of(phi));
  return {a, sp_classify(frame, f, tol)};
}

}  // namespace threeform
