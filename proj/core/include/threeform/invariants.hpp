#pragma once

#include "threeform/exterior.hpp"

#include <map>
#include <optional>
#include <string>

namespace threeform {

class NotPrimitive : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A computation that two independent code paths must agree on did not.
class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Endomorphism of V tensored with the density_power-th power of Λ⁶V*.
template <class S>
struct DensityEndo {
  Matrix<S> matrix;
  int density_power = 1;

  Vec6<S> operator()(const Vec6<S>& v) const { return threeform::apply(matrix, v); }
  friend DensityEndo operator*(const DensityEndo& a, const DensityEndo& b) {
    return {a.matrix * b.matrix, a.density_power + b.density_power};
  }
};

template <class S>
struct DensityForm {
  Form<S> form;
  int density_power = 1;
};

template <class S>
struct DensityScalar {
  S value;
  int density_power = 2;
};

template <class S>
S power(const S& x, int n) {
  S r(1);
  for (int i = 0; i < std::abs(n); ++i) r *= x;
  return n < 0 ? S(1) / r : r;
}

/// Symplectic form with its Liouville factor c, ω³/3! = c·e^{123456}.
template <class S>
class SymplecticFrame {
 public:
  SymplecticFrame() : SymplecticFrame(standard_omega()) {}
  explicit SymplecticFrame(Form<S> omega) : omega_(std::move(omega)), matrix_(6, 6) {
    if (omega_.grade() != 2) throw std::invalid_argument("symplectic form must have grade 2");
    Form<S> top = wedge(omega_, omega_, omega_);
    trivialization_ = top[0] / S(6);
    if (scalar_traits<S>::is_zero(trivialization_)) throw std::domain_error("degenerate 2-form: ω³ = 0");
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) {
        S w = omega_.coeff(static_cast<Blade>((1u << i) | (1u << j)));
        matrix_(i, j) = w;
        matrix_(j, i) = -w;
      }
  }

  static Form<S> standard_omega() {
    return Form<S>::basis({1, 2}) + Form<S>::basis({3, 4}) + Form<S>::basis({5, 6});
  }
  static SymplecticFrame standard() { return SymplecticFrame(standard_omega()); }

  const Form<S>& omega() const { return omega_; }
  /// ω(e_i, e_j).
  const Matrix<S>& matrix() const { return matrix_; }
  const S& trivialization() const { return trivialization_; }

  S pair(const Vec6<S>& u, const Vec6<S>& v) const {
    S s(0);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) s += u[i] * matrix_(i, j) * v[j];
    return s;
  }

  /// Value in units of ω³/3! of a quantity carrying `power` densities.
  S trivialize(const S& v, int density_power) const { return v / power(trivialization_, density_power); }
  Matrix<S> trivialize(const DensityEndo<S>& k) const {
    return k.matrix * (S(1) / power(trivialization_, k.density_power));
  }
  Form<S> trivialize(const DensityForm<S>& f) const {
    return f.form * (S(1) / power(trivialization_, f.density_power));
  }
  S trivialize(const DensityScalar<S>& q) const { return trivialize(q.value, q.density_power); }

 private:
  Form<S> omega_;
  Matrix<S> matrix_;
  S trivialization_;
};

template <class S>
void require_three_form(const Form<S>& phi) {
  if (phi.grade() != 3) throw std::invalid_argument("expected a 3-form");
}

/// K(φ)(v) = −ι_vφ∧φ read as a vector via Λ⁵ ≅ V⊗Λ⁶.
template <class S>
DensityEndo<S> K_of(const Form<S>& phi) {
  require_three_form(phi);
  DensityEndo<S> k{Matrix<S>(6, 6), 1};
  for (int j = 0; j < 6; ++j) {
    Vec6<S> col = five_to_vector(wedge(interior_basis(j, phi), phi));
    for (int i = 0; i < 6; ++i) k.matrix(i, j) = -col[i];
  }
  return k;
}

/// F(φ)(v1,v2,v3) = −2φ(K v1, v2, v3), from a precomputed K.
template <class S>
DensityForm<S> F_from_K(const Form<S>& phi, const DensityEndo<S>& k) {
  DensityForm<S> f{Form<S>(3), k.density_power};
  std::array<Form<S>, 6> contracted;
  for (int a = 0; a < 6; ++a) {
    Vec6<S> ka;
    for (int i = 0; i < 6; ++i) ka[i] = k.matrix(i, a);
    contracted[a] = interior(ka, phi);
  }
  for (int r = 0; r < f.form.size(); ++r) {
    Blade m = f.form.blade(r);
    int a = std::countr_zero(static_cast<unsigned>(m));
    Blade rest = static_cast<Blade>(m ^ (1u << a));
    S c = contracted[a].coeff(rest);
    f.form[r] = -(c + c);
  }
  return f;
}

template <class S>
DensityForm<S> F_of(const Form<S>& phi) {
  require_three_form(phi);
  return F_from_K(phi, K_of(phi));
}

/// Q(φ) = −φ∧F(φ), as the coefficient on e^{123456}.
template <class S>
DensityScalar<S> Q_from_F(const Form<S>& phi, const DensityForm<S>& f) {
  return {-top_coeff(wedge(phi, f.form)), f.density_power + 1};
}

template <class S>
DensityScalar<S> Q_of(const Form<S>& phi) {
  return Q_from_F(phi, F_of(phi));
}

/// Dual Lefschetz operator (contraction with the Poisson bivector of ω) and
/// primitivity; ω∧φ = 0 and Λφ = 0 are evaluated separately and must agree.
template <class S>
struct LefschetzResult {
  Form<S> lambda_phi;
  bool is_primitive = false;
};

template <class S>
bool is_zero_form(const Form<S>& f, double tol = 0.0) {
  if constexpr (is_exact_v<S>) {
    return f.is_zero();
  } else {
    for (int r = 0; r < f.size(); ++r)
      if (scalar_traits<S>::magnitude(f[r]) > tol) return false;
    return true;
  }
}

template <class S>
double form_max_abs(const Form<S>& f) {
  double m = 0;
  for (int r = 0; r < f.size(); ++r) m = std::max(m, scalar_traits<S>::magnitude(f[r]));
  return m;
}

template <class S>
LefschetzResult<S> lefschetz(const SymplecticFrame<S>& frame, const Form<S>& phi, double tol = 1e-9) {
  require_three_form(phi);
  Matrix<S> pi = inverse(frame.matrix());
  Form<S> lam(1);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      if (scalar_traits<S>::is_zero(pi(i, j))) continue;
      lam += interior_basis(j, interior_basis(i, phi)) * pi(i, j);
    }
  double scale = tol * std::max(1.0, form_max_abs(phi));
  bool by_wedge = is_zero_form(wedge(frame.omega(), phi), scale);
  bool by_contraction = is_zero_form(lam, scale);
  if (by_wedge != by_contraction)
    throw InternalInconsistency("primitivity tests disagree: ω∧φ and Λφ give different answers");
  return {lam, by_wedge};
}

/// Symmetric bilinear form with its inertia (zeros, positives, negatives).
template <class S>
struct SymBilinear {
  Matrix<S> matrix;
  Signature signature;
};

/// The three expressions for q(ω,φ), each as a 6×6 matrix.
template <class S>
struct QFormulas {
  Matrix<S> via_K;        // ω(v1, K v2)
  Matrix<S> via_wedge;    // ι_{v1}φ∧ι_{v2}φ∧ω / (ω³/3!)
  Matrix<S> via_pairing;  // −ω(ι_{v1}φ, ι_{v2}φ)
};

/// ω extended to 2-forms: ω(α1∧α2, β1∧β2) = det[ω*(αi, βj)], where
/// ω*(α,β) = ω(α♯,β♯) and ω(α♯,·) = α.
template <class S>
S omega_on_two_forms(const Matrix<S>& w_star, const Form<S>& a, const Form<S>& b) {
  S total(0);
  for (int r = 0; r < a.size(); ++r) {
    if (scalar_traits<S>::is_zero(a[r])) continue;
    Blade ma = a.blade(r);
    int i = std::countr_zero(static_cast<unsigned>(ma));
    int j = std::countr_zero(static_cast<unsigned>(ma ^ (1u << i)));
    for (int s = 0; s < b.size(); ++s) {
      if (scalar_traits<S>::is_zero(b[s])) continue;
      Blade mb = b.blade(s);
      int k = std::countr_zero(static_cast<unsigned>(mb));
      int l = std::countr_zero(static_cast<unsigned>(mb ^ (1u << k)));
      total += a[r] * b[s] * (w_star(i, k) * w_star(j, l) - w_star(i, l) * w_star(j, k));
    }
  }
  return total;
}

template <class S>
QFormulas<S> q_formulas(const SymplecticFrame<S>& frame, const Form<S>& phi) {
  QFormulas<S> out{Matrix<S>(6, 6), Matrix<S>(6, 6), Matrix<S>(6, 6)};
  Matrix<S> k = frame.trivialize(K_of(phi));
  out.via_K = frame.matrix() * k;
  // α = ω(u,·) has components Ωᵀu, so ω*(α,β) = αᵀ Ω⁻ᵀ β
  Matrix<S> w_star = inverse(frame.matrix()).transpose();
  std::array<Form<S>, 6> ip;
  for (int a = 0; a < 6; ++a) ip[a] = interior_basis(a, phi);
  S inv_c = S(1) / frame.trivialization();
  for (int a = 0; a < 6; ++a)
    for (int b = a; b < 6; ++b) {
      S w = top_coeff(wedge(ip[a], ip[b], frame.omega())) * inv_c;
      S p = -omega_on_two_forms(w_star, ip[a], ip[b]);
      out.via_wedge(a, b) = out.via_wedge(b, a) = w;
      out.via_pairing(a, b) = out.via_pairing(b, a) = p;
    }
  return out;
}

template <class S>
bool matrices_agree(const Matrix<S>& a, const Matrix<S>& b, double tol) {
  if constexpr (is_exact_v<S>) {
    return a == b;
  } else {
    double scale = std::max({1.0, max_abs(a), max_abs(b)});
    return max_abs(a - b) <= tol * scale;
  }
}

/// q(ω,φ) for primitive φ; all three formulas are computed and must agree.
template <class S>
SymBilinear<S> q_of(const SymplecticFrame<S>& frame, const Form<S>& phi, double tol = 1e-9) {
  require_three_form(phi);
  if (!lefschetz(frame, phi, tol).is_primitive) throw NotPrimitive("q(ω,φ) needs a primitive 3-form");
  QFormulas<S> f = q_formulas(frame, phi);
  if (!matrices_agree(f.via_K, f.via_wedge, tol) || !matrices_agree(f.via_K, f.via_pairing, tol))
    throw InternalInconsistency("the three formulas for q(ω,φ) disagree");
  if (!matrices_agree(f.via_K, f.via_K.transpose(), tol))
    throw InternalInconsistency("q(ω,φ) is not symmetric");
  return {f.via_K, signature(f.via_K, tol)};
}

/// Dimensions of ker φ, ker K, Im K, (Ann φ)^⊥ and which equal-dimension
/// pairs were checked to coincide.
struct SubspaceProfile {
  int dim_ker_phi = 0;
  int dim_ker_K = 0;
  int dim_im_K = 0;
  int dim_ann_perp = 0;
  std::map<std::string, bool> equal;  // e.g. "kerK=ImK" -> true

  std::array<int, 4> dims() const { return {dim_ker_phi, dim_ker_K, dim_im_K, dim_ann_perp}; }
};

template <class S>
std::vector<Vec6<S>> column_space(const Matrix<S>& m, double rel_tol = kRankTolerance) {
  // Im m = (ker mᵀ)^⊥
  auto left = nullspace(m.transpose(), rel_tol);
  std::vector<Vec6<S>> out;
  if (left.empty()) {
    for (int i = 0; i < 6; ++i) out.push_back(unit_vec<S>(i));
    return out;
  }
  for (auto& x : nullspace(rows_matrix(left, 6), rel_tol)) {
    Vec6<S> v;
    std::copy(x.begin(), x.end(), v.begin());
    out.push_back(v);
  }
  return out;
}

template <class S>
std::vector<Vec6<S>> matrix_kernel(const Matrix<S>& m, double rel_tol = kRankTolerance) {
  std::vector<Vec6<S>> out;
  for (auto& x : nullspace(m, rel_tol)) {
    Vec6<S> v;
    std::copy(x.begin(), x.end(), v.begin());
    out.push_back(v);
  }
  return out;
}

template <class S>
SubspaceProfile subspace_profile(const Form<S>& phi, double rel_tol = kRankTolerance) {
  require_three_form(phi);
  Matrix<S> k = K_of(phi).matrix;
  std::array<std::pair<std::string, std::vector<Vec6<S>>>, 4> spaces{{
      {"kerPhi", kernel(phi, rel_tol)},
      {"kerK", matrix_kernel(k, rel_tol)},
      {"ImK", column_space(k, rel_tol)},
      {"AnnPerp", annihilator(phi, rel_tol).perp},
  }};
  SubspaceProfile p;
  p.dim_ker_phi = static_cast<int>(spaces[0].second.size());
  p.dim_ker_K = static_cast<int>(spaces[1].second.size());
  p.dim_im_K = static_cast<int>(spaces[2].second.size());
  p.dim_ann_perp = static_cast<int>(spaces[3].second.size());
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      if (spaces[a].second.size() != spaces[b].second.size()) continue;
      bool same = same_span(as_rows(spaces[a].second), as_rows(spaces[b].second), 6, rel_tol);
      if (!same)
        throw InternalInconsistency("subspaces " + spaces[a].first + " and " + spaces[b].first +
                                    " have equal dimension but differ");
      p.equal[spaces[a].first + "=" + spaces[b].first] = true;
    }
  return p;
}

}  // namespace threeform
