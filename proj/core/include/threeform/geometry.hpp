#pragma once

#include "threeform/field.hpp"
#include "threeform/hitchin.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace threeform {

/// Darboux-type chart adapted to a Lagrangian foliation: the leaves are the
/// level sets of the base coordinates. ω must have constant coefficients and
/// vanish on the leaf directions.
struct LeafChart {
  Patch patch;
  FormField omega;
  std::array<int, 3> leaf{};  // x: tangent to the leaves
  std::array<int, 3> base{};  // y: constant on each leaf
};

LeafChart make_chart(const Patch& patch, const FormField& omega, std::array<int, 3> leaf, std::array<int, 3> base);

/// Asserts ker K(φ) = span{∂x} at every grid point of the chart's patch.
void check_chart(const LeafChart& chart, const FormField& phi);

/// ker K(φ(p)) for φ(p) ∈ O₀⁺, with the isotropy and ker K = Im K = ker F
/// checks. Throws std::domain_error for any other orbit.
template <class S>
std::vector<Vec6<S>> foliation_basis(const FormField& phi, const FormField& omega, const std::array<S, kDim>& p);

/// First jets at one point of everything the leaf geometry is built from.
template <class S>
struct LeafJets {
  Matrix<Jet<S>> K;  // K(φ) trivialized by ω³/3!
  Matrix<Jet<S>> M;  // M(i,k) = K(φ)(∂y_k) component along ∂x_i
  Matrix<S> omega;   // ω(e_a, e_b)
  Matrix<S> W;       // W(i,k) = ω(∂x_i, ∂y_k)
};

template <class S>
LeafJets<S> leaf_jets(const LeafChart& chart, const FormField& phi, const std::array<S, kDim>& p);

/// A K-preimage of a leaf-tangent vector, taken in span{∂y}. Throws
/// std::invalid_argument when y has a transverse component.
template <class S>
Vec6<Jet<S>> k_preimage(const LeafChart& chart, const LeafJets<S>& lj, const Vec6<Jet<S>>& y);

/// g_L(X,Y) = ω(K⁻¹X, Y) for leaf-tangent X, Y at p.
template <class S>
S leaf_metric(const LeafChart& chart, const FormField& phi, const Vec6<S>& x, const Vec6<S>& y,
              const std::array<S, kDim>& p);

/// Gram matrix of g_L on (∂x_1, ∂x_2, ∂x_3) at p.
template <class S>
Matrix<S> leaf_metric_matrix(const LeafChart& chart, const FormField& phi, const std::array<S, kDim>& p);

/// V_j = K(φ)(∂/∂y_j), trivialized (ω is constant so this stays polynomial
/// for polynomial φ).
std::array<VectorField, 3> d_parallel_frame(const LeafChart& chart, const FormField& phi);

/// D_X Y = K[X, K⁻¹Y] at p, for leaf-tangent X and Y.
template <class S>
Vec6<S> d_connection(const LeafChart& chart, const FormField& phi, const VectorField& x, const VectorField& y,
                     const std::array<S, kDim>& p);

/// Bott connection ∇^B_X Z for leaf-tangent X, Z at p, solved from
/// ω(∇^B_X Z, ∂y_k) = X ω(Z, ∂y_k) + ω([X, ∂y_k], Z).
template <class S>
Vec6<S> bott_derivative(const LeafChart& chart, const VectorField& x, const VectorField& z,
                        const std::array<S, kDim>& p);

/// X g_L(Y,Z) − g_L(D_X Y, Z) − g_L(Y, ∇^B_X Z).
template <class S>
S duality_residual(const LeafChart& chart, const FormField& phi, const VectorField& x, const VectorField& y,
                   const VectorField& z, const std::array<S, kDim>& p);

struct ConnectionLaws {
  double function_linear = 0;  // |D_{fX}Y − f D_X Y|
  double leibniz = 0;          // |D_X(fY) − f D_X Y − (Xf) Y|
  double torsion = 0;          // |D_X Y − D_Y X − [X,Y]|
};

/// Residuals of the connection laws, as sup norms of the vector defects.
template <class S>
ConnectionLaws connection_laws(const LeafChart& chart, const FormField& phi, const VectorField& x, const VectorField& y,
                               const CoefField& f, const std::array<S, kDim>& p);

/// Sup norm of the connection coefficients D_{V_i} V_j.
template <class S>
double d_frame_curvature(const LeafChart& chart, const FormField& phi, const std::array<S, kDim>& p);

/// Hessian data at one point in the D-parallel frame.
template <class S>
struct LeafHessian {
  Matrix<S> h;                            // h_jk = g_L(V_j, V_k)
  std::array<Matrix<S>, 3> h3;            // h3[l](j,k) = V_l(h_jk)
  Matrix<S> ricci;                        // R_jk
  S scalar;                               // h^{jk} R_jk
  S scalar_from_norm;                     // ¼|Dg|²
  S det_h;
  std::array<S, 3> det_h_leaf_derivative;  // ∂(det h)/∂x_i
  double h3_asymmetry = 0;                 // max over index permutations
};

template <class S>
LeafHessian<S> leaf_hessian(const LeafChart& chart, const FormField& phi, const std::array<S, kDim>& p);

/// Field-level h and the per-point Hessian data on the chart's grid.
struct LeafGeometry {
  std::array<VectorField, 3> V;
  std::array<std::array<CoefField, 3>, 3> h;
  std::vector<Point> points;
  std::vector<LeafHessian<double>> samples;
  double h3_asymmetry = 0;
  double det_h_drift = 0;      // max relative leaf derivative of det h
  double min_ricci_eigen = 0;  // most negative Ricci eigenvalue seen
  double scalar_mismatch = 0;  // |trace R − ¼|Dg|²|
};

/// Requires φ to be F-harmonic on the chart's patch (checked); throws
/// std::domain_error otherwise and InternalInconsistency when the symmetry
/// checks exceed tol.
LeafGeometry hessian_data(const LeafChart& chart, const FormField& phi, double tol = 1e-8);

// ---------------------------------------------------------------------------
// examples

/// Constant-coefficient degenerating family on T³×R³ with Darboux
/// coordinates (x¹,y¹,x²,y²,x³,y³).
struct DegenerationFamily {
  Rational t;
  Form<Rational> phi_t;
  Form<Rational> phi_0;
  Form<Rational> omega;
  LeafChart chart;

  FormField phi_t_field() const { return constant_field(phi_t); }
  FormField phi_0_field() const { return constant_field(phi_0); }
  FormField omega_field() const { return constant_field(omega); }
};

Form<Rational> torus_phi(const Rational& t);
DegenerationFamily torus_family(const Rational& t, int grid = 3);

struct FibrationData {
  Matrix<double> lambda_period;  // λ_ij = ∫_{A_i} l_y(∂y_j)
  Matrix<double> mu_period;      // μ_ij = ∫_{B_i} * l_y(∂y_j)
  Matrix<double> g_B;            // ∫ ⟨l_y(∂y_i), l_y(∂y_j)⟩ vol
  Matrix<double> g_B_periods;    // λᵀ μ
  std::vector<double> fiber_volume;  // one per sampled base point
  Matrix<double> q_base;         // q(∂y_i, ∂y_j)
  double isometry_residual = 0;  // max relative |q − vol⁻¹ g_B|
  double richardson_delta = 0;   // change under fiber-grid refinement
  bool xi_closed = false;
  bool lambda_invertible = false;
  bool g_B_positive = false;
  bool monge_ampere = false;     // fiber volume constant in y
  bool harmonic = false;         // l_y(∂y_j) harmonic on the fibers
};

/// Periods and base metric for the torus case; the leaf coordinates must
/// run over a unit period box.
FibrationData fibration_analysis(const DegenerationFamily& family, const FormField& phi0, int fiber_grid = 4);

struct Lambda2Example {
  Matrix<double> g;
  double C = 0;
  double det_g = 1;
  FormField phi;    // φ_f = d(fα)
  FormField alpha;  // t¹dx²∧dx³ + t²dx³∧dx¹ + t³dx¹∧dx²
  FormField omega;
  LeafChart chart;  // coordinates (x¹,x²,x³,t¹,t²,t³); leaves along t

  double r(const Point& p) const;
  std::array<double, 3> dr(const Point& p) const;
  double f(double r) const;
  double f_prime(double r) const;
  Matrix<double> h_expected(const Point& p) const;
  double S_expected(const Point& p) const;
  Vec6<double> V_expected(int j, const Point& p) const;
};

/// Builds the example on x ∈ [0,1]³, t ∈ [t_lo, t_lo+1]³. Throws
/// std::invalid_argument for a non-SPD g and std::domain_error when the box
/// leaves the admissible domain.
Lambda2Example lambda2_build(const Matrix<double>& g, double C, double t_lo = 1.0, int grid = 3);

struct Lambda2Checks {
  double f_equation = 0;     // max |f²(f+2rf′) − 1|
  double F_residual = 0;     // max |F(φ_f) + 4√det g dx¹²³|
  double basic_residual = 0;  // max |α∧ω − (√det g/2) dx¹²³∧dr|
  bool d_alpha_primitive = false;
};

Lambda2Checks lambda2_checks(const Lambda2Example& ex);

/// Coordinates (x₁,y₁,x₂,y₂,x,y); ω = dx₁∧dy₂ + dy₁∧dx₂ + dx∧dy and
/// φ₀ = f dx₂∧dy₂∧dx − (dx₁∧dx₂ − dy₁∧dy₂)∧dy.
struct K3PatchExample {
  CoefField f;
  FormField phi;
  FormField omega;
  LeafChart chart;

  /// (1/2f)(dx₁² + dy₁²) + ½dx² on (∂x₁, ∂y₁, ∂x).
  Matrix<double> g_expected(const Point& p) const;
  FormField F_expected() const;
};

/// Throws std::domain_error when f ≤ 0 at a grid point.
K3PatchExample k3_patch(const CoefField& f, int grid = 3);

inline const std::array<std::string, kDim> kTorusNames{"x1", "y1", "x2", "y2", "x3", "y3"};
inline const std::array<std::string, kDim> kLambda2Names{"x1", "x2", "x3", "t1", "t2", "t3"};
inline const std::array<std::string, kDim> kK3Names{"x1", "y1", "x2", "y2", "x", "y"};

}  // namespace threeform
