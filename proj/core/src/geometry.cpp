#include "threeform/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace threeform {

namespace {

template <class S>
double approx(const S& x) {
  return scalar_traits<S>::approx(x);
}

template <class S>
double vec_norm(const Vec6<S>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::fabs(approx(x)));
  return m;
}

template <class S>
std::string where(const std::array<S, kDim>& p) {
  std::ostringstream s;
  s << "(";
  for (int i = 0; i < kDim; ++i) s << (i ? ", " : "") << approx(p[i]);
  s << ")";
  return s.str();
}

template <class S>
Matrix<S> omega_matrix(const Form<S>& w) {
  Matrix<S> m(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      S c = w.coeff(static_cast<Blade>((1u << i) | (1u << j)));
      m(i, j) = c;
      m(j, i) = -c;
    }
  return m;
}

template <class S>
S liouville(const Form<S>& w) {
  return top_coeff(wedge(w, w, w)) / S(6);
}

template <class S>
bool negligible(const S& x, double scale) {
  if constexpr (is_exact_v<S>)
    return scalar_traits<S>::is_zero(x);
  else
    return std::fabs(x) <= 1e-9 * std::max(1.0, scale);
}

template <class S>
Vec6<S> column_of(const Matrix<S>& m, int j) {
  Vec6<S> v;
  for (int i = 0; i < 6; ++i) v[i] = m(i, j);
  return v;
}

template <class S>
Vec6<Jet<S>> constant_jets(const Vec6<S>& v) {
  Vec6<Jet<S>> out;
  for (int i = 0; i < kDim; ++i) out[i] = Jet<S>(v[i]);
  return out;
}

template <class S>
void require_leaf_tangent(const LeafChart& chart, const Vec6<S>& v, const char* what) {
  double scale = vec_norm(v);
  for (int b : chart.base)
    if (!negligible(v[b], scale)) throw std::invalid_argument(std::string(what) + " is not tangent to the leaves");
}

// ω pairing of two vectors with a constant ω matrix.
template <class T, class S>
T pair(const Matrix<S>& w, const Vec6<T>& u, const Vec6<T>& v) {
  T s(0);
  for (int a = 0; a < 6; ++a) {
    if (scalar_traits<T>::is_zero(u[a])) continue;
    for (int b = 0; b < 6; ++b) {
      if (scalar_traits<S>::is_zero(w(a, b)) || scalar_traits<T>::is_zero(v[b])) continue;
      s += u[a] * T(w(a, b)) * v[b];
    }
  }
  return s;
}

// D_X Y = K[X, K⁻¹Y] from jets.
template <class S>
Vec6<S> d_conn_jets(const LeafChart& chart, const LeafJets<S>& lj, const Vec6<Jet<S>>& x,
                    const Vec6<Jet<S>>& y) {
  require_leaf_tangent(chart, values_of(x), "X");
  Vec6<Jet<S>> pre = k_preimage(chart, lj, y);
  return threeform::apply(values_of(lj.K), bracket_at(x, pre));
}

// g_L on two leaf-tangent values.
template <class S>
S metric_value(const LeafChart& chart, const LeafJets<S>& lj, const Vec6<S>& x, const Vec6<S>& y) {
  require_leaf_tangent(chart, y, "Y");
  Vec6<S> pre = values_of(k_preimage(chart, lj, constant_jets(x)));
  return pair(lj.omega, pre, y);
}

double min_eigen(const Matrix<double>& m) {
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(a, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace

LeafChart make_chart(const Patch& patch, const FormField& omega, std::array<int, 3> leaf, std::array<int, 3> base) {
  patch.validate();
  if (omega.grade() != 2) throw std::invalid_argument("chart: ω must be a 2-form");
  for (int r = 0; r < omega.size(); ++r)
    if (omega[r].is_polynomial() && !omega[r].is_constant())
      throw std::invalid_argument("chart: ω must have constant coefficients");
  std::array<bool, kDim> used{};
  for (int i : leaf) used.at(i) = true;
  for (int i : base) {
    if (used.at(i)) throw std::invalid_argument("chart: leaf and base coordinates overlap");
    used[i] = true;
  }
  LeafChart chart{patch, omega, leaf, base};
  Point mid;
  for (int i = 0; i < kDim; ++i) mid[i] = to_double((patch.lo[i] + patch.hi[i]) / 2);
  Matrix<double> w = omega_matrix(value_at(omega, mid));
  for (int i : leaf)
    for (int j : leaf)
      if (std::fabs(w(i, j)) > 1e-12) throw std::invalid_argument("chart: ω does not vanish on the leaf directions");
  Matrix<double> wl(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) wl(i, k) = w(leaf[i], base[k]);
  if (std::fabs(determinant(wl)) < 1e-12) throw std::invalid_argument("chart: ω degenerate between leaf and base");
  return chart;
}

void check_chart(const LeafChart& chart, const FormField& phi) {
  for (const auto& p : chart.patch.grid_points()) {
    Form<double> w = value_at(chart.omega, p);
    Matrix<double> k = K_of(value_at(phi, p)).matrix * (1.0 / liouville(w));
    double scale = std::max(1.0, max_abs(k));
    Matrix<double> m(3, 3);
    for (int i = 0; i < 3; ++i) {
      if (vec_norm(column_of(k, chart.leaf[i])) > 1e-9 * scale)
        throw std::domain_error("chart: K(∂x) ≠ 0 at " + where(p));
      for (int j = 0; j < 3; ++j) m(i, j) = k(chart.leaf[i], chart.base[j]);
      for (int j = 0; j < 3; ++j)
        if (std::fabs(k(chart.base[i], chart.base[j])) > 1e-9 * scale)
          throw std::domain_error("chart: Im K is not span{∂x} at " + where(p));
    }
    if (std::fabs(determinant(m)) <= 1e-9 * scale * scale * scale)
      throw std::domain_error("chart: ker K is larger than span{∂x} at " + where(p));
  }
}

template <class S>
std::vector<Vec6<S>> foliation_basis(const FormField& phi, const FormField& omega, const std::array<S, kDim>& p) {
  Form<S> ph = value_at(phi, p);
  SymplecticFrame<S> frame(value_at(omega, p));
  SpOrbit<S> orbit = sp_classify(frame, ph);
  if (orbit.tag != SpTag::O_0_plus)
    throw std::domain_error("foliation_basis: φ is in " + tag_name(orbit.tag) + ", not O0+, at " + where(p));
  Matrix<S> k = frame.trivialize(K_of(ph));
  std::vector<Vec6<S>> ker = matrix_kernel(k);
  if (ker.size() != 3) throw InternalInconsistency("dim ker K ≠ 3 on O0+");
  Form<S> f = frame.trivialize(F_of(ph));
  auto ker_rows = as_rows(ker);
  if (!same_span(ker_rows, as_rows(column_space(k)), 6) || !same_span(ker_rows, as_rows(kernel(f)), 6))
    throw InternalInconsistency("ker K, Im K and ker F(φ) do not coincide");
  double scale = 0;
  for (const auto& v : ker) scale = std::max(scale, vec_norm(v));
  for (const auto& u : ker)
    for (const auto& v : ker)
      if (!negligible(frame.pair(u, v), scale * scale)) throw InternalInconsistency("ker K is not ω-isotropic");
  return ker;
}

template <class S>
LeafJets<S> leaf_jets(const LeafChart& chart, const FormField& phi, const std::array<S, kDim>& p) {
  FdSteps steps = chart.patch.fd_steps();
  Form<Jet<S>> pj = jets_at(phi, p, steps);
  Form<S> w = value_at(chart.omega, p);
  S c = liouville(w);
  LeafJets<S> out;
  out.K = K_of(pj).matrix;
  Jet<S> inv(S(1) / c);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) out.K(i, j) *= inv;
  out.omega = omega_matrix(w);
  out.M = Matrix<Jet<S>>(3, 3);
  out.W = Matrix<S>(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      out.M(i, k) = out.K(chart.leaf[i], chart.base[k]);
      out.W(i, k) = out.omega(chart.leaf[i], chart.base[k]);
    }
  return out;
}

template <class S>
Vec6<Jet<S>> k_preimage(const LeafChart& chart, const LeafJets<S>& lj, const Vec6<Jet<S>>& y) {
  require_leaf_tangent(chart, values_of(y), "vector");
  std::vector<Jet<S>> rhs(3);
  for (int i = 0; i < 3; ++i) rhs[i] = y[chart.leaf[i]];
  std::vector<Jet<S>> a = solve(lj.M, rhs);
  Vec6<Jet<S>> pre;
  for (int k = 0; k < 3; ++k) pre[chart.base[k]] = a[k];
  return pre;
}

template <class S>
S leaf_metric(const LeafChart& chart, const FormField& phi, const Vec6<S>& x, const Vec6<S>& y,
              const std::array<S, kDim>& p) {
  return metric_value(chart, leaf_jets(chart, phi, p), x, y);
}

template <class S>
Matrix<S> leaf_metric_matrix(const LeafChart& chart, const FormField& phi, const std::array<S, kDim>& p) {
  LeafJets<S> lj = leaf_jets(chart, phi, p);
  Matrix<S> g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      g(i, j) = metric_value(chart, lj, unit_vec<S>(chart.leaf[i]), unit_vec<S>(chart.leaf[j]));
  return g;
}

std::array<VectorField, 3> d_parallel_frame(const LeafChart& chart, const FormField& phi) {
  Matrix<CoefField> k = K_field(phi).matrix;
  FormField w = chart.omega;
  CoefField c = top_coeff(wedge(w, w, w)) / CoefField(6);
  bool promote = !c.is_polynomial() && backend_of(phi) == Backend::Polynomial;
  std::array<VectorField, 3> v;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 6; ++i) {
      CoefField e = k(i, chart.base[j]);
      if (promote && !e.is_constant()) e = e.to_numeric();
      v[j][i] = e.is_zero() ? e : e / c;
    }
  return v;
}

template <class S>
Vec6<S> d_connection(const LeafChart& chart, const FormField& phi, const VectorField& x, const VectorField& y,
                     const std::array<S, kDim>& p) {
  FdSteps steps = chart.patch.fd_steps();
  return d_conn_jets(chart, leaf_jets(chart, phi, p), jets_at(x, p, steps), jets_at(y, p, steps));
}

namespace {

template <class S>
Vec6<S> bott_jets(const LeafChart& chart, const Matrix<S>& w, const Matrix<S>& wl, const Vec6<Jet<S>>& x,
                  const Vec6<Jet<S>>& z) {
  Vec6<S> xv = values_of(x), zv = values_of(z);
  require_leaf_tangent(chart, xv, "X");
  require_leaf_tangent(chart, zv, "Z");
  Vec6<S> x_of_z;
  for (int a = 0; a < kDim; ++a) x_of_z[a] = z[a].along(xv);
  Matrix<S> a(3, 3);
  std::vector<S> rhs(3);
  for (int k = 0; k < 3; ++k) {
    int yk = chart.base[k];
    Vec6<S> dx;  // −∂X/∂y_k = [X, ∂y_k]
    for (int i = 0; i < kDim; ++i) dx[i] = -x[i].grad[yk];
    rhs[k] = pair(w, x_of_z, unit_vec<S>(yk)) + pair(w, dx, zv);
    for (int i = 0; i < 3; ++i) a(k, i) = wl(i, k);
  }
  std::vector<S> sol = solve(a, rhs);
  Vec6<S> out = zero_vec<S>();
  for (int i = 0; i < 3; ++i) out[chart.leaf[i]] = sol[i];
  return out;
}

template <class S>
std::pair<Matrix<S>, Matrix<S>> constant_omega(const LeafChart& chart, const std::array<S, kDim>& p) {
  Matrix<S> w = omega_matrix(value_at(chart.omega, p));
  Matrix<S> wl(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) wl(i, k) = w(chart.leaf[i], chart.base[k]);
  return {w, wl};
}

}  // namespace

template <class S>
Vec6<S> bott_derivative(const LeafChart& chart, const VectorField& x, const VectorField& z,
                        const std::array<S, kDim>& p) {
  FdSteps steps = chart.patch.fd_steps();
  auto [w, wl] = constant_omega(chart, p);
  return bott_jets(chart, w, wl, jets_at(x, p, steps), jets_at(z, p, steps));
}

template <class S>
S duality_residual(const LeafChart& chart, const FormField& phi, const VectorField& x, const VectorField& y,
                   const VectorField& z, const std::array<S, kDim>& p) {
  FdSteps steps = chart.patch.fd_steps();
  LeafJets<S> lj = leaf_jets(chart, phi, p);
  Vec6<Jet<S>> xj = jets_at(x, p, steps), yj = jets_at(y, p, steps), zj = jets_at(z, p, steps);
  Vec6<Jet<S>> pre = k_preimage(chart, lj, yj);
  Jet<S> g_yz = pair(lj.omega, pre, zj);
  S lhs = g_yz.along(values_of(xj));
  Vec6<S> dxy = d_conn_jets(chart, lj, xj, yj);
  Vec6<S> bz = bott_jets(chart, lj.omega, lj.W, xj, zj);
  return lhs - metric_value(chart, lj, dxy, values_of(zj)) - pair(lj.omega, values_of(pre), bz);
}

template <class S>
ConnectionLaws connection_laws(const LeafChart& chart, const FormField& phi, const VectorField& x, const VectorField& y,
                               const CoefField& f, const std::array<S, kDim>& p) {
  FdSteps steps = chart.patch.fd_steps();
  LeafJets<S> lj = leaf_jets(chart, phi, p);
  Vec6<Jet<S>> xj = jets_at(x, p, steps), yj = jets_at(y, p, steps);
  Jet<S> fj = f.jet(p, steps);
  Vec6<Jet<S>> fx, fy;
  for (int i = 0; i < kDim; ++i) {
    fx[i] = fj * xj[i];
    fy[i] = fj * yj[i];
  }
  Vec6<S> dxy = d_conn_jets(chart, lj, xj, yj);
  Vec6<S> d_fx = d_conn_jets(chart, lj, fx, yj);
  Vec6<S> d_fy = d_conn_jets(chart, lj, xj, fy);
  Vec6<S> dyx = d_conn_jets(chart, lj, yj, xj);
  Vec6<S> br = bracket_at(xj, yj);
  S xf = fj.along(values_of(xj));
  Vec6<S> e1, e2, e3;
  for (int i = 0; i < kDim; ++i) {
    e1[i] = d_fx[i] - fj.value * dxy[i];
    e2[i] = d_fy[i] - fj.value * dxy[i] - xf * yj[i].value;
    e3[i] = dxy[i] - dyx[i] - br[i];
  }
  return {vec_norm(e1), vec_norm(e2), vec_norm(e3)};
}

template <class S>
double d_frame_curvature(const LeafChart& chart, const FormField& phi, const std::array<S, kDim>& p) {
  LeafJets<S> lj = leaf_jets(chart, phi, p);
  std::array<Vec6<Jet<S>>, 3> v;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < kDim; ++i) v[j][i] = lj.K(i, chart.base[j]);
  double m = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, vec_norm(d_conn_jets(chart, lj, v[i], v[j])));
  return m;
}

template <class S>
LeafHessian<S> leaf_hessian(const LeafChart& chart, const FormField& phi, const std::array<S, kDim>& p) {
  LeafJets<S> lj = leaf_jets(chart, phi, p);
  std::array<Vec6<Jet<S>>, 3> v;
  std::array<Vec6<S>, 3> vv;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < kDim; ++i) v[j][i] = lj.K(i, chart.base[j]);
    vv[j] = values_of(v[j]);
  }
  // h_jk = g_L(V_j, V_k) = ω(∂y_j, V_k)
  Matrix<Jet<S>> hj(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) hj(j, k) = pair(lj.omega, constant_jets(unit_vec<S>(chart.base[j])), v[k]);
  LeafHessian<S> out;
  out.h = values_of(hj);
  for (int l = 0; l < 3; ++l) {
    out.h3[l] = Matrix<S>(3, 3);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out.h3[l](j, k) = hj(j, k).along(vv[l]);
  }
  auto T = [&](int a, int b, int c) -> const S& { return out.h3[c](a, b); };
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const S& x = T(a, b, c);
        for (const S* y : {&T(b, a, c), &T(a, c, b), &T(c, b, a), &T(b, c, a), &T(c, a, b)})
          out.h3_asymmetry = std::max(out.h3_asymmetry, std::fabs(approx(S(x - *y))));
      }
  Matrix<S> hi = inverse(out.h);
  out.ricci = Matrix<S>(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      S r(0);
      for (int s = 0; s < 3; ++s)
        for (int t = 0; t < 3; ++t)
          for (int l = 0; l < 3; ++l)
            for (int q = 0; q < 3; ++q)
              r += hi(s, t) * hi(l, q) * (T(j, q, s) * T(k, l, t) - T(j, k, t) * T(q, l, s));
      out.ricci(j, k) = r / S(4);
    }
  out.scalar = S(0);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) out.scalar += hi(j, k) * out.ricci(j, k);
  out.scalar_from_norm = S(0);
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 3; ++t)
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
          for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l)
              out.scalar_from_norm += hi(s, t) * hi(i, k) * hi(j, l) * T(s, i, j) * T(t, k, l);
  out.scalar_from_norm = out.scalar_from_norm / S(4);
  Jet<S> det = determinant(hj);
  out.det_h = det.value;
  for (int i = 0; i < 3; ++i) out.det_h_leaf_derivative[i] = det.grad[chart.leaf[i]];
  return out;
}

LeafGeometry hessian_data(const LeafChart& chart, const FormField& phi, double tol) {
  IntegrabilityReport rep = integrability_report(phi, chart.omega, chart.patch);
  if (!rep.F_harmonic)
    throw std::domain_error("hessian_data: φ is not F-harmonic on the patch (|dφ| = " +
                            std::to_string(rep.closed_residual) + ", |dF| = " + std::to_string(rep.F_residual) + ")");
  check_chart(chart, phi);
  LeafGeometry g;
  g.V = d_parallel_frame(chart, phi);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      CoefField s(0);
      for (int b = 0; b < kDim; ++b) {
        Blade m = static_cast<Blade>((1u << chart.base[j]) | (1u << b));
        if (b == chart.base[j] || chart.omega.coeff(m).is_zero() || g.V[k][b].is_zero()) continue;
        CoefField w = chart.omega.coeff(m);
        s += (b > chart.base[j] ? w : -w) * g.V[k][b];
      }
      g.h[j][k] = s;
    }
  g.min_ricci_eigen = 0;
  for (const auto& p : chart.patch.grid_points()) {
    LeafHessian<double> lh = leaf_hessian(chart, phi, p);
    double scale = std::max(1.0, max_abs(lh.h));
    g.h3_asymmetry = std::max(g.h3_asymmetry, lh.h3_asymmetry / scale);
    for (double dd : lh.det_h_leaf_derivative) g.det_h_drift = std::max(g.det_h_drift, std::fabs(dd / lh.det_h));
    g.min_ricci_eigen = std::min(g.min_ricci_eigen, min_eigen(lh.ricci));
    g.scalar_mismatch = std::max(g.scalar_mismatch, std::fabs(lh.scalar - lh.scalar_from_norm));
    g.points.push_back(p);
    g.samples.push_back(std::move(lh));
  }
  if (g.h3_asymmetry > tol) throw InternalInconsistency("leaf derivatives of h are not totally symmetric");
  if (g.det_h_drift > tol) throw InternalInconsistency("det h is not constant along the leaves");
  return g;
}

// ---------------------------------------------------------------------------
// torus

Form<Rational> torus_phi(const Rational& t) {
  using F = Form<Rational>;
  // dx¹∧dy²∧dy³ + dx²∧dy³∧dy¹ + dx³∧dy¹∧dy² − t² dx¹∧dx²∧dx³
  return F::basis({1, 4, 6}) + F::basis({3, 6, 2}) + F::basis({5, 2, 4}) - F::basis({1, 3, 5}) * (t * t);
}

DegenerationFamily torus_family(const Rational& t, int grid) {
  if (t <= 0 || t > 1) throw std::domain_error("torus_family: t must lie in (0,1]");
  DegenerationFamily fam;
  fam.t = t;
  fam.phi_t = torus_phi(t);
  fam.phi_0 = torus_phi(Rational(0));
  fam.omega = SymplecticFrame<Rational>::standard_omega();
  Patch patch = Patch::unit_box(kTorusNames, grid);
  fam.chart = make_chart(patch, fam.omega_field(), {0, 2, 4}, {1, 3, 5});
  return fam;
}

namespace {

struct FiberIntegrals {
  Matrix<double> lambda{3, 3}, mu{3, 3}, gB{3, 3};
  double vol = 0;
  double metric_variation = 0;
};

FiberIntegrals integrate_fiber(const LeafChart& chart, const FormField& phi, const Point& base_point, int n) {
  FiberIntegrals out;
  Matrix<double> first_ginv;
  double first_sqrt = 0;
  bool first = true;
  const double weight = 1.0 / (n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Point p = base_point;
        const int ix[3] = {a, b, c};
        for (int i = 0; i < 3; ++i) {
          int axis = chart.leaf[i];
          double lo = to_double(chart.patch.lo[axis]);
          p[axis] = lo + (ix[i] + 0.5) / n;
        }
        LeafJets<double> lj = leaf_jets(chart, phi, p);
        Matrix<double> g(3, 3);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            g(i, j) = metric_value(chart, lj, unit_vec<double>(chart.leaf[i]), unit_vec<double>(chart.leaf[j]));
        Matrix<double> ginv = inverse(g);
        double sq = std::sqrt(determinant(g));
        if (first) {
          first_ginv = ginv;
          first_sqrt = sq;
          first = false;
        } else {
          out.metric_variation =
              std::max({out.metric_variation, max_abs(ginv - first_ginv), std::fabs(sq - first_sqrt)});
        }
        // l_y(∂y_j) restricted to the leaf: components ω(∂y_j, ∂x_i)
        Matrix<double> l(3, 3);  // l(i, j) = l_y(∂y_j)(∂x_i)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) l(i, j) = lj.omega(chart.base[j], chart.leaf[i]);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            out.lambda(i, j) += weight * l(i, j);
            double star = 0;
            for (int b = 0; b < 3; ++b) star += ginv(i, b) * l(b, j);
            out.mu(i, j) += weight * sq * star;
            double gb = 0;
            for (int s = 0; s < 3; ++s)
              for (int u = 0; u < 3; ++u) gb += ginv(s, u) * l(s, i) * l(u, j);
            out.gB(i, j) += weight * sq * gb;
          }
        out.vol += weight * sq;
      }
  return out;
}

}  // namespace

FibrationData fibration_analysis(const DegenerationFamily& family, const FormField& phi0, int fiber_grid) {
  const LeafChart& chart = family.chart;
  for (int i : chart.leaf)
    if (chart.patch.hi[i] - chart.patch.lo[i] != 1)
      throw std::invalid_argument("fibration_analysis: leaf coordinates must have period 1");
  if (fiber_grid < 1) throw std::invalid_argument("fibration_analysis: fiber grid must be positive");
  check_chart(chart, phi0);

  // base sample points: the patch grid on the base axes
  std::vector<Point> bases;
  {
    Patch p = chart.patch;
    for (int i : chart.leaf) p.grid[i] = 1;
    bases = p.grid_points();
  }
  FibrationData out;
  FiberIntegrals ref = integrate_fiber(chart, phi0, bases.front(), fiber_grid);
  FiberIntegrals fine = integrate_fiber(chart, phi0, bases.front(), 2 * fiber_grid);
  out.lambda_period = ref.lambda;
  out.mu_period = ref.mu;
  out.g_B = ref.gB;
  out.g_B_periods = ref.lambda.transpose() * ref.mu;
  out.richardson_delta = std::max({max_abs(fine.gB - ref.gB), max_abs(fine.lambda - ref.lambda),
                                   max_abs(fine.mu - ref.mu), std::fabs(fine.vol - ref.vol)});
  double variation = ref.metric_variation;
  for (const auto& b : bases) {
    FiberIntegrals fi = integrate_fiber(chart, phi0, b, fiber_grid);
    out.fiber_volume.push_back(fi.vol);
    variation = std::max(variation, fi.metric_variation);
  }
  auto [vmin, vmax] = std::minmax_element(out.fiber_volume.begin(), out.fiber_volume.end());
  out.monge_ampere = *vmax - *vmin <= 1e-12 * (1 + std::fabs(*vmax));
  out.harmonic = variation <= 1e-12;
  out.lambda_invertible = std::fabs(determinant(out.lambda_period)) > 1e-12;
  out.g_B_positive = min_eigen(out.g_B) > 0;

  // ξ_i = λ_ij dy^j is closed iff ∂λ_ij/∂y_k is symmetric in (j,k)
  const double h = 1e-3;
  std::array<Matrix<double>, 3> dlam;
  for (int k = 0; k < 3; ++k) {
    Point up = bases.front(), dn = bases.front();
    up[chart.base[k]] += h;
    dn[chart.base[k]] -= h;
    dlam[k] = (integrate_fiber(chart, phi0, up, fiber_grid).lambda - integrate_fiber(chart, phi0, dn, fiber_grid).lambda) *
              (1.0 / (2 * h));
  }
  double asym = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) asym = std::max(asym, std::fabs(dlam[k](i, j) - dlam[j](i, k)));
  out.xi_closed = asym <= 1e-8;

  // q descends to the base since the leaves are q-null
  Form<double> ph = value_at(phi0, bases.front());
  SymplecticFrame<double> frame(value_at(chart.omega, bases.front()));
  Matrix<double> q = q_of(frame, ph).matrix;
  out.q_base = Matrix<double>(3, 3);
  double qmax = 0, err = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      out.q_base(i, j) = q(chart.base[i], chart.base[j]);
      qmax = std::max(qmax, std::fabs(out.q_base(i, j)));
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) err = std::max(err, std::fabs(out.q_base(i, j) - out.g_B(i, j) / ref.vol));
  out.isometry_residual = err / std::max(qmax, 1e-300);
  return out;
}

// ---------------------------------------------------------------------------
// Λ²T*N

namespace {

struct Lambda2Data {
  Matrix<double> g;
  double det_g = 1;
  double C = 0;

  double r(const Point& p) const {
    double s = 0;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) s += p[3 + j] * g(j, k) * p[3 + k];
    return s / det_g;
  }
  std::array<double, 3> dr(const Point& p) const {
    std::array<double, 3> d{};
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) d[j] += g(j, k) * p[3 + k];
      d[j] *= 2 / det_g;
    }
    return d;
  }
  double f(double r) const { return std::cbrt(std::pow(r, 1.5) + C) / std::sqrt(r); }
  double f_prime(double r) const {
    double u = std::pow(r, 1.5) + C;
    return -0.5 * std::pow(r, -1.5) * std::cbrt(u) + 0.5 / std::cbrt(u * u);
  }
};

bool admissible(const Lambda2Data& d, const Point& p) {
  double r = d.r(p);
  if (!(r > 0)) return false;
  return std::pow(r, 1.5) + d.C > 0;
}

}  // namespace

double Lambda2Example::r(const Point& p) const { return Lambda2Data{g, det_g, C}.r(p); }
std::array<double, 3> Lambda2Example::dr(const Point& p) const { return Lambda2Data{g, det_g, C}.dr(p); }
double Lambda2Example::f(double rr) const { return Lambda2Data{g, det_g, C}.f(rr); }
double Lambda2Example::f_prime(double rr) const { return Lambda2Data{g, det_g, C}.f_prime(rr); }

Matrix<double> Lambda2Example::h_expected(const Point& p) const {
  double rr = r(p), fv = f(rr), fp = f_prime(rr);
  auto d = dr(p);
  Matrix<double> h(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) h(j, k) = 2 / fv * g(j, k) - fv * fp * det_g * d[j] * d[k];
  return h;
}

double Lambda2Example::S_expected(const Point& p) const {
  double rho = std::sqrt(r(p));
  return 5 * C * C / (std::pow(rho, 4) * std::pow(rho * rho * rho + C, 4.0 / 3.0));
}

Vec6<double> Lambda2Example::V_expected(int j, const Point& p) const {
  double rr = r(p), fv = f(rr), fp = f_prime(rr);
  auto d = dr(p);
  Vec6<double> v = zero_vec<double>();
  double pre = 2 * fv * std::sqrt(det_g);
  for (int i = 0; i < 3; ++i) v[3 + i] = pre * (-fp * d[j] * p[3 + i]);
  v[3 + j] += pre * (fv + 2 * rr * fp);
  return v;
}

Lambda2Example lambda2_build(const Matrix<double>& g, double C, double t_lo, int grid) {
  if (g.rows() != 3 || g.cols() != 3) throw std::invalid_argument("lambda2: g must be 3x3");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::fabs(g(i, j) - g(j, i)) > 1e-14 * std::max(1.0, max_abs(g)))
        throw std::invalid_argument("lambda2: g is not symmetric");
  if (min_eigen(g) <= 0) throw std::invalid_argument("lambda2: g is not positive definite");
  if (!std::isfinite(C)) throw std::invalid_argument("lambda2: C must be finite");

  Lambda2Example ex;
  ex.g = g;
  ex.C = C;
  ex.det_g = determinant(g);
  auto data = std::make_shared<const Lambda2Data>(Lambda2Data{g, ex.det_g, C});

  Patch patch;
  patch.names = kLambda2Names;
  Rational tl(t_lo);
  for (int i = 0; i < kDim; ++i) {
    patch.lo[i] = i < 3 ? Rational(0) : tl;
    patch.hi[i] = patch.lo[i] + 1;
    patch.grid[i] = grid;
  }
  // the quadratic r is smallest on the box boundary or at an interior
  // critical point, so the corners plus a fine sample cover the check
  {
    Patch probe = patch;
    for (int i = 0; i < 3; ++i) probe.grid[i] = 1;
    for (int i = 3; i < 6; ++i) probe.grid[i] = 9;
    std::vector<Point> pts = probe.grid_points();
    for (int mask = 0; mask < 8; ++mask) {
      Point c{};
      for (int i = 0; i < 3; ++i) c[3 + i] = to_double(mask >> i & 1 ? patch.hi[3 + i] : patch.lo[3 + i]);
      pts.push_back(c);
    }
    for (const auto& p : pts)
      if (!admissible(*data, p))
        throw std::domain_error("lambda2: point " + where(p) + " is outside the admissible domain (r = " +
                                std::to_string(data->r(p)) + ")");
  }

  // ω = (g_kj/√det g) dx^k∧dt^j
  double sd = std::sqrt(ex.det_g);
  Form<double> w(2);
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) w += Form<double>::basis({k + 1, 4 + j}, g(k, j) / sd);
  ex.omega = constant_field(w);

  // σ1 = dx²∧dx³, σ2 = dx³∧dx¹, σ3 = dx¹∧dx²
  const int sigma[3][2] = {{2, 3}, {3, 1}, {1, 2}};
  ex.alpha = FormField(2);
  ex.phi = FormField(3);
  for (int j = 0; j < 3; ++j) {
    ex.alpha += FormField::basis({sigma[j][0], sigma[j][1]}, CoefField(Polynomial::variable(3 + j)));
    for (int i = 0; i < 3; ++i) {
      // φ_f = f dα + f′ dr∧α: coefficient of dt^i∧σ_j is f δ_ij + f′ ∂_i r t^j
      CoefField c = CoefField::numeric(
          [data, i, j](const Point& p) {
            double rr = data->r(p);
            double v = data->f_prime(rr) * data->dr(p)[i] * p[3 + j];
            return i == j ? v + data->f(rr) : v;
          },
          "phi_f[dt" + std::to_string(i + 1) + "^sigma" + std::to_string(j + 1) + "]");
      ex.phi += FormField::basis({4 + i, sigma[j][0], sigma[j][1]}, c);
    }
  }
  ex.chart = make_chart(patch, ex.omega, {3, 4, 5}, {0, 1, 2});
  return ex;
}

Lambda2Checks lambda2_checks(const Lambda2Example& ex) {
  Lambda2Checks out;
  double sd = std::sqrt(ex.det_g);
  Form<double> w = value_at(ex.omega, Point{});
  double c = liouville(w);
  Form<double> dalpha(3);
  const int sigma[3][2] = {{2, 3}, {3, 1}, {1, 2}};
  for (int j = 0; j < 3; ++j) dalpha += Form<double>::basis({4 + j, sigma[j][0], sigma[j][1]});
  out.d_alpha_primitive = is_zero_form(wedge(w, dalpha), 1e-12);
  Form<double> x123 = Form<double>::basis({1, 2, 3});
  for (const auto& p : ex.chart.patch.grid_points()) {
    double rr = ex.r(p), f = ex.f(rr), fp = ex.f_prime(rr);
    out.f_equation = std::max(out.f_equation, std::fabs(f * f * (f + 2 * rr * fp) - 1));
    Form<double> F = F_of(value_at(ex.phi, p)).form * (1.0 / c);
    out.F_residual = std::max(out.F_residual, form_max_abs(F + x123 * (4 * sd)));
    auto d = ex.dr(p);
    Form<double> dr(1);
    for (int i = 0; i < 3; ++i) dr += Form<double>::basis({4 + i}, d[i]);
    Form<double> lhs = wedge(value_at(ex.alpha, p), w);
    Form<double> rhs = wedge(x123, dr) * (sd / 2);
    out.basic_residual = std::max(out.basic_residual, form_max_abs(lhs - rhs));
  }
  return out;
}

// ---------------------------------------------------------------------------
// K3 patch

Matrix<double> K3PatchExample::g_expected(const Point& p) const {
  double fv = f.value(p);
  Matrix<double> g(3, 3);
  g(0, 0) = g(1, 1) = 1 / (2 * fv);
  g(2, 2) = 0.5;
  return g;
}

FormField K3PatchExample::F_expected() const { return FormField::basis({3, 4, 6}, f * CoefField(4)); }

K3PatchExample k3_patch(const CoefField& f, int grid) {
  K3PatchExample ex;
  ex.f = f;
  Patch patch = Patch::unit_box(kK3Names, grid);
  for (const auto& p : patch.grid_points())
    if (!(f.value(p) > 0)) throw std::domain_error("k3_patch: f ≤ 0 at " + where(p));
  ex.phi = FormField::basis({3, 4, 5}, f) - FormField::basis({1, 3, 6}) + FormField::basis({2, 4, 6});
  ex.omega = FormField::basis({1, 4}) + FormField::basis({2, 3}) + FormField::basis({5, 6});
  ex.chart = make_chart(patch, ex.omega, {0, 1, 4}, {2, 3, 5});
  return ex;
}

// ---------------------------------------------------------------------------

#define THREEFORM_GEOMETRY_INSTANTIATE(S)                                                                             \
  template std::vector<Vec6<S>> foliation_basis(const FormField&, const FormField&, const std::array<S, kDim>&);    \
  template LeafJets<S> leaf_jets(const LeafChart&, const FormField&, const std::array<S, kDim>&);                   \
  template Vec6<Jet<S>> k_preimage(const LeafChart&, const LeafJets<S>&, const Vec6<Jet<S>>&);                      \
  template S leaf_metric(const LeafChart&, const FormField&, const Vec6<S>&, const Vec6<S>&,                        \
                         const std::array<S, kDim>&);                                                               \
  template Matrix<S> leaf_metric_matrix(const LeafChart&, const FormField&, const std::array<S, kDim>&);             \
  template Vec6<S> d_connection(const LeafChart&, const FormField&, const VectorField&, const VectorField&,          \
                                const std::array<S, kDim>&);                                                        \
  template Vec6<S> bott_derivative(const LeafChart&, const VectorField&, const VectorField&,                         \
                                   const std::array<S, kDim>&);                                                     \
  template S duality_residual(const LeafChart&, const FormField&, const VectorField&, const VectorField&,            \
                              const VectorField&, const std::array<S, kDim>&);                                      \
  template ConnectionLaws connection_laws(const LeafChart&, const FormField&, const VectorField&, const VectorField&, \
                                          const CoefField&, const std::array<S, kDim>&);                            \
  template double d_frame_curvature(const LeafChart&, const FormField&, const std::array<S, kDim>&);                \
  template LeafHessian<S> leaf_hessian(const LeafChart&, const FormField&, const std::array<S, kDim>&);

THREEFORM_GEOMETRY_INSTANTIATE(double)
THREEFORM_GEOMETRY_INSTANTIATE(Rational)

}  // namespace threeform
