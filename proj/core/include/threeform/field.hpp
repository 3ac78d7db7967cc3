#pragma once

#include "threeform/classify.hpp"
#include "threeform/expr.hpp"
#include "threeform/polynomial.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace threeform {

using Point = std::array<double, kDim>;
using ExactPoint = std::array<Rational, kDim>;

/// Central-difference steps per coordinate axis for numeric coefficients.
struct FdSteps {
  std::array<double, kDim> h;
  FdSteps() { h.fill(1e-5); }
  explicit FdSteps(const std::array<double, kDim>& steps) : h(steps) {}
};

enum class Backend { Polynomial, Numeric };

/// Coefficient function on a patch: an exact polynomial, or a numeric
/// closed form whose derivatives are central differences.
class CoefField {
 public:
  using Fn = std::function<double(const Point&)>;

  CoefField() = default;
  CoefField(int c) : rep_(Polynomial(c)) {}                    // NOLINT
  CoefField(const Rational& c) : rep_(Polynomial(c)) {}        // NOLINT
  CoefField(Polynomial p) : rep_(std::move(p)) {}              // NOLINT

  static CoefField numeric(Fn f, std::string description);
  /// Parse a closed form; polynomial expressions get the exact backend.
  static CoefField parse(const std::string& text, const std::array<std::string, kDim>& names);

  Backend backend() const { return is_polynomial() ? Backend::Polynomial : Backend::Numeric; }
  bool is_polynomial() const { return std::holds_alternative<Polynomial>(rep_); }
  const Polynomial& polynomial() const;
  /// Constants (including zero) combine with either backend.
  bool is_constant() const { return is_polynomial() && polynomial().is_constant(); }
  bool is_zero() const { return is_polynomial() && polynomial().is_zero(); }
  std::string description(const std::array<std::string, kDim>& names) const;

  double value(const Point& p) const;
  Rational value(const ExactPoint& p) const;
  Jet<double> jet(const Point& p, const FdSteps& steps = {}) const;
  Jet<Rational> jet(const ExactPoint& p, const FdSteps& steps = {}) const;

  CoefField derivative(int axis, const FdSteps& steps = {}) const;
  CoefField to_numeric() const;

  CoefField operator-() const;
  CoefField& operator+=(const CoefField& o);
  CoefField& operator-=(const CoefField& o);
  CoefField& operator*=(const CoefField& o);
  CoefField& operator/=(const CoefField& o);
  friend CoefField operator+(CoefField a, const CoefField& b) { return a += b; }
  friend CoefField operator-(CoefField a, const CoefField& b) { return a -= b; }
  friend CoefField operator*(CoefField a, const CoefField& b) { return a *= b; }
  friend CoefField operator/(CoefField a, const CoefField& b) { return a /= b; }
  /// Structural equality: equal polynomials, or the same numeric closure.
  friend bool operator==(const CoefField& a, const CoefField& b);

 private:
  struct Numeric {
    std::shared_ptr<const Fn> fn;
    std::string description;
  };
  void check_backend(const CoefField& o, const char* op) const;

  std::variant<Polynomial, Numeric> rep_;
};

template <>
struct scalar_traits<CoefField> {
  static constexpr bool exact = true;
  static bool is_zero(const CoefField& x) { return x.is_zero(); }
  static double magnitude(const CoefField& x) { return x.is_zero() ? 0.0 : 1.0; }
  static int sign(const CoefField&) { throw std::logic_error("a coefficient field has no sign"); }
  static double approx(const CoefField&) { throw std::logic_error("a coefficient field has no value"); }
};

using FormField = Form<CoefField>;
using VectorField = Vec6<CoefField>;

struct EndoField {
  Matrix<CoefField> matrix;
  int density_power = 1;
};

Backend backend_of(const FormField& f);
Backend backend_of(const VectorField& v);
Backend backend_of(const EndoField& k);

template <class S>
FormField constant_field(const Form<S>& f) {
  if constexpr (std::is_same_v<S, Rational>) {
    return f.map([](const Rational& c) { return CoefField(c); });
  } else {
    return f.map([](double c) { return CoefField::numeric([c](const Point&) { return c; }, std::to_string(c)); });
  }
}

inline VectorField coordinate_field(int axis) {
  VectorField v;
  v.fill(CoefField(0));
  v[axis] = CoefField(1);
  return v;
}

FormField to_numeric(const FormField& f);
VectorField to_numeric(const VectorField& v);

/// Pointwise jets: exact for polynomials, central differences otherwise.
template <class S>
Jet<S> jet_at(const CoefField& c, const std::array<S, kDim>& p, const FdSteps& steps) {
  return c.jet(p, steps);
}

template <class S>
Form<Jet<S>> jets_at(const FormField& f, const std::array<S, kDim>& p, const FdSteps& steps = {}) {
  Form<Jet<S>> out(f.grade());
  for (int r = 0; r < f.size(); ++r)
    if (!f[r].is_zero()) out[r] = f[r].jet(p, steps);
  return out;
}

template <class S>
Vec6<Jet<S>> jets_at(const VectorField& v, const std::array<S, kDim>& p, const FdSteps& steps = {}) {
  Vec6<Jet<S>> out;
  for (int i = 0; i < kDim; ++i) out[i] = v[i].is_zero() ? Jet<S>() : v[i].jet(p, steps);
  return out;
}

template <class S>
Matrix<Jet<S>> jets_at(const EndoField& k, const std::array<S, kDim>& p, const FdSteps& steps = {}) {
  Matrix<Jet<S>> out(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (!k.matrix(i, j).is_zero()) out(i, j) = k.matrix(i, j).jet(p, steps);
  return out;
}

template <class S>
Form<S> values_of(const Form<Jet<S>>& f) {
  return f.map([](const Jet<S>& j) { return j.value; });
}

template <class S>
Vec6<S> values_of(const Vec6<Jet<S>>& v) {
  Vec6<S> r;
  for (int i = 0; i < kDim; ++i) r[i] = v[i].value;
  return r;
}

template <class S>
Matrix<S> values_of(const Matrix<Jet<S>>& m) {
  return m.map([](const Jet<S>& j) { return j.value; });
}

template <class S>
Form<S> value_at(const FormField& f, const std::array<S, kDim>& p) {
  Form<S> out(f.grade());
  for (int r = 0; r < f.size(); ++r)
    if (!f[r].is_zero()) out[r] = f[r].value(p);
  return out;
}

template <class S>
Vec6<S> value_at(const VectorField& v, const std::array<S, kDim>& p) {
  Vec6<S> out = zero_vec<S>();
  for (int i = 0; i < kDim; ++i)
    if (!v[i].is_zero()) out[i] = v[i].value(p);
  return out;
}

/// (dφ)(p) from the first jets of φ's coefficients.
template <class S>
Form<S> d_at(const Form<Jet<S>>& f) {
  if (f.grade() >= 6) throw std::invalid_argument("d of a top-degree form");
  Form<S> out(f.grade() + 1);
  for (int r = 0; r < f.size(); ++r) {
    Blade m = f.blade(r);
    for (int i = 0; i < kDim; ++i) {
      if (m >> i & 1) continue;
      const S& g = f[r].grad[i];
      if (scalar_traits<S>::is_zero(g)) continue;
      Blade n = static_cast<Blade>(m | (1u << i));
      if (wedge_sign(1u << i, m) > 0)
        out.coeff(n) += g;
      else
        out.coeff(n) -= g;
    }
  }
  return out;
}

/// [X,Y](p) from first jets: X(Yⁱ) − Y(Xⁱ).
template <class S>
Vec6<S> bracket_at(const Vec6<Jet<S>>& x, const Vec6<Jet<S>>& y) {
  Vec6<S> xv = values_of(x), yv = values_of(y);
  Vec6<S> out;
  for (int i = 0; i < kDim; ++i) out[i] = y[i].along(xv) - x[i].along(yv);
  return out;
}

template <class S>
Vec6<Jet<S>> apply_jets(const Matrix<Jet<S>>& k, const Vec6<Jet<S>>& v) {
  Vec6<Jet<S>> out;
  for (int i = 0; i < kDim; ++i) {
    Jet<S> s;
    for (int j = 0; j < kDim; ++j)
      if (!scalar_traits<Jet<S>>::is_zero(k(i, j)) && !scalar_traits<Jet<S>>::is_zero(v[j])) s += k(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

/// Exterior derivative; exact on polynomial coefficients.
FormField d(const FormField& f, const FdSteps& steps = {});

VectorField lie_bracket(const VectorField& x, const VectorField& y, const FdSteps& steps = {});

EndoField K_field(const FormField& phi);

/// Liouville factor c(p) with ω³/3! = c e^{123456}, as a jet.
template <class S>
Jet<S> liouville_jet(const FormField& omega, const std::array<S, kDim>& p, const FdSteps& steps = {}) {
  Form<Jet<S>> w = jets_at(omega, p, steps);
  return top_coeff(wedge(w, w, w)) / Jet<S>(S(6));
}

/// N_K(X,Y)(p) = −K²[X,Y] + K([KX,Y] + [X,KY]) − [KX,KY], with K trivialized by
/// ω³/3! when it carries densities.
template <class S>
Vec6<S> nijenhuis(const EndoField& kf, const VectorField& xf, const VectorField& yf, const std::array<S, kDim>& p,
                  const std::optional<FormField>& omega = std::nullopt, const FdSteps& steps = {}) {
  Matrix<Jet<S>> k = jets_at(kf, p, steps);
  if (kf.density_power != 0) {
    if (!omega) throw std::invalid_argument("nijenhuis: K carries a density but no ω was given");
    Jet<S> c = liouville_jet(*omega, p, steps);
    Jet<S> scale = Jet<S>(S(1)) / power(c, kf.density_power);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) k(i, j) *= scale;
  }
  Vec6<Jet<S>> x = jets_at(xf, p, steps), y = jets_at(yf, p, steps);
  Vec6<Jet<S>> kx = apply_jets(k, x), ky = apply_jets(k, y);
  Matrix<S> kv = values_of(k);
  Vec6<S> xy = bracket_at(x, y);
  Vec6<S> mixed = bracket_at(kx, y);
  Vec6<S> mixed2 = bracket_at(x, ky);
  for (int i = 0; i < kDim; ++i) mixed[i] += mixed2[i];
  Vec6<S> kkxy = threeform::apply(kv, threeform::apply(kv, xy));
  Vec6<S> kmixed = threeform::apply(kv, mixed);
  Vec6<S> kxky = bracket_at(kx, ky);
  Vec6<S> out;
  for (int i = 0; i < kDim; ++i) out[i] = -kkxy[i] + kmixed[i] - kxky[i];
  return out;
}

/// Terms of the expression for ι_{N_K(X,Y)} ω³/3!, each converted to a
/// vector. Uses only values and first jets of φ and F(φ) at p.
///   a = ι_Yι_X dφ ∧ F,  b = dφ ∧ ι_Yι_X F,
///   c = 2φ ∧ (ι_Yι_{KX} − ι_Xι_{KY}) dφ,  e = φ ∧ ι_Yι_X dF.
template <class S>
struct NijenhuisTerms {
  Vec6<S> a, b, c, e;

  /// a − b + c + e, the expression as usually stated.
  Vec6<S> stated() const {
    Vec6<S> v;
    for (int i = 0; i < kDim; ++i) v[i] = a[i] - b[i] + c[i] + e[i];
    return v;
  }
  /// a + c + e: what N_K actually equals for primitive φ and closed ω.
  Vec6<S> corrected() const {
    Vec6<S> v;
    for (int i = 0; i < kDim; ++i) v[i] = a[i] + c[i] + e[i];
    return v;
  }
};

template <class S>
NijenhuisTerms<S> nijenhuis_terms(const FormField& phif, const FormField& omegaf, const VectorField& xf,
                                  const VectorField& yf, const std::array<S, kDim>& p, const FdSteps& steps = {}) {
  Form<Jet<S>> phij = jets_at(phif, p, steps);
  Form<S> omega = value_at(omegaf, p);
  S c = top_coeff(wedge(omega, omega, omega)) / S(6);
  if (scalar_traits<S>::is_zero(c)) throw std::domain_error("ω is degenerate at the evaluation point");
  Form<Jet<S>> fj = F_of(phij).form;
  Jet<S> inv_c(S(1) / c);
  for (int r = 0; r < fj.size(); ++r) fj[r] *= inv_c;
  Form<S> phi = values_of(phij);
  Form<S> dphi = d_at(phij);
  Form<S> f = values_of(fj);
  Form<S> df = d_at(fj);
  Matrix<S> k = K_of(phi).matrix * (S(1) / c);
  Vec6<S> x = value_at(xf, p), y = value_at(yf, p);
  Vec6<S> kx = threeform::apply(k, x), ky = threeform::apply(k, y);
  auto vec = [&](const Form<S>& t) {
    Vec6<S> v = five_to_vector(t);
    for (auto& e : v) e = e / c;
    return v;
  };
  Form<S> inner = interior(y, interior(kx, dphi)) - interior(x, interior(ky, dphi));
  NijenhuisTerms<S> out;
  out.a = vec(wedge(interior(y, interior(x, dphi)), f));
  out.b = vec(wedge(dphi, interior(y, interior(x, f))));
  out.c = vec(wedge(phi, inner) * S(2));
  out.e = vec(wedge(phi, interior(y, interior(x, df))));
  return out;
}

/// Coordinate box with a per-axis midpoint grid.
struct Patch {
  std::array<std::string, kDim> names{"x1", "x2", "x3", "x4", "x5", "x6"};
  std::array<Rational, kDim> lo{};
  std::array<Rational, kDim> hi{};
  std::array<int, kDim> grid{5, 5, 5, 5, 5, 5};

  static Patch unit_box(const std::array<std::string, kDim>& names, int per_axis = 5);

  /// Cell midpoints; they lie strictly inside the box.
  std::vector<ExactPoint> grid_points_exact() const;
  std::vector<Point> grid_points() const;
  Rational cell_volume() const;
  FdSteps fd_steps() const;
  void validate() const;
};

Point to_point(const ExactPoint& p);

struct OrbitSample {
  Point point;
  std::string tag;
  std::optional<double> mu;
};

struct IntegrabilityReport {
  Backend backend = Backend::Polynomial;
  bool closed = false;
  bool F_integrable = false;
  bool Q_integrable = false;
  bool F_harmonic = false;
  double closed_residual = 0;  // sup over grid of |dφ| (0 when exact)
  double F_residual = 0;       // sup over grid of |dF(φ)|
  double Q_spread = 0;         // max − min of trivialized Q over the grid
  std::vector<OrbitSample> pointwise_orbits;
  std::map<std::string, int> orbit_counts;
  bool uniform_stability = true;  // all stable or all unstable
  bool theorem_consistent = true;  // F-harmonic ⇒ Q constant and uniform type
};

struct IntegrabilityOptions {
  double tolerance = 1e-6;       // d residuals on numeric backends
  double q_constant_rel = 1e-8;  // max − min < rel·(1 + |Q|)
  bool record_points = true;
};

IntegrabilityReport integrability_report(const FormField& phi, const FormField& omega, const Patch& patch,
                                         const IntegrabilityOptions& opt = {});

struct FunctionalValue {
  double value = 0;
  std::optional<Rational> exact;
};

/// Midpoint-rule value of ∫ Q(φ) ω³/3! over the patch.
FunctionalValue hitchin_functional(const Patch& patch, const FormField& phi, const FormField& omega);

}  // namespace threeform
