#include "threeform/field.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace threeform {

namespace {

const std::array<std::string, kDim> kDefaultNames{"x1", "x2", "x3", "x4", "x5", "x6"};

std::string point_str(const Point& p) {
  std::ostringstream s;
  s << "(";
  for (int i = 0; i < kDim; ++i) s << (i ? ", " : "") << p[i];
  s << ")";
  return s.str();
}

}  // namespace

CoefField CoefField::numeric(Fn f, std::string description) {
  CoefField c;
  c.rep_ = Numeric{std::make_shared<const Fn>(std::move(f)), std::move(description)};
  return c;
}

CoefField CoefField::parse(const std::string& text, const std::array<std::string, kDim>& names) {
  Expression e = Expression::parse(text, names);
  if (auto p = e.as_polynomial()) return CoefField(std::move(*p));
  return numeric([e](const Point& x) { return e.evaluate(x); }, text);
}

const Polynomial& CoefField::polynomial() const {
  if (!is_polynomial()) throw BackendMismatch("coefficient is numeric, not polynomial");
  return std::get<Polynomial>(rep_);
}

std::string CoefField::description(const std::array<std::string, kDim>& names) const {
  if (is_polynomial()) return polynomial().str(names);
  return std::get<Numeric>(rep_).description;
}

double CoefField::value(const Point& p) const {
  if (is_polynomial()) return polynomial().evaluate(p);
  return (*std::get<Numeric>(rep_).fn)(p);
}

Rational CoefField::value(const ExactPoint& p) const {
  if (!is_polynomial()) throw BackendMismatch("numeric coefficient evaluated at an exact point");
  return polynomial().evaluate(p);
}

Jet<double> CoefField::jet(const Point& p, const FdSteps& steps) const {
  if (is_polynomial()) return polynomial().jet(p);
  const Fn& f = *std::get<Numeric>(rep_).fn;
  Jet<double> j(f(p));
  for (int a = 0; a < kDim; ++a) {
    double h = steps.h[a];
    Point up = p, dn = p;
    up[a] += h;
    dn[a] -= h;
    j.grad[a] = (f(up) - f(dn)) / (2 * h);
  }
  return j;
}

Jet<Rational> CoefField::jet(const ExactPoint& p, const FdSteps&) const {
  if (!is_polynomial()) throw BackendMismatch("numeric coefficient evaluated at an exact point");
  return polynomial().jet(p);
}

CoefField CoefField::derivative(int axis, const FdSteps& steps) const {
  if (axis < 0 || axis >= kDim) throw std::out_of_range("derivative axis out of range");
  if (is_polynomial()) return CoefField(polynomial().derivative(axis));
  const Numeric& n = std::get<Numeric>(rep_);
  auto fn = n.fn;
  double h = steps.h[axis];
  return numeric(
      [fn, h, axis](const Point& p) {
        Point up = p, dn = p;
        up[axis] += h;
        dn[axis] -= h;
        return ((*fn)(up) - (*fn)(dn)) / (2 * h);
      },
      "d/d" + kDefaultNames[axis] + "(" + n.description + ")");
}

CoefField CoefField::to_numeric() const {
  if (!is_polynomial()) return *this;
  auto p = std::make_shared<const Polynomial>(polynomial());
  return numeric([p](const Point& x) { return p->evaluate(x); }, p->str(kDefaultNames));
}

void CoefField::check_backend(const CoefField& o, const char* op) const {
  bool mixed = (is_polynomial() && !is_constant() && !o.is_polynomial()) ||
               (o.is_polynomial() && !o.is_constant() && !is_polynomial());
  if (mixed)
    throw BackendMismatch(std::string("operator ") + op +
                          ": non-constant polynomial combined with a numeric coefficient; promote with to_numeric()");
}

namespace {

template <class Op>
CoefField combine_numeric(const CoefField& a, const CoefField& b, Op op, const char* sym) {
  CoefField na = a.to_numeric(), nb = b.to_numeric();
  std::string desc = "(" + na.description(kDefaultNames) + ")" + sym + "(" + nb.description(kDefaultNames) + ")";
  return CoefField::numeric([na, nb, op](const Point& p) { return op(na.value(p), nb.value(p)); }, desc);
}

}  // namespace

CoefField CoefField::operator-() const {
  if (is_polynomial()) return CoefField(-polynomial());
  CoefField self = *this;
  return numeric([self](const Point& p) { return -self.value(p); }, "-(" + description(kDefaultNames) + ")");
}

CoefField& CoefField::operator+=(const CoefField& o) {
  check_backend(o, "+");
  if (o.is_zero()) return *this;
  if (is_polynomial() && o.is_polynomial()) {
    std::get<Polynomial>(rep_) += o.polynomial();
  } else if (is_zero()) {
    *this = o;
  } else {
    *this = combine_numeric(*this, o, std::plus<>(), "+");
  }
  return *this;
}

CoefField& CoefField::operator-=(const CoefField& o) {
  check_backend(o, "-");
  if (o.is_zero()) return *this;
  if (is_polynomial() && o.is_polynomial()) {
    std::get<Polynomial>(rep_) -= o.polynomial();
  } else if (is_zero()) {
    *this = -o;
  } else {
    *this = combine_numeric(*this, o, std::minus<>(), "-");
  }
  return *this;
}

CoefField& CoefField::operator*=(const CoefField& o) {
  check_backend(o, "*");
  if (is_polynomial() && o.is_polynomial()) {
    std::get<Polynomial>(rep_) *= o.polynomial();
  } else if (is_zero() || o.is_zero()) {
    *this = CoefField(0);
  } else if (o.is_constant() && o.polynomial().constant_term() == 1) {
  } else if (is_constant() && polynomial().constant_term() == 1) {
    *this = o;
  } else {
    *this = combine_numeric(*this, o, std::multiplies<>(), "*");
  }
  return *this;
}

CoefField& CoefField::operator/=(const CoefField& o) {
  check_backend(o, "/");
  if (o.is_zero()) throw std::domain_error("division by the zero coefficient field");
  if (is_polynomial() && o.is_polynomial()) {
    std::get<Polynomial>(rep_) /= o.polynomial();
  } else if (!is_zero()) {
    *this = combine_numeric(*this, o, std::divides<>(), "/");
  }
  return *this;
}

bool operator==(const CoefField& a, const CoefField& b) {
  if (a.is_polynomial() != b.is_polynomial()) return false;
  if (a.is_polynomial()) return a.polynomial() == b.polynomial();
  return std::get<CoefField::Numeric>(a.rep_).fn == std::get<CoefField::Numeric>(b.rep_).fn;
}

Backend backend_of(const FormField& f) {
  for (int r = 0; r < f.size(); ++r)
    if (!f[r].is_polynomial()) return Backend::Numeric;
  return Backend::Polynomial;
}

Backend backend_of(const VectorField& v) {
  for (const auto& c : v)
    if (!c.is_polynomial()) return Backend::Numeric;
  return Backend::Polynomial;
}

Backend backend_of(const EndoField& k) {
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (!k.matrix(i, j).is_polynomial()) return Backend::Numeric;
  return Backend::Polynomial;
}

FormField to_numeric(const FormField& f) {
  return f.map([](const CoefField& c) { return c.is_constant() ? c : c.to_numeric(); });
}

VectorField to_numeric(const VectorField& v) {
  VectorField r;
  for (int i = 0; i < kDim; ++i) r[i] = v[i].is_constant() ? v[i] : v[i].to_numeric();
  return r;
}

FormField d(const FormField& f, const FdSteps& steps) {
  if (f.grade() >= 6) throw std::invalid_argument("d of a top-degree form");
  FormField out(f.grade() + 1);
  for (int r = 0; r < f.size(); ++r) {
    if (f[r].is_constant()) continue;
    Blade m = f.blade(r);
    for (int i = 0; i < kDim; ++i) {
      if (m >> i & 1) continue;
      CoefField g = f[r].derivative(i, steps);
      if (g.is_zero()) continue;
      Blade n = static_cast<Blade>(m | (1u << i));
      if (wedge_sign(1u << i, m) > 0)
        out.coeff(n) += g;
      else
        out.coeff(n) -= g;
    }
  }
  return out;
}

VectorField lie_bracket(const VectorField& x, const VectorField& y, const FdSteps& steps) {
  Backend bx = backend_of(x), by = backend_of(y);
  VectorField out;
  out.fill(CoefField(0));
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j < kDim; ++j) {
      if (!x[j].is_zero() && !y[i].is_constant()) out[i] += x[j] * y[i].derivative(j, steps);
      if (!y[j].is_zero() && !x[i].is_constant()) out[i] -= y[j] * x[i].derivative(j, steps);
    }
  }
  if (bx != by) {
    // the mixing rule in the arithmetic already rejects real conflicts; this
    // catches brackets whose non-constant parts never met
    bool xc = true, yc = true;
    for (int i = 0; i < kDim; ++i) {
      xc = xc && x[i].is_constant();
      yc = yc && y[i].is_constant();
    }
    if (!xc && !yc) throw BackendMismatch("lie_bracket: fields use different coefficient backends");
  }
  return out;
}

EndoField K_field(const FormField& phi) { return {K_of(phi).matrix, 1}; }

Patch Patch::unit_box(const std::array<std::string, kDim>& names, int per_axis) {
  Patch p;
  p.names = names;
  for (int i = 0; i < kDim; ++i) {
    p.lo[i] = 0;
    p.hi[i] = 1;
    p.grid[i] = per_axis;
  }
  return p;
}

void Patch::validate() const {
  std::set<std::string> seen;
  for (int i = 0; i < kDim; ++i) {
    if (names[i].empty()) throw std::invalid_argument("patch coordinate " + std::to_string(i + 1) + " has no name");
    if (!seen.insert(names[i]).second) throw std::invalid_argument("duplicate coordinate name '" + names[i] + "'");
    if (!(lo[i] < hi[i])) throw std::invalid_argument("empty interval on axis " + names[i]);
    if (grid[i] < 1) throw std::invalid_argument("grid resolution on axis " + names[i] + " must be >= 1");
  }
}

std::vector<ExactPoint> Patch::grid_points_exact() const {
  validate();
  std::array<std::vector<Rational>, kDim> axis;
  for (int i = 0; i < kDim; ++i) {
    Rational step = (hi[i] - lo[i]) / grid[i];
    for (int k = 0; k < grid[i]; ++k) axis[i].push_back(lo[i] + step * Rational(2 * k + 1, 2));
  }
  std::vector<ExactPoint> out;
  std::array<int, kDim> idx{};
  for (;;) {
    ExactPoint p;
    for (int i = 0; i < kDim; ++i) p[i] = axis[i][idx[i]];
    out.push_back(p);
    int a = kDim - 1;
    while (a >= 0 && ++idx[a] == grid[a]) idx[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

std::vector<Point> Patch::grid_points() const {
  std::vector<Point> out;
  for (const auto& p : grid_points_exact()) out.push_back(to_point(p));
  return out;
}

Rational Patch::cell_volume() const {
  Rational v(1);
  for (int i = 0; i < kDim; ++i) v *= (hi[i] - lo[i]) / grid[i];
  return v;
}

FdSteps Patch::fd_steps() const {
  std::array<double, kDim> h;
  for (int i = 0; i < kDim; ++i) h[i] = 1e-5 * to_double(hi[i] - lo[i]);
  return FdSteps(h);
}

Point to_point(const ExactPoint& p) {
  Point r;
  for (int i = 0; i < kDim; ++i) r[i] = to_double(p[i]);
  return r;
}

namespace {

bool all_polynomial(const FormField& a, const FormField& b) {
  return backend_of(a) == Backend::Polynomial && backend_of(b) == Backend::Polynomial;
}

bool constant_form(const FormField& f) {
  for (int r = 0; r < f.size(); ++r)
    if (!f[r].is_constant()) return false;
  return true;
}

template <class S>
double sup_norm(const Form<S>& f) {
  double m = 0;
  for (int r = 0; r < f.size(); ++r) m = std::max(m, std::fabs(scalar_traits<S>::approx(f[r])));
  return m;
}

// Sp orbit at one point, memoized on the exact coefficient values.
class OrbitCache {
 public:
  template <class S>
  OrbitSample classify(const Form<S>& phi, const Form<S>& omega, const Point& where) {
    std::vector<double> key;
    std::string exact_key;
    if constexpr (is_exact_v<S>) {
      exact_key = to_string(phi) + "|" + to_string(omega);
      if (auto it = exact_.find(exact_key); it != exact_.end()) return with_point(it->second, where);
    } else {
      for (int r = 0; r < phi.size(); ++r) key.push_back(phi[r]);
      for (int r = 0; r < omega.size(); ++r) key.push_back(omega[r]);
      if (auto it = numeric_.find(key); it != numeric_.end()) return with_point(it->second, where);
    }
    OrbitSample s;
    try {
      SymplecticFrame<S> frame(omega);
      SpOrbit<S> o = sp_classify(frame, phi);
      s.tag = tag_name(o.tag);
      if (o.mu) s.mu = o.mu->approx;
    } catch (const Indeterminate&) {
      s.tag = "indeterminate";
    }
    if constexpr (is_exact_v<S>)
      exact_.emplace(exact_key, s);
    else
      numeric_.emplace(key, s);
    return with_point(s, where);
  }

 private:
  static OrbitSample with_point(OrbitSample s, const Point& p) {
    s.point = p;
    return s;
  }
  std::map<std::string, OrbitSample> exact_;
  std::map<std::vector<double>, OrbitSample> numeric_;
};

template <class S>
void require_primitive_at(const Form<S>& phi, const Form<S>& omega, const Point& where, double tol) {
  Form<S> w = wedge(omega, phi);
  double scale = tol * std::max(1.0, sup_norm(phi) * sup_norm(omega));
  if (!is_zero_form(w, scale)) throw NotPrimitive("φ is not ω-primitive at " + point_str(where));
}

// Pointwise part shared by both backends: orbits, Q values, and (when asked)
// first-jet residuals of dφ and dF(φ).
template <class S>
struct PointData {
  Form<S> phi, omega;
  S q;
  double d_phi = 0, d_f = 0;
};

template <class S>
PointData<S> point_data(const FormField& phi, const FormField& omega, const std::array<S, kDim>& p,
                        const FdSteps& steps, bool residuals) {
  PointData<S> out;
  if (residuals) {
    Form<Jet<S>> pj = jets_at(phi, p, steps);
    Jet<S> c = liouville_jet(omega, p, steps);
    Form<Jet<S>> fj = F_of(pj).form;
    Jet<S> inv_c = Jet<S>(S(1)) / c;
    for (int r = 0; r < fj.size(); ++r) fj[r] *= inv_c;
    out.d_phi = sup_norm(d_at(pj));
    out.d_f = sup_norm(d_at(fj));
    out.phi = values_of(pj);
  } else {
    out.phi = value_at(phi, p);
  }
  out.omega = value_at(omega, p);
  S c = top_coeff(wedge(out.omega, out.omega, out.omega)) / S(6);
  if (scalar_traits<S>::is_zero(c)) throw std::domain_error("ω is degenerate on the patch");
  out.q = Q_of(out.phi).value / (c * c);
  return out;
}

}  // namespace

IntegrabilityReport integrability_report(const FormField& phi, const FormField& omega, const Patch& patch,
                                         const IntegrabilityOptions& opt) {
  require_three_form(phi);
  if (omega.grade() != 2) throw std::invalid_argument("ω must be a 2-form field");
  patch.validate();
  IntegrabilityReport rep;
  const FdSteps steps = patch.fd_steps();
  const bool exact = all_polynomial(phi, omega);
  rep.backend = exact ? Backend::Polynomial : Backend::Numeric;
  OrbitCache cache;
  double q_min = 0, q_max = 0;
  bool first = true;
  auto record = [&](const OrbitSample& s, double q) {
    if (opt.record_points) rep.pointwise_orbits.push_back(s);
    ++rep.orbit_counts[s.tag];
    q_min = first ? q : std::min(q_min, q);
    q_max = first ? q : std::max(q_max, q);
    first = false;
  };

  if (exact) {
    bool coefficient_level = constant_form(omega);
    if (coefficient_level) {
      FormField w = wedge(omega, phi);
      if (!w.is_zero()) {
        // locate a witness point for the error message
        for (const auto& p : patch.grid_points_exact())
          require_primitive_at(value_at(phi, p), value_at(omega, p), to_point(p), 0.0);
        throw NotPrimitive("φ is not ω-primitive on the patch (ω∧φ ≠ 0 off the sample grid)");
      }
      Rational c = top_coeff(wedge(omega, omega, omega)).polynomial().constant_term() / 6;
      if (c == 0) throw std::domain_error("ω is degenerate on the patch");
      FormField f = F_of(phi).form * CoefField(Rational(1) / c);
      rep.closed = d(phi).is_zero();
      rep.F_integrable = d(f).is_zero();
      Polynomial q = Q_of(phi).value.polynomial() / Polynomial(c * c);
      rep.Q_integrable = q.is_constant();
    }
    double res_phi = 0, res_f = 0;
    for (const auto& p : patch.grid_points_exact()) {
      Point where = to_point(p);
      PointData<Rational> pd = point_data(phi, omega, p, steps, !coefficient_level);
      require_primitive_at(pd.phi, pd.omega, where, 0.0);
      res_phi = std::max(res_phi, pd.d_phi);
      res_f = std::max(res_f, pd.d_f);
      record(cache.classify(pd.phi, pd.omega, where), to_double(pd.q));
    }
    rep.Q_spread = q_max - q_min;
    if (!coefficient_level) {
      rep.closed = res_phi == 0;
      rep.F_integrable = res_f == 0;
      rep.Q_integrable = rep.Q_spread == 0;
      rep.closed_residual = res_phi;
      rep.F_residual = res_f;
    }
  } else {
    for (const auto& p : patch.grid_points()) {
      PointData<double> pd = point_data(phi, omega, p, steps, true);
      require_primitive_at(pd.phi, pd.omega, p, 1e-9);
      rep.closed_residual = std::max(rep.closed_residual, pd.d_phi);
      rep.F_residual = std::max(rep.F_residual, pd.d_f);
      record(cache.classify(pd.phi, pd.omega, p), pd.q);
    }
    rep.Q_spread = q_max - q_min;
    rep.closed = rep.closed_residual <= opt.tolerance;
    rep.F_integrable = rep.F_residual <= opt.tolerance;
    double q_scale = std::max(std::fabs(q_min), std::fabs(q_max));
    rep.Q_integrable = rep.Q_spread < opt.q_constant_rel * (1 + q_scale);
  }

  rep.F_harmonic = rep.closed && rep.F_integrable;
  int stable = 0, total = 0;
  for (const auto& [tag, n] : rep.orbit_counts) {
    total += n;
    if (tag != "indeterminate" && is_stable(parse_sp_tag(tag))) stable += n;
  }
  rep.uniform_stability = stable == 0 || stable == total;
  rep.theorem_consistent = !rep.F_harmonic || (rep.Q_integrable && rep.uniform_stability);
  return rep;
}

FunctionalValue hitchin_functional(const Patch& patch, const FormField& phi, const FormField& omega) {
  require_three_form(phi);
  FunctionalValue out;
  if (all_polynomial(phi, omega)) {
    Rational sum(0);
    for (const auto& p : patch.grid_points_exact()) {
      Form<Rational> w = value_at(omega, p);
      Rational c = top_coeff(wedge(w, w, w)) / 6;
      sum += Q_of(value_at(phi, p)).value / c;
    }
    sum *= patch.cell_volume();
    out.exact = sum;
    out.value = to_double(sum);
  } else {
    double sum = 0;
    for (const auto& p : patch.grid_points()) {
      Form<double> w = value_at(omega, p);
      double c = top_coeff(wedge(w, w, w)) / 6;
      sum += Q_of(value_at(phi, p)).value / c;
    }
    out.value = sum * to_double(patch.cell_volume());
  }
  return out;
}

}  // namespace threeform
