#include "threeform/cli.hpp"
#include "threeform/geometry.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace threeform::cli {

namespace {

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Applies --backend float to a rational input; a float input stays float.
AnyForm with_backend(AnyForm f, const CliConfig& cfg) {
  if (cfg.backend == "float")
    if (auto* r = std::get_if<Form<Rational>>(&f)) return r->map([](const Rational& x) { return to_double(x); });
  return f;
}

template <class S>
Form<S> omega_as(const std::optional<json>& omega) {
  if (!omega) return SymplecticFrame<S>::standard_omega();
  AnyForm w = form_from_json(*omega);
  if (std::visit([](const auto& f) { return f.grade(); }, w) != 2) throw SchemaError("form JSON: ω must have grade 2");
  if constexpr (std::is_same_v<S, double>) {
    if (auto* r = std::get_if<Form<Rational>>(&w)) return r->map([](const Rational& x) { return to_double(x); });
    return std::get<Form<double>>(w);
  } else {
    if (!std::holds_alternative<Form<Rational>>(w))
      throw SchemaError("form JSON: a rational form needs a rational ω (or pass --backend float)");
    return std::get<Form<Rational>>(w);
  }
}

template <class S>
double tol_for(const CliConfig& cfg) {
  return is_exact_v<S> ? kRankTolerance : cfg.tolerance_numeric;
}

template <class S>
json classify_form(const Form<S>& phi, const std::optional<json>& omega, const CliConfig& cfg) {
  if (phi.grade() != 3) throw SchemaError("form JSON: classify needs grade 3");
  SymplecticFrame<S> frame(omega_as<S>(omega));
  double tol = tol_for<S>(cfg);
  if (!lefschetz(frame, phi, tol).is_primitive) {
    // Sp orbits are only defined on primitive forms
    json out;
    out["gl"] = tag_name(gl_classify(phi, tol));
    out["sp"] = nullptr;
    out["primitive"] = false;
    out["Q"] = scalar_json(frame.trivialize(Q_of(phi)));
    auto d = subspace_profile(phi, tol).dims();
    out["dims"] = json::array({d[0], d[1], d[2], d[3]});
    return out;
  }
  return classification_json(frame, phi, tol);
}

template <class S>
json package_json(const HitchinPackage<S>& p) {
  json out;
  out["J"] = matrix_json(p.J);
  out["phi_hat"] = form_to_json(p.phi_hat);
  out["lambda"] = scalar_json(p.lambda.value);
  out["neg_lambda_trivialized"] = scalar_json(p.neg_lambda);
  if constexpr (std::is_same_v<S, double>)
    out["sqrt_neg_lambda"] = p.sqrt_neg_lambda;
  else
    out["sqrt_neg_lambda"] = scalar_string(p.sqrt_neg_lambda);
  out["mu"] = mu_json(p.mu);
  if (p.norm_sq) {
    if constexpr (std::is_same_v<S, double>)
      out["norm_sq"] = *p.norm_sq;
    else
      out["norm_sq"] = scalar_string(*p.norm_sq);
  }
  return out;
}

template <class S>
json invariants_form(const Form<S>& phi, const std::optional<json>& omega, const CliConfig& cfg) {
  if (phi.grade() != 3) throw SchemaError("form JSON: invariants needs grade 3");
  SymplecticFrame<S> frame(omega_as<S>(omega));
  double tol = tol_for<S>(cfg);
  json out;
  DensityEndo<S> k = K_of(phi);
  DensityForm<S> f = F_from_K(phi, k);
  DensityScalar<S> q = Q_from_F(phi, f);
  out["K"] = matrix_json(frame.trivialize(k));
  out["F"] = form_to_json(frame.trivialize(f));
  out["Q"] = scalar_json(frame.trivialize(q));
  auto d = subspace_profile(phi, tol).dims();
  out["dims"] = json::array({d[0], d[1], d[2], d[3]});
  bool primitive = lefschetz(frame, phi, tol).is_primitive;
  out["primitive"] = primitive;
  out["q"] = primitive ? q_to_json(q_of(frame, phi, tol)) : json(nullptr);
  if (scalar_traits<S>::sign(q.value) < 0 && (is_exact_v<S> || std::fabs(to_double(q.value)) > q_zero_tolerance(phi, tol)))
    out["hitchin"] = package_json(hitchin_package(phi, std::optional<SymplecticFrame<S>>(frame)));
  return out;
}

}  // namespace

Report cmd_classify(const json& form, const std::optional<json>& omega, const CliConfig& cfg) {
  Stopwatch sw;
  Report rep;
  rep.command = {"classify"};
  AnyForm phi = with_backend(form_from_json(form), cfg);
  try {
    rep.result = std::visit([&](const auto& f) { return classify_form(f, omega, cfg); }, phi);
    rep.add("classified", true);
  } catch (const Indeterminate& e) {
    rep.add("classified", Status::Indeterminate, {{"reason", e.what()}});
  }
  rep.elapsed_ms = sw.ms();
  return rep;
}

Report cmd_invariants(const json& form, const std::optional<json>& omega, const CliConfig& cfg) {
  Stopwatch sw;
  Report rep;
  rep.command = {"invariants"};
  AnyForm phi = with_backend(form_from_json(form), cfg);
  try {
    rep.result = std::visit([&](const auto& f) { return invariants_form(f, omega, cfg); }, phi);
    rep.add("computed", true);
  } catch (const Indeterminate& e) {
    rep.add("computed", Status::Indeterminate, {{"reason", e.what()}});
  }
  rep.elapsed_ms = sw.ms();
  return rep;
}

// --------------------------------------------------------------------------
// examples

Report example_torus(const TorusParams& p, const CliConfig& cfg) {
  Stopwatch sw;
  Report rep;
  rep.command = {"example", "torus", "--t", format_rational(p.t)};
  if (p.t <= 0) throw std::domain_error("torus: t must be positive");
  DegenerationFamily fam = torus_family(p.t, cfg.grid);
  auto frame = SymplecticFrame<Rational>(fam.omega);

  rep.add("phi_0 is the O0 normal form", fam.phi_0 == normal_form<Rational>(SpTag::O_0_plus),
          {{"phi_0", form_to_json(fam.phi_0)}});
  IntegrabilityReport ir = integrability_report(fam.phi_0_field(), fam.omega_field(), fam.chart.patch);
  bool all_o0 = ir.orbit_counts.size() == 1 && ir.orbit_counts.count("O0+") == 1;
  rep.add("phi_0 in O0+ at every grid point", all_o0, {{"orbit_counts", ir.orbit_counts}});
  rep.add("phi_0 F-harmonic", ir.F_harmonic, {{"closed", ir.closed}, {"F_integrable", ir.F_integrable}});

  Rational q = frame.trivialize(Q_of(fam.phi_t));
  rep.add("Q(phi_t) = -16 t^2", q == Rational(-16) * p.t * p.t, {{"Q", format_rational(q)}});
  SpOrbit<Rational> orbit = sp_classify(frame, fam.phi_t);
  rep.add("phi_t in O-+", orbit.tag == SpTag::O_minus_plus, {{"tag", tag_name(orbit.tag)}});
  json norm = nullptr;
  bool norm_ok = false;
  if (orbit.tag == SpTag::O_minus_plus) {
    QuadSurd n = norm_sq(frame, fam.phi_t);
    norm = scalar_string(n);
    norm_ok = n == QuadSurd(Rational(4) * p.t);
  }
  rep.add("|phi_t|^2 = 4t", norm_ok, {{"norm_sq", norm}});

  ExactPoint centre = fam.chart.patch.grid_points_exact().front();
  Matrix<Rational> gl = leaf_metric_matrix(fam.chart, fam.phi_0_field(), centre);
  rep.add("g_L = 1/2 delta", gl == Matrix<Rational>::identity(3) * Rational(1, 2), {{"g_L", matrix_json(gl)}});

  rep.result = {{"t", format_rational(p.t)},
                {"phi_t", form_to_json(fam.phi_t)},
                {"Q", format_rational(q)},
                {"norm_sq", norm},
                {"orbit", tag_name(orbit.tag)},
                {"mu", orbit.mu ? mu_json(orbit.mu) : json(nullptr)},
                {"phi_0_orbits", ir.orbit_counts},
                {"g_L", matrix_json(gl)}};
  rep.elapsed_ms = sw.ms();
  return rep;
}

Report example_lambda2(const Lambda2Params& p, const CliConfig& cfg) {
  Stopwatch sw;
  Report rep;
  std::ostringstream gs;
  for (std::size_t i = 0; i < p.g.size(); ++i) gs << (i ? "," : "") << p.g[i];
  rep.command = {"example", "lambda2", "--C", std::to_string(p.C), "--g", gs.str()};
  if (p.g.size() != 9) throw UsageError("lambda2: g needs 9 entries");
  Matrix<double> g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = p.g[3 * i + j];
  Lambda2Example ex = lambda2_build(g, p.C, p.t_lo, cfg.grid);
  Lambda2Checks lc = lambda2_checks(ex);
  const double tol = cfg.tolerance_exactness_proxy;
  rep.add("f^2 (f + 2 r f') = 1", lc.f_equation <= 1e-10, {{"max_residual", lc.f_equation}});
  rep.add("F(phi_f) = -4 sqrt(det g) dx^123", lc.F_residual <= tol, {{"max_residual", lc.F_residual}});
  rep.add("alpha ^ omega = (sqrt(det g)/2) dx^123 ^ dr", lc.basic_residual <= tol,
          {{"max_residual", lc.basic_residual}});
  rep.add("d alpha primitive", lc.d_alpha_primitive);

  LeafGeometry geo = hessian_data(ex.chart, ex.phi, tol);
  double det_res = 0, s_res = 0, h_res = 0, v_res = 0;
  json points = json::array();
  for (std::size_t k = 0; k < geo.points.size(); ++k) {
    const Point& pt = geo.points[k];
    const LeafHessian<double>& lh = geo.samples[k];
    double det_expect = 8 * ex.det_g;
    det_res = std::max(det_res, std::fabs(lh.det_h - det_expect) / det_expect);
    double se = ex.S_expected(pt);
    // relative where S ≠ 0; C = 0 has S ≡ 0 and falls back to absolute
    s_res = std::max(s_res, std::fabs(lh.scalar - se) / std::max(std::fabs(se), 1.0));
    Matrix<double> he = ex.h_expected(pt);
    h_res = std::max(h_res, max_abs(lh.h - he) / std::max(1.0, max_abs(he)));
    for (int j = 0; j < 3; ++j) {
      Vec6<double> ve = ex.V_expected(j, pt), vg = value_at(geo.V[j], pt);
      double scale = 1.0;
      for (int a = 0; a < 6; ++a) scale = std::max(scale, std::fabs(ve[a]));
      for (int a = 0; a < 6; ++a) v_res = std::max(v_res, std::fabs(ve[a] - vg[a]) / scale);
    }
    points.push_back({{"point", pt}, {"h", matrix_json(lh.h)}, {"det_h", lh.det_h}, {"S", lh.scalar},
                      {"S_expected", se}});
  }
  rep.add("det h = 8 det g", det_res <= 1e-9, {{"max_relative_residual", det_res}, {"points", geo.points.size()}});
  rep.add("S = 5C^2/(rho^4 (rho^3 + C)^(4/3))", s_res <= 1e-6, {{"max_relative_residual", s_res}});
  rep.add("h matches the closed form", h_res <= tol, {{"max_relative_residual", h_res}});
  rep.add("V_j matches the closed form", v_res <= tol, {{"max_relative_residual", v_res}});
  rep.add("Ric >= 0", geo.min_ricci_eigen >= -tol, {{"min_eigenvalue", geo.min_ricci_eigen}});
  rep.add("trace Ric = |Dg|^2/4", geo.scalar_mismatch <= tol, {{"max_residual", geo.scalar_mismatch}});
  rep.result = {{"C", p.C}, {"g", matrix_json(g)}, {"det_g", ex.det_g}, {"points", points}};
  rep.elapsed_ms = sw.ms();
  return rep;
}

Report example_k3patch(const K3Params& p, const CliConfig& cfg) {
  Stopwatch sw;
  Report rep;
  rep.command = {"example", "k3patch", "--f", p.f};
  K3PatchExample ex = k3_patch(CoefField::parse(p.f, kK3Names), cfg.grid);
  const double tol = 1e-9;
  std::vector<Vec6<double>> expected_kernel{unit_vec<double>(0), unit_vec<double>(1), unit_vec<double>(4)};
  double f_res = 0, g_res = 0;
  bool kernel_ok = true;
  std::map<std::string, int> orbits;
  json points = json::array();
  SymplecticFrame<double> frame(value_at(ex.omega, Point{}));
  for (const Point& pt : ex.chart.patch.grid_points()) {
    Form<double> phi = value_at(ex.phi, pt);
    Matrix<double> k = frame.trivialize(K_of(phi));
    kernel_ok = kernel_ok && same_span(as_rows(matrix_kernel(k, 1e-9)), as_rows(expected_kernel), 6, 1e-9);
    Form<double> f = frame.trivialize(F_of(phi));
    f_res = std::max(f_res, form_max_abs(f - value_at(ex.F_expected(), pt)));
    std::string tag;
    try {
      tag = tag_name(sp_classify(frame, phi, cfg.tolerance_numeric).tag);
    } catch (const Indeterminate&) {
      tag = "indeterminate";
    }
    ++orbits[tag];
    Matrix<double> g = leaf_metric_matrix(ex.chart, ex.phi, pt);
    Matrix<double> ge = ex.g_expected(pt);
    g_res = std::max(g_res, max_abs(g - ge));
    points.push_back({{"point", pt}, {"orbit", tag}, {"g_L", matrix_json(g)}});
  }
  rep.add("ker K = span{d/dx1, d/dy1, d/dx}", kernel_ok);
  rep.add("F(phi) = 4f dx2 ^ dy2 ^ dy", f_res <= tol, {{"max_residual", f_res}});
  rep.add("O0+ at every grid point", orbits.size() == 1 && orbits.count("O0+") == 1, {{"orbit_counts", orbits}});
  rep.add("g_L = (1/2f)(dx1^2 + dy1^2) + dx^2/2", g_res <= tol, {{"max_residual", g_res}});
  rep.result = {{"f", p.f}, {"points", points}};
  rep.elapsed_ms = sw.ms();
  return rep;
}

std::vector<double> parse_metric(const std::string& text) {
  if (text == "identity" || text == "I") return {1, 0, 0, 0, 1, 0, 0, 0, 1};
  std::string body = text;
  bool diag = false;
  if (body.rfind("diag:", 0) == 0) {
    diag = true;
    body = body.substr(5);
  }
  std::vector<double> v;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad metric entry: " + item);
    }
  }
  if (diag) {
    if (v.size() != 3) throw UsageError("diag: needs three entries");
    return {v[0], 0, 0, 0, v[1], 0, 0, 0, v[2]};
  }
  if (v.size() != 9) throw UsageError("metric needs identity, diag:a,b,c, or nine entries");
  return v;
}

}  // namespace threeform::cli
