#include "threeform/cli.hpp"
#include "threeform/geometry.hpp"
#include "threeform/random.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace threeform::cli {

namespace {

// Pass/fail counter for one check over many samples.
struct Tally {
  long count = 0;
  long failures = 0;
  double worst = 0;
  json first = nullptr;

  void check(bool ok, const std::function<json()>& detail) {
    ++count;
    if (ok) return;
    ++failures;
    if (first.is_null()) first = detail();
  }
  void residual(double r) { worst = std::max(worst, r); }
  bool ok() const { return failures == 0 && count > 0; }
  json data(bool with_residual = false) const {
    json d = {{"samples", count}, {"failures", failures}};
    if (with_residual) d["max_residual"] = worst;
    if (!first.is_null()) d["first_failure"] = first;
    return d;
  }
};

template <class S>
double magnitude(const Matrix<S>& m) {
  return max_abs(m);
}
template <class S>
double magnitude(const Form<S>& f) {
  return form_max_abs(f);
}

// Exact equality, or agreement relative to the operands' size for doubles.
template <class T>
bool agree(const T& a, const T& b, double tol, double* res = nullptr) {
  double r = magnitude(a - b);
  if (res) *res = r;
  if constexpr (std::is_same_v<T, Matrix<Rational>> || std::is_same_v<T, Form<Rational>>)
    return a == b;
  else
    return r <= tol * std::max({1.0, magnitude(a), magnitude(b)});
}

template <class S>
Form<S> convert(const Form<Rational>& f) {
  if constexpr (std::is_same_v<S, Rational>)
    return f;
  else
    return f.map([](const Rational& x) { return to_double(x); });
}

template <class S>
Vec6<S> convert(const Vec6<Rational>& v) {
  Vec6<S> out;
  for (int i = 0; i < 6; ++i) {
    if constexpr (std::is_same_v<S, Rational>)
      out[i] = v[i];
    else
      out[i] = to_double(v[i]);
  }
  return out;
}

json vec_json(const Vec6<Rational>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(format_rational(x));
  return out;
}

// --------------------------------------------------------------------------

template <class S>
void prop2_6(Report& rep, const CliConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const long n = cfg.samples_or(1000);
  Tally kk, kf, ff;
  for (long i = 0; i < n; ++i) {
    Form<Rational> src = random_form(rng, 3);
    Form<S> phi = convert<S>(src);
    auto detail = [&] { return json{{"sample", i}, {"phi", form_to_json(src)}}; };
    DensityEndo<S> k = K_of(phi);
    DensityForm<S> f = F_from_K(phi, k);
    S q = Q_from_F(phi, f).value;
    double r;
    kk.check(agree(k.matrix * k.matrix, Matrix<S>::identity(6) * (q / S(4)), cfg.tolerance_numeric, &r), detail);
    kk.residual(r);
    kf.check(agree(K_of(f.form).matrix, k.matrix * (-q), cfg.tolerance_numeric, &r), detail);
    kf.residual(r);
    ff.check(agree(F_of(f.form).form, phi * (-(q * q)), cfg.tolerance_numeric, &r), detail);
    ff.residual(r);
  }
  rep.add("K(phi)^2 = (Q/4) id", kk.ok(), kk.data(true));
  rep.add("K(F(phi)) = -Q K(phi)", kf.ok(), kf.data(true));
  rep.add("F(F(phi)) = -Q^2 phi", ff.ok(), ff.data(true));
}

template <class S>
void lemma3_2(Report& rep, const CliConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const long n = cfg.samples_or(1000);
  Tally o1a, o1b, o21, o22, eqf;
  const double tol = cfg.tolerance_numeric;
  for (long i = 0; i < n; ++i) {
    Form<Rational> src = random_form(rng, 3);
    Vec6<Rational> xs = random_vector(rng), ys = random_vector(rng);
    auto detail = [&] {
      return json{{"sample", i}, {"phi", form_to_json(src)}, {"X", vec_json(xs)}, {"Y", vec_json(ys)}};
    };
    Form<S> phi = convert<S>(src);
    Vec6<S> x = convert<S>(xs), y = convert<S>(ys);
    DensityEndo<S> k = K_of(phi);
    Form<S> f = F_from_K(phi, k).form;
    Form<S> ixphi = interior(x, phi), iyphi = interior(y, phi);
    Form<S> ixf = interior(x, f), iyf = interior(y, f);
    Form<S> lhs = wedge(ixphi, f);
    double r;
    o1a.check(agree(lhs, -wedge(phi, ixf), tol, &r), detail);
    o1a.residual(r);
    o1b.check(agree(lhs, interior(x, wedge(phi, f)) * S(Rational(1, 2)), tol, &r), detail);
    o1b.residual(r);
    o21.check(agree(wedge(ixphi, iyf) + wedge(iyphi, ixf), Form<S>(4), tol, &r), detail);
    o21.residual(r);
    o22.check(agree(wedge(interior(y, ixphi), f), wedge(phi, interior(y, ixf)), tol, &r), detail);
    o22.residual(r);
    eqf.check(agree(ixf, interior(threeform::apply(k.matrix, x), phi) * S(-2), tol, &r), detail);
    eqf.residual(r);
  }
  rep.add("i_X phi ^ F = -phi ^ i_X F", o1a.ok(), o1a.data(true));
  rep.add("i_X phi ^ F = 1/2 i_X(phi ^ F)", o1b.ok(), o1b.data(true));
  rep.add("i_X phi ^ i_Y F + i_Y phi ^ i_X F = 0", o21.ok(), o21.data(true));
  rep.add("i_Y i_X phi ^ F = phi ^ i_Y i_X F", o22.ok(), o22.data(true));
  rep.add("i_X F = -2 i_{KX} phi", eqf.ok(), eqf.data(true));
}

template <class S>
void prop2_11(Report& rep, const CliConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const long n = cfg.samples_or(1000);
  Tally prim, agree_wedge, agree_pair, sym;
  const double tol = cfg.tolerance_numeric;
  const auto std_omega = SymplecticFrame<Rational>::standard_omega();
  for (long i = 0; i < n; ++i) {
    // alternate the standard ω with a random linear image of it
    Form<Rational> w = i % 2 == 0 ? std_omega : pullback(random_gl(rng), std_omega);
    SymplecticFrame<Rational> exact_frame(w);
    Form<Rational> src = random_primitive(rng, exact_frame);
    auto detail = [&] { return json{{"sample", i}, {"omega", form_to_json(w)}, {"phi", form_to_json(src)}}; };
    SymplecticFrame<S> frame(convert<S>(w));
    Form<S> phi = convert<S>(src);
    prim.check(lefschetz(frame, phi, tol).is_primitive, detail);
    QFormulas<S> qf = q_formulas(frame, phi);
    double r;
    agree_wedge.check(agree(qf.via_K, qf.via_wedge, tol, &r), detail);
    agree_wedge.residual(r);
    agree_pair.check(agree(qf.via_K, qf.via_pairing, tol, &r), detail);
    agree_pair.residual(r);
    sym.check(agree(qf.via_K, qf.via_K.transpose(), tol, &r), detail);
    sym.residual(r);
  }
  rep.add("projected forms are primitive", prim.ok(), prim.data());
  rep.add("q: omega(v1, K v2) = wedge formula", agree_wedge.ok(), agree_wedge.data(true));
  rep.add("q: omega(v1, K v2) = -omega(i_v1 phi, i_v2 phi)", agree_pair.ok(), agree_pair.data(true));
  rep.add("q symmetric", sym.ok(), sym.data(true));
}

json sig_json(const Signature& s) { return signature_json(s); }

void prop2_12(Report& rep, const CliConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const long n = cfg.samples_or(100);
  auto frame = SymplecticFrame<Rational>::standard();
  std::set<std::array<int, 3>> triples;
  json table = json::object();
  Tally symplectic;
  for (SpTag tag : all_sp_tags()) {
    if (tag == SpTag::O_6) continue;
    std::optional<Rational> mu;
    if (is_stable(tag)) mu = Rational(1);
    Form<Rational> base = normal_form<Rational>(tag, mu);
    Signature expect = catalog_signature(tag);
    Signature got = q_of(frame, base).signature;
    triples.insert({got.zeros, got.positives, got.negatives});
    table[tag_name(tag)] = sig_json(got);
    rep.add("catalog " + tag_name(tag) + " signature", got == expect,
            {{"expected", sig_json(expect)}, {"got", sig_json(got)}});
    SpOrbit<Rational> base_orbit = sp_classify(frame, base);
    Tally conj;
    for (long i = 0; i < n; ++i) {
      Matrix<Rational> m = random_symplectic(rng, frame);
      symplectic.check(pullback(m, frame.omega()) == frame.omega(), [&] { return json{{"tag", tag_name(tag)}}; });
      Form<Rational> psi = pullback(m, base);
      Signature s = q_of(frame, psi).signature;
      SpOrbit<Rational> orbit = sp_classify(frame, psi);
      bool same_mu = base_orbit.mu.has_value() == orbit.mu.has_value() &&
                     (!orbit.mu || orbit.mu->fourth_power == base_orbit.mu->fourth_power);
      conj.check(s == expect && orbit.tag == tag && same_mu, [&] {
        return json{{"sample", i}, {"phi", form_to_json(psi)}, {"signature", sig_json(s)}, {"tag", tag_name(orbit.tag)}};
      });
    }
    rep.add("conjugates of " + tag_name(tag) + " keep signature, tag and mu", conj.ok(), conj.data());
  }
  rep.add("random conjugators are symplectic", symplectic.ok(), symplectic.data());
  rep.add("eight distinct signature triples", triples.size() == 8, {{"distinct", triples.size()}});
  rep.result["signatures"] = table;
}

void prop2_10(Report& rep, const CliConfig&) {
  auto frame = SymplecticFrame<Rational>::standard();
  json rows = json::array();
  const std::vector<Rational> mus{Rational(1, 2), Rational(1), Rational(2), Rational(3)};
  struct Row {
    SpTag tag;
    Rational factor;
  };
  const Row stable[] = {{SpTag::O_minus_plus, 4}, {SpTag::O_minus_minus, 4}, {SpTag::O_plus, 2}};
  for (const Row& row : stable) {
    Tally t;
    for (const Rational& mu : mus) {
      Form<Rational> phi = normal_form<Rational>(row.tag, mu);
      FOrbitPair<Rational> pair = verify_F_orbit(frame, phi);
      Rational expect = row.factor * mu * mu * mu;
      bool ok = pair.phi.tag == row.tag && pair.phi.mu && pair.phi.mu->exact && *pair.phi.mu->exact == mu &&
                pair.f.tag == row.tag && pair.f.mu && pair.f.mu->exact && *pair.f.mu->exact == expect;
      json got = pair.f.mu && pair.f.mu->exact ? json(format_rational(*pair.f.mu->exact)) : json(nullptr);
      rows.push_back({{"tag", tag_name(row.tag)},
                      {"mu", format_rational(mu)},
                      {"F_tag", tag_name(pair.f.tag)},
                      {"F_mu", got},
                      {"expected_F_mu", format_rational(expect)}});
      t.check(ok, [&] { return rows.back(); });
    }
    rep.add("F maps " + tag_name(row.tag) + "(mu) to " + tag_name(row.tag) + "(" + format_rational(row.factor) +
                " mu^3)",
            t.ok(), t.data());
  }
  for (SpTag tag : {SpTag::O_0_plus, SpTag::O_0_minus}) {
    FOrbitPair<Rational> pair = verify_F_orbit(frame, normal_form<Rational>(tag));
    rep.add("F maps " + tag_name(tag) + " to O3", pair.phi.tag == tag && pair.f.tag == SpTag::O_3_prim,
            {{"F_tag", tag_name(pair.f.tag)}});
  }
  for (SpTag tag : {SpTag::O_1_plus, SpTag::O_1_minus, SpTag::O_3_prim, SpTag::O_6}) {
    Form<Rational> f = F_of(normal_form<Rational>(tag)).form;
    rep.add("F vanishes on " + tag_name(tag), f.is_zero());
  }
  rep.result["table"] = rows;
}

Matrix<Rational> random_invertible3(SplitMix64& rng) {
  for (;;) {
    Matrix<Rational> m(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = Rational(rng.range(-2, 2));
    if (determinant(m) != 0) return m;
  }
}

Matrix<Rational> random3(SplitMix64& rng) {
  Matrix<Rational> m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = random_rational(rng, 3, 2);
  return m;
}

Rational trace(const Matrix<Rational>& m) {
  Rational t(0);
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

void prop2_9(Report& rep, const CliConfig& cfg) {
  const Form<Rational> phi = normal_form<Rational>(GlTag::O_0);
  DensityEndo<Rational> k = K_of(phi);
  DensityForm<Rational> f = F_of(phi);
  bool kx = true, ky = true;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 6; ++i) {
      kx = kx && k.matrix(i, 2 * j) == 0;
      ky = ky && k.matrix(i, 2 * j + 1) == (i == 2 * j ? Rational(-2) : Rational(0));
    }
  rep.add("K(d/dx^j) = 0", kx);
  rep.add("K(d/dy^j) = -2 d/dx^j (x) vol", ky);
  rep.add("F = 4 dy^1 ^ dy^2 ^ dy^3 (x) vol", f.form == Form<Rational>::basis({2, 4, 6}, Rational(4)),
          {{"F", form_to_json(f.form)}});
  std::vector<Vec6<Rational>> dx;
  for (int j = 0; j < 3; ++j) dx.push_back(unit_vec<Rational>(2 * j));
  auto span_dx = as_rows(dx);
  bool spans = same_span(as_rows(matrix_kernel(k.matrix)), span_dx, 6) &&
               same_span(as_rows(column_space(k.matrix)), span_dx, 6) &&
               same_span(as_rows(kernel(f.form)), span_dx, 6);
  rep.add("ker K = Im K = ker F = span{d/dx}", spans);

  SplitMix64 rng(cfg.seed);
  const long n = cfg.samples_or(200);
  Tally phi_stab, phi_perturbed, f_stab, f_perturbed, nested;
  for (long i = 0; i < n; ++i) {
    Matrix<Rational> c = random_invertible3(rng);
    Rational dc = determinant(c);
    Matrix<Rational> a = c * (Rational(1) / dc);
    Matrix<Rational> b0 = random3(rng);
    Matrix<Rational> b = b0 - c * (trace(b0 * inverse(c)) / Rational(3));
    auto detail = [&] { return json{{"sample", i}}; };
    LinearMap<Rational> m = darboux_block_map(a, b, c);
    phi_stab.check(is_stabilizer(m, phi), detail);
    nested.check(is_stabilizer(m, f.form, -f.density_power), detail);
    // Tr(B'C⁻¹) = 3s ≠ 0
    Rational s = random_nonzero_rational(rng, 3, 2);
    phi_perturbed.check(!is_stabilizer(darboux_block_map(a, b + c * s, c), phi), detail);

    // F-stabilizer: det A · det²C = 1 with B arbitrary
    Matrix<Rational> a2 = random_invertible3(rng);
    Rational scale = Rational(1) / (determinant(a2) * dc * dc);
    for (int j = 0; j < 3; ++j) a2(0, j) *= scale;
    f_stab.check(is_stabilizer(darboux_block_map(a2, random3(rng), c), f.form, -f.density_power), detail);
    Matrix<Rational> a3 = a2;
    for (int j = 0; j < 3; ++j) a3(0, j) *= Rational(2);
    f_perturbed.check(!is_stabilizer(darboux_block_map(a3, random3(rng), c), f.form, -f.density_power), detail);
  }
  rep.add("A = C/det C, Tr(BC^-1) = 0 stabilizes phi", phi_stab.ok(), phi_stab.data());
  rep.add("Tr(BC^-1) != 0 does not stabilize phi", phi_perturbed.ok(), phi_perturbed.data());
  rep.add("stabilizer of phi fixes F(phi)", nested.ok(), nested.data());
  rep.add("det A det^2 C = 1 stabilizes F(phi)", f_stab.ok(), f_stab.data());
  rep.add("det A det^2 C = 2 does not stabilize F(phi)", f_perturbed.ok(), f_perturbed.data());
}

Rational max_abs_diff(const Vec6<Rational>& u, const Vec6<Rational>& v) {
  Rational m(0);
  for (int i = 0; i < 6; ++i) {
    Rational d = abs(u[i] - v[i]);
    if (d > m) m = d;
  }
  return m;
}

void thm3_3(Report& rep, const CliConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const long fields = cfg.samples_or(50);
  const int points = 20;
  const Form<Rational> w = SymplecticFrame<Rational>::standard_omega();
  const FormField omega = constant_field(w);
  Tally stated, corrected;
  long nonzero = 0, b_nonzero = 0;
  Rational worst_stated(0), worst_corrected(0);
  for (long i = 0; i < fields; ++i) {
    SplitMix64 local = rng.split();
    FormField phi = random_primitive_field(local, w, 2, 2, 0.3);
    VectorField x = random_vector_field(local, 2, 2), y = random_vector_field(local, 2, 2);
    EndoField k = K_field(phi);
    for (int j = 0; j < points; ++j) {
      ExactPoint p = random_point(local);
      Vec6<Rational> lhs = nijenhuis(k, x, y, p, std::optional<FormField>(omega));
      NijenhuisTerms<Rational> t = nijenhuis_terms(phi, omega, x, y, p);
      Vec6<Rational> rs = t.stated(), rc = t.corrected();
      worst_stated = std::max(worst_stated, max_abs_diff(lhs, rs));
      worst_corrected = std::max(worst_corrected, max_abs_diff(lhs, rc));
      nonzero += lhs != zero_vec<Rational>();
      b_nonzero += t.b != zero_vec<Rational>();
      auto detail = [&](const Vec6<Rational>& rhs) {
        return json{{"field", i}, {"point", vec_json(p)}, {"lhs", vec_json(lhs)}, {"rhs", vec_json(rhs)}};
      };
      stated.check(lhs == rs, [&] { return detail(rs); });
      corrected.check(lhs == rc, [&] { return detail(rc); });
    }
  }
  json ds = stated.data(), dc = corrected.data();
  ds["max_residual"] = format_rational(worst_stated);
  dc["max_residual"] = format_rational(worst_corrected);
  rep.add("N_K = i_Y i_X dphi ^ F - dphi ^ i_Y i_X F + 2 phi ^ (i_Y i_KX - i_X i_KY) dphi + phi ^ i_Y i_X dF",
          stated.ok(), ds);
  rep.add("N_K = i_Y i_X dphi ^ F + 2 phi ^ (i_Y i_KX - i_X i_KY) dphi + phi ^ i_Y i_X dF", corrected.ok(), dc);
  // a suite where N_K or the disputed term vanished everywhere would prove nothing
  rep.add("N_K is nonzero at sampled points", nonzero > 0, {{"nonzero_points", nonzero}});
  rep.add("dphi ^ i_Y i_X F is nonzero at sampled points", b_nonzero > 0, {{"nonzero_points", b_nonzero}});
}

// --------------------------------------------------------------------------
// leaf geometry suites

struct Lambda2Case {
  std::string label;
  Matrix<double> g;
  double C;
};

std::vector<Lambda2Case> lambda2_cases() {
  Matrix<double> id = Matrix<double>::identity(3);
  Matrix<double> d = id;
  d(1, 1) = 2;
  d(2, 2) = 3;
  return {{"C=1, g=I", id, 1.0}, {"C=1, g=diag(1,2,3)", d, 1.0}};
}

VectorField random_leaf_field(SplitMix64& rng, const LeafChart& chart) {
  VectorField v;
  v.fill(CoefField(0));
  for (int i : chart.leaf) v[i] = CoefField(random_polynomial(rng, 1, 2) + Polynomial(Rational(1)));
  return v;
}

void thm5_2(Report& rep, const CliConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const double tol = cfg.tolerance_exactness_proxy;
  for (const auto& c : lambda2_cases()) {
    Lambda2Example ex = lambda2_build(c.g, c.C, 1.0, cfg.grid);
    const LeafChart& chart = ex.chart;
    VectorField x = random_leaf_field(rng, chart), y = random_leaf_field(rng, chart);
    CoefField f(random_polynomial(rng, 1, 3));
    Tally lin, leib, tors, flat;
    for (const Point& p : chart.patch.grid_points()) {
      ConnectionLaws laws = connection_laws(chart, ex.phi, x, y, f, p);
      lin.residual(laws.function_linear);
      leib.residual(laws.leibniz);
      tors.residual(laws.torsion);
      double curv = d_frame_curvature(chart, ex.phi, p);
      flat.residual(curv);
      auto at = [&] { return json{{"point", p}}; };
      lin.check(laws.function_linear <= tol, at);
      leib.check(laws.leibniz <= tol, at);
      tors.check(laws.torsion <= tol, at);
      flat.check(curv <= tol, at);
    }
    LeafGeometry geo = hessian_data(chart, ex.phi, tol);
    rep.add(c.label + ": D_{fX}Y = f D_X Y", lin.ok(), lin.data(true));
    rep.add(c.label + ": D_X(fY) = f D_X Y + X(f) Y", leib.ok(), leib.data(true));
    rep.add(c.label + ": torsion free", tors.ok(), tors.data(true));
    rep.add(c.label + ": D_{V_i} V_j = 0", flat.ok(), flat.data(true));
    rep.add(c.label + ": Dg totally symmetric", geo.h3_asymmetry <= tol, {{"max_residual", geo.h3_asymmetry}});
    rep.add(c.label + ": det h constant along leaves", geo.det_h_drift <= tol, {{"max_residual", geo.det_h_drift}});
  }
}

void bott_duality(Report& rep, const CliConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const double tol = cfg.tolerance_exactness_proxy;
  const long triples = cfg.samples_or(3);
  for (const auto& c : lambda2_cases()) {
    Lambda2Example ex = lambda2_build(c.g, c.C, 1.0, cfg.grid);
    Tally t;
    for (long s = 0; s < triples; ++s) {
      VectorField x = random_leaf_field(rng, ex.chart), y = random_leaf_field(rng, ex.chart),
                  z = random_leaf_field(rng, ex.chart);
      for (const Point& p : ex.chart.patch.grid_points()) {
        double r = std::fabs(duality_residual(ex.chart, ex.phi, x, y, z, p));
        t.residual(r);
        t.check(r <= tol, [&] { return json{{"triple", s}, {"point", p}}; });
      }
    }
    rep.add("Lambda2 " + c.label + ": X g(Y,Z) = g(D_X Y, Z) + g(Y, Bott_X Z)", t.ok(), t.data(true));
  }
  // exact cases: polynomial φ, rational grid points
  auto exact_case = [&](const std::string& label, const LeafChart& chart, const FormField& phi) {
    Tally t;
    for (long s = 0; s < triples; ++s) {
      VectorField x = random_leaf_field(rng, chart), y = random_leaf_field(rng, chart),
                  z = random_leaf_field(rng, chart);
      for (const ExactPoint& p : chart.patch.grid_points_exact()) {
        Rational r = duality_residual(chart, phi, x, y, z, p);
        t.check(r == 0, [&] { return json{{"triple", s}, {"point", vec_json(p)}, {"residual", format_rational(r)}}; });
      }
    }
    json d = t.data();
    d["max_residual"] = "0";
    if (!t.ok()) d.erase("max_residual");
    rep.add(label + ": duality identity exact", t.ok(), d);
  };
  DegenerationFamily fam = torus_family(Rational(1, 4), cfg.grid);
  exact_case("torus", fam.chart, fam.phi_0_field());
  K3PatchExample k3 = k3_patch(CoefField::parse("1 + (x2^2 + y2^2)/4", kK3Names), cfg.grid);
  exact_case("k3patch", k3.chart, k3.phi);
}

void thm5_8(Report& rep, const CliConfig& cfg) {
  DegenerationFamily fam = torus_family(Rational(1, 4), cfg.grid);
  FibrationData fd = fibration_analysis(fam, fam.phi_0_field());
  const double tol = 1e-10;
  const double gb = 1.0 / std::sqrt(2.0), vol = std::pow(2.0, -1.5);
  Matrix<double> id = Matrix<double>::identity(3);
  double lam_res = max_abs(fd.lambda_period + id);
  double gb_res = max_abs(fd.g_B - id * gb);
  double vol_res = 0;
  for (double v : fd.fiber_volume) vol_res = std::max(vol_res, std::fabs(v - vol));
  rep.add("lambda = -delta", lam_res <= tol, {{"max_residual", lam_res}});
  rep.add("g_B = 2^(-1/2) delta", gb_res <= tol, {{"max_residual", gb_res}});
  rep.add("fiber volume = 2^(-3/2)", vol_res <= tol, {{"max_residual", vol_res}});
  rep.add("q on the base = vol^-1 g_B", fd.isometry_residual <= tol, {{"max_residual", fd.isometry_residual}});
  rep.add("period matrix lambda invertible", fd.lambda_invertible);
  rep.add("g_B positive definite", fd.g_B_positive);
  rep.add("fiber volume constant (Monge-Ampere)", fd.monge_ampere);
  rep.add("l_y forms closed", fd.xi_closed);
  rep.add("l_y forms harmonic on fibers", fd.harmonic);
  rep.add("fiber quadrature converged", fd.richardson_delta <= tol, {{"delta", fd.richardson_delta}});
  rep.result = {{"lambda", matrix_json(fd.lambda_period)},
                {"mu", matrix_json(fd.mu_period)},
                {"g_B", matrix_json(fd.g_B)},
                {"q_base", matrix_json(fd.q_base)},
                {"fiber_volume", fd.fiber_volume}};
}

using SuiteFn = std::function<void(Report&, const CliConfig&)>;

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> r = {
      {"prop2_6",
       [](Report& rep, const CliConfig& c) {
         c.backend == "float" ? prop2_6<double>(rep, c) : prop2_6<Rational>(rep, c);
       }},
      {"lemma3_2",
       [](Report& rep, const CliConfig& c) {
         c.backend == "float" ? lemma3_2<double>(rep, c) : lemma3_2<Rational>(rep, c);
       }},
      {"prop2_11",
       [](Report& rep, const CliConfig& c) {
         c.backend == "float" ? prop2_11<double>(rep, c) : prop2_11<Rational>(rep, c);
       }},
      {"thm3_3", thm3_3},
      {"prop2_10", prop2_10},
      {"prop2_12", prop2_12},
      {"prop2_9", prop2_9},
      {"thm5_2", thm5_2},
      {"bott_duality", bott_duality},
      {"thm5_8", thm5_8},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"prop2_6", "lemma3_2", "thm3_3",      "prop2_10", "prop2_11",
                                                 "prop2_12", "prop2_9", "thm5_2", "bott_duality", "thm5_8"};
  return names;
}

Report run_suite(const std::string& name, const CliConfig& cfg) {
  auto it = registry().find(name);
  if (it == registry().end()) throw UsageError("unknown suite: " + name);
  cfg.validate();
  Report rep;
  rep.command = {"verify", name};
  rep.config = cfg.to_json();
  auto start = std::chrono::steady_clock::now();
  it->second(rep, cfg);
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace threeform::cli
