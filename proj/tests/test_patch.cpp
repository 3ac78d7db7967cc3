#include "threeform/expr.hpp"
#include "threeform/field.hpp"
#include "threeform/geometry.hpp"
#include "threeform/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace threeform;

namespace {

using F = Form<Rational>;

F e(std::initializer_list<int> idx) { return F::basis(idx); }

const std::array<std::string, kDim> kNames{"x1", "x2", "x3", "x4", "x5", "x6"};

CoefField var(int axis) { return CoefField(Polynomial::variable(axis)); }

FormField basis_field(std::initializer_list<int> idx, const CoefField& c) {
  FormField f = constant_field(F::basis(idx));
  for (int r = 0; r < f.size(); ++r)
    if (!f[r].is_zero()) f[r] = f[r] * c;
  return f;
}

Point random_real_point(SplitMix64& rng) { return to_point(random_point(rng)); }

double max_diff(const Form<double>& a, const Form<Rational>& b) {
  double m = 0;
  for (int r = 0; r < a.size(); ++r) m = std::max(m, std::abs(a[r] - to_double(b[r])));
  return m;
}

const Form<Rational> kOmega = SymplecticFrame<Rational>::standard_omega();

}  // namespace

TEST(Polynomial, Calculus) {
  Polynomial x = Polynomial::variable(0), y = Polynomial::variable(1);
  Polynomial p = x * x * y + Polynomial(Rational(3)) * y;
  EXPECT_EQ(p.degree(), 3);
  EXPECT_EQ(p.derivative(0), Polynomial(Rational(2)) * x * y);
  EXPECT_EQ(p.derivative(1), x * x + Polynomial(Rational(3)));
  EXPECT_TRUE(p.derivative(4).is_zero());
  ExactPoint at{Rational(2), Rational(1, 2), 0, 0, 0, 0};
  EXPECT_EQ(p.evaluate(at), Rational(2) + Rational(3, 2));
}

TEST(Polynomial, ProductRule) {
  SplitMix64 rng(61);
  for (int n = 0; n < 200; ++n) {
    Polynomial a = random_polynomial(rng, 3, 4), b = random_polynomial(rng, 3, 4);
    int axis = static_cast<int>(rng.below(kDim));
    ASSERT_EQ((a * b).derivative(axis), a.derivative(axis) * b + a * b.derivative(axis));
  }
}

TEST(Expression, Backends) {
  auto poly = CoefField::parse("1 + (x2^2 + x4^2)/4", kNames);
  EXPECT_TRUE(poly.is_polynomial());
  auto num = CoefField::parse("sqrt(1 + x1^2)", kNames);
  EXPECT_FALSE(num.is_polynomial());
  Point p{0.5, 0, 0, 0, 0, 0};
  EXPECT_NEAR(num.value(p), std::sqrt(1.25), 1e-15);
  EXPECT_THROW(CoefField::parse("1 +", kNames), ParseError);
  EXPECT_THROW(CoefField::parse("z + 1", kNames), ParseError);
  EXPECT_THROW(CoefField::parse("foo(x1)", kNames), ParseError);
}

TEST(CoefField, BackendRules) {
  CoefField poly = var(0) * var(1);
  CoefField num = CoefField::numeric([](const Point& p) { return std::exp(p[0]); }, "exp(x1)");
  EXPECT_THROW(poly * num, BackendMismatch);
  EXPECT_THROW(poly + num, BackendMismatch);
  EXPECT_NO_THROW(CoefField(Rational(3)) * num);
  EXPECT_EQ((poly * var(2)).backend(), Backend::Polynomial);
  CoefField both = poly.to_numeric() * num;
  Point p{0.5, 2, 0, 0, 0, 0};
  EXPECT_NEAR(both.value(p), 1.0 * std::exp(0.5), 1e-12);
}

TEST(CoefField, FiniteDifferenceJet) {
  CoefField num = CoefField::numeric([](const Point& p) { return std::sin(p[0]) * p[1]; }, "sin(x1)*x2");
  Point p{0.3, 0.7, 0, 0, 0, 0};
  auto j = num.jet(p);
  EXPECT_NEAR(j.value, std::sin(0.3) * 0.7, 1e-15);
  EXPECT_NEAR(j.grad[0], std::cos(0.3) * 0.7, 1e-9);
  EXPECT_NEAR(j.grad[1], std::sin(0.3), 1e-9);
  EXPECT_NEAR(j.grad[2], 0, 1e-12);
}

TEST(ExteriorDerivative, Examples) {
  // x¹dy¹ in Darboux letters is x1·e2, and d of it is e12
  FormField a = basis_field({2}, var(0));
  EXPECT_EQ(d(a), constant_field(e({1, 2})));
  EXPECT_TRUE(d(constant_field(torus_phi(Rational(0)))).is_zero());
  EXPECT_THROW(d(constant_field(reference_volume<Rational>())), std::invalid_argument);
}

TEST(ExteriorDerivative, SquaresToZero) {
  SplitMix64 rng(62);
  for (int n = 0; n < 100; ++n) {
    int grade = static_cast<int>(rng.range(0, 4));
    FormField f = random_form_field(rng, grade, 3, 3);
    ASSERT_TRUE(d(d(f)).is_zero());
  }
}

TEST(ExteriorDerivative, Leibniz) {
  SplitMix64 rng(63);
  for (int n = 0; n < 60; ++n) {
    int p = static_cast<int>(rng.range(0, 2));
    FormField a = random_form_field(rng, p, 2, 2), b = random_form_field(rng, 2, 2, 2);
    FormField rhs = wedge(d(a), b);
    FormField second = wedge(a, d(b));
    rhs += p % 2 ? FormField(-second) : second;
    ASSERT_EQ(d(wedge(a, b)), rhs);
  }
}

TEST(ExteriorDerivative, FiniteDifferencesMatchExact) {
  SplitMix64 rng(64);
  double worst = 0;
  for (int n = 0; n < 100; ++n) {
    FormField f = random_form_field(rng, static_cast<int>(rng.range(0, 4)), 3, 3);
    FormField exact = d(f), numeric = d(to_numeric(f));
    for (int j = 0; j < 3; ++j) {
      ExactPoint p = random_point(rng);
      worst = std::max(worst, max_diff(value_at(numeric, to_point(p)), value_at(exact, p)));
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(LieBracket, Examples) {
  VectorField d1 = coordinate_field(0), d2 = coordinate_field(1);
  EXPECT_TRUE(std::all_of(lie_bracket(d1, d2).begin(), lie_bracket(d1, d2).end(),
                          [](const CoefField& c) { return c.is_zero(); }));
  VectorField x1d2 = coordinate_field(1);
  x1d2[1] = var(0);
  VectorField br = lie_bracket(x1d2, d1);
  VectorField expected = coordinate_field(1);
  expected[1] = CoefField(-1);
  EXPECT_EQ(br, expected);
}

TEST(LieBracket, JacobiAndAntisymmetry) {
  SplitMix64 rng(65);
  for (int n = 0; n < 30; ++n) {
    VectorField x = random_vector_field(rng, 2, 2), y = random_vector_field(rng, 2, 2),
                z = random_vector_field(rng, 2, 2);
    VectorField xy = lie_bracket(x, y), yx = lie_bracket(y, x);
    for (int i = 0; i < kDim; ++i) ASSERT_TRUE((xy[i] + yx[i]).is_zero());
    VectorField a = lie_bracket(x, lie_bracket(y, z)), b = lie_bracket(y, lie_bracket(z, x)),
                c = lie_bracket(z, lie_bracket(x, y));
    for (int i = 0; i < kDim; ++i) ASSERT_TRUE((a[i] + b[i] + c[i]).is_zero());
  }
}

TEST(Nijenhuis, VanishesForConstantAndTorusK) {
  SplitMix64 rng(66);
  FormField omega = constant_field(kOmega);
  for (const F& phi : {torus_phi(Rational(0)), torus_phi(Rational(1, 3)), random_primitive(rng, SymplecticFrame<Rational>::standard())}) {
    EndoField k = K_field(constant_field(phi));
    for (int n = 0; n < 5; ++n) {
      VectorField x = random_vector_field(rng, 2, 2), y = random_vector_field(rng, 2, 2);
      ASSERT_EQ(nijenhuis(k, x, y, random_point(rng), std::optional(omega)), zero_vec<Rational>());
    }
  }
}

TEST(Nijenhuis, TensorialAndAntisymmetric) {
  SplitMix64 rng(67);
  FormField omega = constant_field(kOmega);
  for (int n = 0; n < 20; ++n) {
    EndoField k = K_field(random_primitive_field(rng, kOmega, 2, 2, 0.3));
    VectorField x = random_vector_field(rng, 2, 2), y = random_vector_field(rng, 2, 2);
    CoefField f(random_polynomial(rng, 2, 3));
    VectorField fx = x;
    for (auto& c : fx) c = c * f;
    ExactPoint p = random_point(rng);
    Vec6<Rational> nxy = nijenhuis(k, x, y, p, std::optional(omega));
    Vec6<Rational> nfx = nijenhuis(k, fx, y, p, std::optional(omega));
    Vec6<Rational> nyx = nijenhuis(k, y, x, p, std::optional(omega));
    Rational fp = f.value(p);
    for (int i = 0; i < kDim; ++i) {
      ASSERT_EQ(nfx[i], fp * nxy[i]);
      ASSERT_EQ(nyx[i], -nxy[i]);
    }
  }
}

TEST(Nijenhuis, DensityNeedsOmega) {
  EndoField k = K_field(constant_field(torus_phi(Rational(1))));
  ExactPoint p{};
  EXPECT_THROW(nijenhuis(k, coordinate_field(0), coordinate_field(1), p), std::invalid_argument);
}

// N_K through the values and first jets of φ and F(φ). The exact computation
// shows that the term dφ∧ι_Yι_X F does not belong in the expression; with it
// the identity fails at generic points.
TEST(NijenhuisIdentity, HoldsWithoutTheDphiWedgeFTerm) {
  SplitMix64 rng(68);
  FormField omega = constant_field(kOmega);
  int with_b_nonzero = 0, stated_fails = 0, checked = 0;
  for (int n = 0; n < 10; ++n) {
    FormField phi = random_primitive_field(rng, kOmega, 2, 2, 0.3);
    VectorField x = random_vector_field(rng, 2, 2), y = random_vector_field(rng, 2, 2);
    EndoField k = K_field(phi);
    for (int j = 0; j < 5; ++j, ++checked) {
      ExactPoint p = random_point(rng);
      Vec6<Rational> lhs = nijenhuis(k, x, y, p, std::optional(omega));
      auto t = nijenhuis_terms(phi, omega, x, y, p);
      ASSERT_EQ(lhs, t.corrected());
      with_b_nonzero += t.b != zero_vec<Rational>();
      stated_fails += lhs != t.stated();
    }
  }
  EXPECT_GT(with_b_nonzero, checked / 2);
  EXPECT_EQ(stated_fails, with_b_nonzero);
}

TEST(Nijenhuis, ClosedAndFClosedImpliesIntegrable) {
  SplitMix64 rng(69);
  K3PatchExample ex = k3_patch(CoefField::parse("2 + x2*y2 + x2^2", kK3Names));
  EndoField k = K_field(ex.phi);
  for (int n = 0; n < 10; ++n) {
    VectorField x = random_vector_field(rng, 2, 2), y = random_vector_field(rng, 2, 2);
    ASSERT_EQ(nijenhuis(k, x, y, random_point(rng), std::optional(ex.omega)), zero_vec<Rational>());
  }
}

TEST(Patch, GridAndValidation) {
  Patch p = Patch::unit_box(kNames, 3);
  auto pts = p.grid_points_exact();
  EXPECT_EQ(pts.size(), 729u);
  for (auto& x : pts)
    for (auto& c : x) {
      EXPECT_GT(c, 0);
      EXPECT_LT(c, 1);
    }
  EXPECT_EQ(p.cell_volume(), Rational(1, 729));
  Patch bad = p;
  bad.hi[2] = bad.lo[2];
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  Patch nogrid = p;
  nogrid.grid[0] = 0;
  EXPECT_THROW(nogrid.validate(), std::invalid_argument);
}

TEST(Integrability, TorusLimitIsFHarmonicAndO0Plus) {
  Patch patch = Patch::unit_box(kTorusNames, 2);
  auto r = integrability_report(constant_field(torus_phi(Rational(0))), constant_field(kOmega), patch);
  EXPECT_TRUE(r.closed);
  EXPECT_TRUE(r.F_integrable);
  EXPECT_TRUE(r.F_harmonic);
  EXPECT_EQ(r.Q_spread, 0);
  EXPECT_EQ(r.orbit_counts.size(), 1u);
  EXPECT_EQ(r.orbit_counts.at("O0+"), 64);
  EXPECT_TRUE(r.theorem_consistent);
}

TEST(Integrability, NonClosedField) {
  Patch patch = Patch::unit_box(kTorusNames, 2);
  FormField phi = constant_field(torus_phi(Rational(0)));
  for (int r = 0; r < phi.size(); ++r)
    if (!phi[r].is_zero()) phi[r] = phi[r] * (CoefField(1) + var(1));
  auto rep = integrability_report(phi, constant_field(kOmega), patch);
  EXPECT_FALSE(rep.closed);
  EXPECT_FALSE(rep.F_harmonic);
}

TEST(Integrability, NonPrimitiveFieldIsRejected) {
  Patch patch = Patch::unit_box(kTorusNames, 2);
  FormField phi = wedge(constant_field(kOmega), basis_field({2}, var(0)));
  EXPECT_THROW(integrability_report(phi, constant_field(kOmega), patch), NotPrimitive);
}

TEST(Functional, ConstantForms) {
  Patch patch = Patch::unit_box(kNames, 2);
  FormField omega = constant_field(kOmega);
  auto minus = hitchin_functional(patch, constant_field(normal_form<Rational>(SpTag::O_minus_plus, Rational(1))), omega);
  ASSERT_TRUE(minus.exact);
  EXPECT_EQ(*minus.exact, -16);
  EXPECT_EQ(*hitchin_functional(patch, constant_field(normal_form<Rational>(SpTag::O_0_plus)), omega).exact, 0);
  Rational t(3, 2);
  auto scaled =
      hitchin_functional(patch, constant_field(normal_form<Rational>(SpTag::O_minus_plus, Rational(1)) * t), omega);
  EXPECT_EQ(*scaled.exact, Rational(-16) * t * t * t * t);
  Patch big = patch;
  big.hi[0] = 2;
  EXPECT_EQ(*hitchin_functional(big, constant_field(normal_form<Rational>(SpTag::O_plus, Rational(1))), omega).exact, 8);
}
