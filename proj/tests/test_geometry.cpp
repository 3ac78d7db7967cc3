#include "threeform/geometry.hpp"
#include "threeform/random.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace threeform;

namespace {

using F = Form<Rational>;

Matrix<double> diag(double a, double b, double c) {
  Matrix<double> m = Matrix<double>::identity(3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

double det3(const Matrix<double>& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// f(r) written as the cube root of 1 + C r^{-3/2}; it solves f²(f + 2rf′) = 1
double f_oracle(double r, double C) { return std::cbrt(1 + C * std::pow(r, -1.5)); }

struct Lambda2Case {
  Matrix<double> g;
  double C;
};

const std::vector<Lambda2Case> kLambda2{{diag(1, 1, 1), 0}, {diag(1, 1, 1), 1}, {diag(1, 2, 3), 1}, {diag(1, 1, 1), -1}};

VectorField leaf_field(SplitMix64& rng, const LeafChart& chart) {
  VectorField v;
  v.fill(CoefField(0));
  for (int i : chart.leaf) v[i] = CoefField(random_polynomial(rng, 1, 2) + Polynomial(Rational(1)));
  return v;
}

const std::vector<std::string> kK3Choices{"1 + (x2^2 + y2^2)/4", "2 + x2", "3 + x2*y2 - y2^2/2"};

}  // namespace

TEST(Torus, LeafMetricAndParallelFrame) {
  DegenerationFamily fam = torus_family(Rational(1, 4), 2);
  FormField phi = fam.phi_0_field();
  check_chart(fam.chart, phi);
  for (const ExactPoint& p : fam.chart.patch.grid_points_exact()) {
    EXPECT_EQ(leaf_metric_matrix(fam.chart, phi, p), Matrix<Rational>::identity(3) * Rational(1, 2));
    auto basis = foliation_basis(phi, fam.omega_field(), p);
    ASSERT_EQ(basis.size(), 3u);
    std::vector<std::vector<Rational>> leaf;
    for (int i : fam.chart.leaf) {
      std::vector<Rational> v(6, Rational(0));
      v[i] = 1;
      leaf.push_back(v);
    }
    EXPECT_TRUE(same_span(as_rows(basis), leaf, 6));
  }
  auto V = d_parallel_frame(fam.chart, phi);
  for (int j = 0; j < 3; ++j) {
    VectorField expected = coordinate_field(fam.chart.leaf[j]);
    expected[fam.chart.leaf[j]] = CoefField(-2);
    EXPECT_EQ(V[j], expected);
  }
}

TEST(Torus, FamilyDomain) {
  EXPECT_THROW(torus_family(Rational(0)), std::domain_error);
  EXPECT_THROW(torus_family(Rational(3, 2)), std::domain_error);
  EXPECT_EQ(Q_of(torus_phi(Rational(1, 2))).value, -4);
}

TEST(Foliation, RejectsOtherOrbits) {
  FormField omega = constant_field(SymplecticFrame<Rational>::standard_omega());
  ExactPoint p{};
  EXPECT_THROW(foliation_basis(constant_field(torus_phi(Rational(1))), omega, p), std::domain_error);
}

TEST(Foliation, LeavesAreLagrangianAndMetricIsSymmetric) {
  for (const auto& text : kK3Choices) {
    K3PatchExample ex = k3_patch(CoefField::parse(text, kK3Names), 2);
    Form<Rational> w = value_at(ex.omega, ExactPoint{});
    for (const ExactPoint& p : ex.chart.patch.grid_points_exact()) {
      auto basis = foliation_basis(ex.phi, ex.omega, p);
      ASSERT_EQ(basis.size(), 3u);
      for (const auto& a : basis)
        for (const auto& b : basis) ASSERT_EQ(evaluate(w, {a, b}), 0);
      Matrix<Rational> g = leaf_metric_matrix(ex.chart, ex.phi, p);
      ASSERT_EQ(g, g.transpose());
    }
  }
}

TEST(K3Patch, LeafMetric) {
  for (const auto& text : kK3Choices) {
    K3PatchExample ex = k3_patch(CoefField::parse(text, kK3Names), 3);
    check_chart(ex.chart, ex.phi);
    for (const ExactPoint& p : ex.chart.patch.grid_points_exact()) {
      Rational fv = ex.f.value(p);
      Matrix<Rational> expected(3, 3);
      expected(0, 0) = expected(1, 1) = Rational(1) / (2 * fv);
      expected(2, 2) = Rational(1, 2);
      ASSERT_EQ(leaf_metric_matrix(ex.chart, ex.phi, p), expected) << text;
      ASSERT_EQ(F_of(value_at(ex.phi, p)).form, value_at(ex.F_expected(), p));
    }
  }
}

TEST(K3Patch, Errors) {
  EXPECT_THROW(k3_patch(CoefField::parse("x2 - 1/2", kK3Names)), std::domain_error);
  K3PatchExample ex = k3_patch(CoefField(1));
  FormField bent = ex.phi + FormField::basis({1, 2, 5}, CoefField(Polynomial::variable(3)));
  EXPECT_ANY_THROW(hessian_data(ex.chart, bent));
}

TEST(Duality, ExactOnPolynomialExamples) {
  SplitMix64 rng(71);
  DegenerationFamily fam = torus_family(Rational(1, 4), 2);
  K3PatchExample k3 = k3_patch(CoefField::parse(kK3Choices[0], kK3Names), 2);
  for (int n = 0; n < 3; ++n) {
    for (auto [chart, phi] : {std::pair{fam.chart, fam.phi_0_field()}, std::pair{k3.chart, k3.phi}}) {
      VectorField x = leaf_field(rng, chart), y = leaf_field(rng, chart), z = leaf_field(rng, chart);
      for (const ExactPoint& p : chart.patch.grid_points_exact())
        ASSERT_EQ(duality_residual(chart, phi, x, y, z, p), 0);
    }
  }
}

TEST(Lambda2, ProfileFunction) {
  for (const auto& c : kLambda2) {
    Lambda2Example ex = lambda2_build(c.g, c.C, 1.0, 2);
    EXPECT_NEAR(ex.det_g, det3(c.g), 1e-14);
    for (const Point& p : ex.chart.patch.grid_points()) {
      double r = ex.r(p);
      ASSERT_NEAR(ex.f(r), f_oracle(r, c.C), 1e-13);
      double h = 1e-5 * r;
      double fp = (f_oracle(r + h, c.C) - f_oracle(r - h, c.C)) / (2 * h);
      ASSERT_NEAR(ex.f_prime(r), fp, 1e-8);
    }
    Lambda2Checks chk = lambda2_checks(ex);
    EXPECT_LE(chk.f_equation, 1e-12);
    EXPECT_LE(chk.F_residual, 1e-10);
    EXPECT_LE(chk.basic_residual, 1e-12);
    EXPECT_TRUE(chk.d_alpha_primitive);
  }
}

TEST(Lambda2, HessianMetricAndScalarCurvature) {
  for (const auto& c : kLambda2) {
    Lambda2Example ex = lambda2_build(c.g, c.C, 1.0, 2);
    auto V = d_parallel_frame(ex.chart, ex.phi);
    for (const Point& p : ex.chart.patch.grid_points()) {
      LeafHessian<double> lh = leaf_hessian(ex.chart, ex.phi, p);
      Matrix<double> he = ex.h_expected(p);
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) ASSERT_NEAR(lh.h(j, k), he(j, k), 1e-8 * (1 + std::abs(he(j, k))));
      // det h = 8 det g whatever C is
      ASSERT_NEAR(lh.det_h, 8 * ex.det_g, 1e-8 * ex.det_g);
      ASSERT_NEAR(lh.scalar, ex.S_expected(p), 1e-6 * (1 + ex.S_expected(p)));
      ASSERT_NEAR(lh.scalar, lh.scalar_from_norm, 1e-6 * (1 + std::abs(lh.scalar)));
      if (c.C == 0) ASSERT_NEAR(lh.scalar, 0, 1e-8);
      for (int j = 0; j < 3; ++j) {
        Vec6<double> v = value_at(V[j], p), ve = ex.V_expected(j, p);
        for (int i = 0; i < kDim; ++i) ASSERT_NEAR(v[i], ve[i], 1e-9 * (1 + std::abs(ve[i])));
      }
    }
  }
}

TEST(Lambda2, ConnectionLaws) {
  SplitMix64 rng(72);
  for (const auto& c : kLambda2) {
    Lambda2Example ex = lambda2_build(c.g, c.C, 1.0, 2);
    VectorField x = leaf_field(rng, ex.chart), y = leaf_field(rng, ex.chart);
    CoefField f(random_polynomial(rng, 1, 3));
    for (const Point& p : ex.chart.patch.grid_points()) {
      ConnectionLaws laws = connection_laws(ex.chart, ex.phi, x, y, f, p);
      ASSERT_LE(laws.function_linear, 1e-8);
      ASSERT_LE(laws.leibniz, 1e-8);
      ASSERT_LE(laws.torsion, 1e-8);
      ASSERT_LE(d_frame_curvature(ex.chart, ex.phi, p), 1e-8);
    }
    LeafGeometry geo = hessian_data(ex.chart, ex.phi);
    EXPECT_LE(geo.h3_asymmetry, 1e-8);
    EXPECT_LE(geo.det_h_drift, 1e-8);
  }
}

TEST(Lambda2, Errors) {
  Matrix<double> bad = diag(1, -1, 1);
  EXPECT_THROW(lambda2_build(bad, 1), std::invalid_argument);
  Matrix<double> asym = diag(1, 1, 1);
  asym(0, 1) = 0.5;
  EXPECT_THROW(lambda2_build(asym, 1), std::invalid_argument);
  // at the corner t = (1,1,1) r = 1, so r^{3/2} + C vanishes there
  EXPECT_THROW(lambda2_build(diag(1, 2, 3), -1, 1.0), std::domain_error);
  EXPECT_NO_THROW(lambda2_build(diag(1, 2, 3), -1, 1.5));
}

TEST(Fibration, TorusPeriodsAndBaseMetric) {
  DegenerationFamily fam = torus_family(Rational(1, 4), 2);
  FibrationData fd = fibration_analysis(fam, fam.phi_0_field());
  Matrix<double> id = Matrix<double>::identity(3);
  EXPECT_LE(max_abs(fd.lambda_period + id), 1e-10);
  EXPECT_LE(max_abs(fd.g_B - id * (1 / std::sqrt(2.0))), 1e-10);
  for (double v : fd.fiber_volume) EXPECT_NEAR(v, std::pow(2.0, -1.5), 1e-10);
  EXPECT_LE(fd.isometry_residual, 1e-10);
  EXPECT_TRUE(fd.lambda_invertible);
  EXPECT_TRUE(fd.g_B_positive);
  EXPECT_TRUE(fd.monge_ampere);
  EXPECT_TRUE(fd.xi_closed);
  EXPECT_TRUE(fd.harmonic);
}
