#include "oracle.hpp"
#include "threeform/random.hpp"

#include <gtest/gtest.h>

using namespace threeform;

namespace {

using F = Form<Rational>;

F e(std::initializer_list<int> idx) { return F::basis(idx); }

Vec6<Rational> unit(int i) { return unit_vec<Rational>(i); }

}  // namespace

TEST(Wedge, BasisProducts) {
  EXPECT_EQ(wedge(e({1}), e({2})), e({1, 2}));
  EXPECT_TRUE(wedge(e({1, 2}), e({1, 2})).is_zero());
  EXPECT_EQ(wedge(e({1, 3, 5}), e({2, 4, 6})), -e({1, 2, 3, 4, 5, 6}));
}

TEST(Wedge, OverflowIsZeroTopForm) {
  F w = wedge(e({1, 2, 3, 4}), e({1, 2, 3}));
  EXPECT_TRUE(w.overflow());
  EXPECT_TRUE(w.is_zero());
}

TEST(Wedge, MatchesPermutationSum) {
  SplitMix64 rng(11);
  for (int n = 0; n < 300; ++n) {
    int p = static_cast<int>(rng.range(0, 6));
    int q = static_cast<int>(rng.range(0, 6 - p));
    F a = random_form(rng, p), b = random_form(rng, q);
    ASSERT_EQ(wedge(a, b), oracle::to_form(oracle::wedge(oracle::from_form(a), oracle::from_form(b))))
        << to_string(a) << " ^ " << to_string(b);
  }
}

TEST(Wedge, GradedCommutativity) {
  SplitMix64 rng(12);
  for (int n = 0; n < 1000; ++n) {
    int p = static_cast<int>(rng.range(0, 6));
    int q = static_cast<int>(rng.range(0, 6 - p));
    F a = random_form(rng, p), b = random_form(rng, q);
    F ab = wedge(a, b), ba = wedge(b, a);
    ASSERT_EQ(ab, (p * q) % 2 ? F(-ba) : ba);
  }
}

TEST(Wedge, Associative) {
  SplitMix64 rng(13);
  for (int n = 0; n < 300; ++n) {
    F a = random_form(rng, 1), b = random_form(rng, 2), c = random_form(rng, 2);
    ASSERT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
  }
}

TEST(Interior, SlotSigns) {
  EXPECT_EQ(interior(unit(0), e({1, 2, 3})), e({2, 3}));
  EXPECT_EQ(interior(unit(1), e({1, 2, 3})), -e({1, 3}));
  // φ₀ in Darboux letters: dxʲ = e^{2j−1}, dyʲ = e^{2j}
  F phi0 = e({1, 4, 6}) + e({3, 6, 2}) + e({5, 2, 4});
  EXPECT_EQ(interior(unit(0), phi0), e({4, 6}));
}

TEST(Interior, MatchesContraction) {
  SplitMix64 rng(14);
  for (int n = 0; n < 300; ++n) {
    int k = static_cast<int>(rng.range(1, 6));
    F a = random_form(rng, k);
    Vec6<Rational> v = random_vector(rng);
    ASSERT_EQ(interior(v, a), oracle::to_form(oracle::interior(v, oracle::from_form(a))));
  }
}

TEST(Interior, Antiderivation) {
  SplitMix64 rng(15);
  for (int n = 0; n < 1000; ++n) {
    int p = static_cast<int>(rng.range(1, 5));
    int q = static_cast<int>(rng.range(1, 6 - p));
    F a = random_form(rng, p), b = random_form(rng, q);
    Vec6<Rational> v = random_vector(rng);
    F rhs = wedge(interior(v, a), b);
    F second = wedge(a, interior(v, b));
    rhs += p % 2 ? F(-second) : second;
    ASSERT_EQ(interior(v, wedge(a, b)), rhs);
  }
}

TEST(Interior, SquaresToZero) {
  SplitMix64 rng(16);
  for (int n = 0; n < 200; ++n) {
    F a = random_form(rng, static_cast<int>(rng.range(2, 6)));
    Vec6<Rational> v = random_vector(rng), w = random_vector(rng);
    ASSERT_TRUE(interior(v, interior(v, a)).is_zero());
    ASSERT_EQ(interior(v, interior(w, a)), -interior(w, interior(v, a)));
  }
}

TEST(Pullback, Examples) {
  SplitMix64 rng(17);
  F a = random_form(rng, 3);
  EXPECT_EQ(pullback(Matrix<Rational>::identity(6), a), a);
  Matrix<Rational> d = Matrix<Rational>::identity(6);
  d(0, 0) = 2;
  EXPECT_EQ(pullback(d, e({1, 2, 3})), 2 * e({1, 2, 3}));
  Matrix<Rational> m = random_gl(rng);
  EXPECT_EQ(pullback(m, reference_volume<Rational>()), reference_volume<Rational>() * determinant(m));
}

TEST(Pullback, DefiningPropertyAndFunctoriality) {
  SplitMix64 rng(18);
  for (int n = 0; n < 1000; ++n) {
    int k = static_cast<int>(rng.range(1, 4));
    F a = random_form(rng, k);
    Matrix<Rational> A = random_gl(rng), B = random_gl(rng);
    std::vector<Vec6<Rational>> vs, mvs;
    for (int i = 0; i < k; ++i) {
      vs.push_back(random_vector(rng));
      mvs.push_back(threeform::apply(A, vs.back()));
    }
    F pa = pullback(A, a);
    ASSERT_EQ(evaluate(pa, vs), evaluate(a, mvs));
    ASSERT_EQ(pullback(A * B, a), pullback(B, pa));
    if (n < 100) ASSERT_EQ(pa, oracle::to_form(oracle::pullback(A, oracle::from_form(a))));
  }
}

TEST(Pullback, CommutesWithWedge) {
  SplitMix64 rng(19);
  for (int n = 0; n < 200; ++n) {
    F a = random_form(rng, 2), b = random_form(rng, 3);
    Matrix<Rational> m = random_gl(rng);
    ASSERT_EQ(pullback(m, wedge(a, b)), wedge(pullback(m, a), pullback(m, b)));
  }
}

TEST(Evaluate, MatchesOracle) {
  SplitMix64 rng(20);
  for (int n = 0; n < 200; ++n) {
    F a = random_form(rng, 3);
    std::vector<Vec6<Rational>> vs{random_vector(rng), random_vector(rng), random_vector(rng)};
    ASSERT_EQ(evaluate(a, vs), oracle::evaluate(oracle::from_form(a), vs));
  }
}

TEST(FiveToVector, Examples) {
  EXPECT_EQ(five_to_vector(e({2, 3, 4, 5, 6})), unit(0));
  Vec6<Rational> minus_e4 = zero_vec<Rational>();
  minus_e4[3] = -1;
  EXPECT_EQ(five_to_vector(e({1, 2, 3, 5, 6})), minus_e4);
  EXPECT_EQ(five_to_vector(F(5)), zero_vec<Rational>());
  EXPECT_THROW(five_to_vector(e({1, 2, 3})), std::invalid_argument);
}

TEST(FiveToVector, InvertsInteriorOfVolume) {
  SplitMix64 rng(21);
  F vol = reference_volume<Rational>();
  for (int n = 0; n < 1000; ++n) {
    Vec6<Rational> v = random_vector(rng);
    ASSERT_EQ(five_to_vector(interior(v, vol)), v);
    F a = random_form(rng, 5);
    ASSERT_EQ(interior(five_to_vector(a), vol), a);
    ASSERT_EQ(five_to_vector(a), oracle::five_to_vector(oracle::from_form(a)));
  }
}

TEST(Kernel, Examples) {
  auto k = kernel(e({1, 3, 5}));
  EXPECT_EQ(k.size(), 3u);
  std::vector<std::vector<Rational>> expected;
  for (int i : {1, 3, 5}) {
    auto u = unit(i);
    expected.emplace_back(u.begin(), u.end());
  }
  EXPECT_TRUE(same_span(as_rows(k), expected, 6));
  EXPECT_EQ(kernel(e({1, 2, 3}) + e({4, 5, 6})).size(), 0u);
  EXPECT_EQ(kernel(F(3)).size(), 6u);
}

TEST(Kernel, DimensionsOfThreeFormsAreCatalogued) {
  SplitMix64 rng(22);
  std::vector<F> seeds{e({1, 3, 5}), e({1, 3, 5}) + e({2, 4, 5}), e({1, 4, 6}) + e({2, 3, 6}) + e({2, 4, 5}),
                       e({1, 2, 3}) + e({4, 5, 6}), F(3)};
  for (int n = 0; n < 1000; ++n) {
    F phi = n % 2 ? random_form(rng, 3) : pullback(random_gl(rng), seeds[n / 2 % seeds.size()]);
    std::size_t dim = kernel(phi).size();
    ASSERT_TRUE(dim == 0 || dim == 1 || dim == 3 || dim == 6) << to_string(phi) << " dim " << dim;
    for (auto& v : kernel(phi)) ASSERT_TRUE(interior(v, phi).is_zero());
  }
}

TEST(Annihilator, Examples) {
  auto a = annihilator(e({1, 3, 5}));
  EXPECT_EQ(a.covectors.size(), 3u);
  EXPECT_EQ(a.perp.size(), 3u);
  auto b = annihilator(e({1, 2, 3}) + e({4, 5, 6}));
  EXPECT_EQ(b.covectors.size(), 0u);
  EXPECT_EQ(b.perp.size(), 6u);
  auto z = annihilator(F(3));
  EXPECT_EQ(z.covectors.size(), 6u);
  EXPECT_EQ(z.perp.size(), 0u);
}

TEST(Form, Errors) {
  EXPECT_THROW(F(7), std::invalid_argument);
  EXPECT_THROW(e({1, 2}) + e({1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(F::basis({1, 2, 3, 4, 5, 6, 1}), std::invalid_argument);
  EXPECT_THROW(F::basis({0, 1}), std::out_of_range);
  EXPECT_TRUE(F::basis({2, 2, 3}).is_zero());
  EXPECT_EQ(F::basis({2, 1}), -e({1, 2}));
}

TEST(Form, FloatBackendAgreesWithExact) {
  SplitMix64 rng(23);
  for (int n = 0; n < 200; ++n) {
    F a = random_form(rng, 2), b = random_form(rng, 3);
    auto ad = a.map([](const Rational& x) { return to_double(x); });
    auto bd = b.map([](const Rational& x) { return to_double(x); });
    auto exact = wedge(a, b);
    auto approx = wedge(ad, bd);
    for (int r = 0; r < exact.size(); ++r) ASSERT_NEAR(approx[r], to_double(exact[r]), 1e-12);
  }
}
