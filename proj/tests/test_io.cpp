#include "threeform/geometry.hpp"
#include "threeform/json_io.hpp"
#include "threeform/random.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace threeform;

namespace {

using F = Form<Rational>;

json parse(const char* text) { return json::parse(text); }

}  // namespace

TEST(FormJson, ReadsSignedTerms) {
  auto any = form_from_json(parse(R"({"grade":3,"backend":"rational","terms":[
      {"indices":[1,4,6],"coeff":"1"},{"indices":[3,6,2],"coeff":1},{"indices":[5,2,4],"coeff":"1/2"}]})"));
  F f = std::get<F>(any);
  EXPECT_EQ(f, F::basis({1, 4, 6}) + F::basis({2, 3, 6}) + F::basis({2, 4, 5}) * Rational(1, 2));
  auto fl = form_from_json(parse(R"({"grade":1,"backend":"float","terms":[{"indices":[2],"coeff":0.25}]})"));
  EXPECT_EQ(std::get<Form<double>>(fl), Form<double>::basis({2}, 0.25));
}

TEST(FormJson, RoundTrip) {
  SplitMix64 rng(81);
  for (int n = 0; n < 200; ++n) {
    F f = random_form(rng, static_cast<int>(rng.range(0, 6)));
    ASSERT_EQ(std::get<F>(form_from_json(form_to_json(f))), f);
    ASSERT_EQ(std::get<F>(form_from_json(json::parse(form_to_json(f).dump()))), f);
    auto d = f.map([](const Rational& x) { return to_double(x); });
    ASSERT_EQ(std::get<Form<double>>(form_from_json(form_to_json(d))), d);
  }
}

TEST(FormJson, SchemaErrors) {
  const char* bad[] = {
      R"({"grade":3,"backend":"rational","terms":[{"indices":[1,1,2],"coeff":"1"}]})",
      R"({"grade":7,"backend":"rational","terms":[]})",
      R"({"grade":"3","backend":"rational","terms":[]})",
      R"({"grade":3,"backend":"complex","terms":[]})",
      R"({"grade":3,"backend":"rational","terms":[{"indices":[1,2,3],"coeff":0.5}]})",
      R"({"grade":3,"backend":"rational","terms":[{"indices":[1,2],"coeff":"1"}]})",
      R"({"grade":3,"backend":"rational","terms":[{"indices":[1,2,7],"coeff":"1"}]})",
      R"({"grade":3,"backend":"rational","terms":[{"indices":[1,2,3],"coeff":"1/0"}]})",
      R"({"grade":3,"backend":"rational","terms":[{"indices":[1,2,3],"coeff":"1"},{"indices":[2,1,3],"coeff":"1"}]})",
      R"({"grade":3,"backend":"float","terms":[{"indices":[1,2,3],"coeff":"1"}]})",
      R"({"grade":3,"terms":[]})",
      R"([1,2,3])",
  };
  for (const char* text : bad) EXPECT_THROW(form_from_json(parse(text)), SchemaError) << text;
}

TEST(FormJson, SurdBackend) {
  EXPECT_EQ(form_to_json(Form<QuadSurd>::basis({1, 2, 3}))["backend"], "rational");
  // a generic form with Q < 0 whose √(−λ) is irrational
  SplitMix64 rng(86);
  for (int n = 0; n < 2000; ++n) {
    F phi = random_form(rng, 3, 0.7);
    if (Q_of(phi).value >= 0) continue;
    auto p = hitchin_package(phi);
    if (p.sqrt_neg_lambda.is_rational()) continue;
    json j = form_to_json(p.phi_hat);
    EXPECT_EQ(j["backend"], "surd");
    EXPECT_NE(j.dump().find("sqrt"), std::string::npos);
    return;
  }
  FAIL() << "no irrational case found";
}

TEST(PolynomialJson, RoundTrip) {
  SplitMix64 rng(82);
  for (int n = 0; n < 200; ++n) {
    Polynomial p = random_polynomial(rng, 3, 5);
    ASSERT_EQ(polynomial_from_json(polynomial_to_json(p)), p);
  }
  EXPECT_THROW(polynomial_from_json(parse(R"({"monomial":[1]})")), SchemaError);
}

TEST(FieldJson, RoundTrip) {
  SplitMix64 rng(83);
  for (int n = 0; n < 50; ++n) {
    FormField f = random_form_field(rng, 3, 2, 3);
    ASSERT_EQ(field_from_json(field_to_json(f, kTorusNames), kTorusNames), f);
  }
}

TEST(ClassificationJson, Fields) {
  auto frame = SymplecticFrame<Rational>::standard();
  json j = classification_json(frame, normal_form<Rational>(SpTag::O_minus_plus, Rational(2)));
  EXPECT_EQ(j["sp"]["tag"], "O-+");
  EXPECT_EQ(j["Q"], "-256");
  EXPECT_EQ(j["dims"], json::array({0, 0, 6, 6}));
  EXPECT_EQ(j["signature"], json::array({0, 6, 0}));
  json z = classification_json(frame, normal_form<Rational>(SpTag::O_0_plus));
  EXPECT_EQ(z["sp"]["tag"], "O0+");
  EXPECT_EQ(z["Q"], "0");
}

// Reference outputs of the SplitMix64 algorithm
TEST(SplitMix64, ReferenceSequence) {
  SplitMix64 a(0);
  EXPECT_EQ(a(), 0xe220a8397b1dcdafull);
  EXPECT_EQ(a(), 0x6e789e6aa1b965f4ull);
  EXPECT_EQ(a(), 0x06c45d188009454full);
  SplitMix64 b(1234567);
  EXPECT_EQ(b(), 0x599ed017fb08fc85ull);
  EXPECT_EQ(b(), 0x2c73f08458540fa5ull);
  EXPECT_EQ(b(), 0x883ebce5a3f27c77ull);
}

TEST(SplitMix64, BoundedDraws) {
  SplitMix64 rng(84);
  std::set<std::uint64_t> seen;
  for (int n = 0; n < 10000; ++n) {
    auto x = rng.below(7);
    ASSERT_LT(x, 7u);
    seen.insert(x);
    long r = rng.range(-3, 3);
    ASSERT_GE(r, -3);
    ASSERT_LE(r, 3);
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_FALSE(rng.chance(0));
  EXPECT_TRUE(rng.chance(1));
}

TEST(SplitMix64, SplitIsDeterministic) {
  SplitMix64 a(85), b(85);
  SplitMix64 ca = a.split(), cb = b.split();
  for (int n = 0; n < 10; ++n) ASSERT_EQ(ca(), cb());
  EXPECT_EQ(a(), b());
  SplitMix64 parent(85);
  SplitMix64 child = parent.split();
  EXPECT_NE(child(), parent());
}
