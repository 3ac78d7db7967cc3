#include "threeform/json_io.hpp"

#include "threeform/expr.hpp"

namespace threeform {

namespace {

[[noreturn]] void fail(const std::string& what) { throw SchemaError("form JSON: " + what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) fail("expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key \"") + key + "\"");
  return *it;
}

int read_grade(const json& j) {
  const json& g = field(j, "grade");
  if (!g.is_number_integer()) fail("grade must be an integer");
  int grade = g.get<int>();
  if (grade < 0 || grade > kDim) fail("grade out of range 0..6");
  return grade;
}

// Blade rank and sign for a term's index list; rejects repeats and a length
// that disagrees with the grade.
std::pair<int, int> read_indices(const json& t, int grade) {
  const json& idx = field(t, "indices");
  if (!idx.is_array()) fail("indices must be an array");
  std::vector<int> v;
  for (const json& i : idx) {
    if (!i.is_number_integer()) fail("indices must be integers");
    int k = i.get<int>();
    if (k < 1 || k > kDim) fail("index " + std::to_string(k) + " out of range 1..6");
    v.push_back(k);
  }
  if (static_cast<int>(v.size()) != grade)
    fail("term has " + std::to_string(v.size()) + " indices but grade is " + std::to_string(grade));
  auto [m, sign] = blade_from_indices(v);
  if (sign == 0) fail("repeated index in " + idx.dump());
  return {blade_rank(m), sign};
}

Rational read_rational(const json& c) {
  if (c.is_number_integer()) return Rational(c.get<long>());
  if (!c.is_string()) fail("rational coefficients must be \"p/q\" strings");
  try {
    return parse_rational(c.get<std::string>());
  } catch (const std::exception& e) {
    fail(std::string("bad rational coefficient: ") + e.what());
  }
}

}  // namespace

std::string scalar_string(const Rational& x) { return format_rational(x); }

std::string scalar_string(const QuadSurd& x) { return x.is_rational() ? format_rational(x.rational_part()) : x.str(); }

json scalar_json(const Rational& x) { return scalar_string(x); }
json scalar_json(double x) { return x; }

AnyForm form_from_json(const json& j) {
  int grade = read_grade(j);
  const json& backend = field(j, "backend");
  if (!backend.is_string()) fail("backend must be a string");
  const std::string b = backend.get<std::string>();
  if (b != "rational" && b != "float") fail("backend must be \"rational\" or \"float\", got \"" + b + "\"");
  const json& terms = field(j, "terms");
  if (!terms.is_array()) fail("terms must be an array");

  auto fill = [&](auto& form, auto read) {
    std::vector<bool> seen(form.size(), false);
    for (const json& t : terms) {
      auto [rank, sign] = read_indices(t, grade);
      if (seen[rank]) fail("two terms name the same blade");
      seen[rank] = true;
      auto c = read(field(t, "coeff"));
      form[rank] = sign > 0 ? c : -c;
    }
  };
  if (b == "rational") {
    Form<Rational> f(grade);
    fill(f, read_rational);
    return f;
  }
  Form<double> f(grade);
  fill(f, [](const json& c) {
    if (!c.is_number()) fail("float coefficients must be JSON numbers");
    return c.get<double>();
  });
  return f;
}

namespace {

template <class S, class Coef>
json form_json(const Form<S>& f, const char* backend, Coef coef) {
  json terms = json::array();
  for (const auto& t : f.terms()) terms.push_back({{"indices", blade_indices(t.blade)}, {"coeff", coef(t.coeff)}});
  return {{"grade", f.grade()}, {"backend", backend}, {"terms", terms}};
}

}  // namespace

json form_to_json(const Form<Rational>& f) {
  return form_json(f, "rational", [](const Rational& c) { return format_rational(c); });
}

json form_to_json(const Form<double>& f) {
  return form_json(f, "float", [](double c) { return c; });
}

json form_to_json(const Form<QuadSurd>& f) {
  bool rational = true;
  for (int r = 0; r < f.size(); ++r) rational = rational && f[r].is_rational();
  return form_json(f, rational ? "rational" : "surd", [](const QuadSurd& c) { return scalar_string(c); });
}

json polynomial_to_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& [m, c] : p.terms()) {
    json exps = json::array();
    for (auto e : m) exps.push_back(static_cast<int>(e));
    out.push_back({{"monomial", exps}, {"coeff", format_rational(c)}});
  }
  return out;
}

Polynomial polynomial_from_json(const json& j) {
  if (!j.is_array()) fail("a polynomial is an array of monomial terms");
  Polynomial p;
  for (const json& t : j) {
    const json& exps = field(t, "monomial");
    if (!exps.is_array() || exps.size() != kDim) fail("monomial needs 6 exponents");
    Monomial m{};
    for (int i = 0; i < kDim; ++i) {
      if (!exps[i].is_number_integer() || exps[i].get<int>() < 0 || exps[i].get<int>() > 255)
        fail("exponents must be integers in 0..255");
      m[i] = static_cast<std::uint8_t>(exps[i].get<int>());
    }
    p += Polynomial::monomial(m, read_rational(field(t, "coeff")));
  }
  return p;
}

json field_to_json(const FormField& f, const std::array<std::string, kDim>& names) {
  json terms = json::array();
  bool poly = true;
  for (const auto& t : f.terms()) {
    json coeff;
    if (t.coeff.is_polynomial()) {
      coeff = polynomial_to_json(t.coeff.polynomial());
    } else {
      poly = false;
      coeff = {{"expr", t.coeff.description(names)}};
    }
    terms.push_back({{"indices", blade_indices(t.blade)}, {"coeff", coeff}});
  }
  return {{"grade", f.grade()}, {"backend", poly ? "polynomial" : "numeric"}, {"terms", terms}};
}

FormField field_from_json(const json& j, const std::array<std::string, kDim>& names) {
  int grade = read_grade(j);
  const json& terms = field(j, "terms");
  if (!terms.is_array()) fail("terms must be an array");
  FormField f(grade);
  for (const json& t : terms) {
    auto [rank, sign] = read_indices(t, grade);
    const json& c = field(t, "coeff");
    CoefField v;
    if (c.is_array()) {
      v = CoefField(polynomial_from_json(c));
    } else if (c.is_object()) {
      const json& e = field(c, "expr");
      if (!e.is_string()) fail("expr must be a string");
      try {
        v = CoefField::parse(e.get<std::string>(), names);
      } catch (const std::exception& ex) {
        fail(std::string("bad expression: ") + ex.what());
      }
    } else {
      v = CoefField(read_rational(c));
    }
    f[rank] += sign > 0 ? v : -v;
  }
  return f;
}

}  // namespace threeform
