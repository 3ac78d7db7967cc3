#pragma once

#include "threeform/classify.hpp"
#include "threeform/field.hpp"
#include "threeform/hitchin.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <variant>

namespace threeform {

using json = nlohmann::json;

class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A form read from the shared schema, in whichever backend it declared.
using AnyForm = std::variant<Form<Rational>, Form<double>>;

AnyForm form_from_json(const json& j);
json form_to_json(const Form<Rational>& f);
json form_to_json(const Form<double>& f);
/// Forms over Q(√d): rational parts as strings when the surd parts vanish,
/// otherwise "a + b*sqrt(d)" strings under backend "surd".
json form_to_json(const Form<QuadSurd>& f);

std::string scalar_string(const Rational& x);
std::string scalar_string(const QuadSurd& x);
json scalar_json(const Rational& x);
json scalar_json(double x);

template <class S>
json matrix_json(const Matrix<S>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<S, double>)
        row.push_back(m(i, j));
      else
        row.push_back(scalar_string(m(i, j)));
    }
    rows.push_back(row);
  }
  return rows;
}

inline json signature_json(const Signature& s) { return json::array({s.zeros, s.positives, s.negatives}); }

template <class S>
json q_to_json(const SymBilinear<S>& q) {
  return {{"matrix", matrix_json(q.matrix)}, {"signature", signature_json(q.signature)}};
}

template <class S>
json mu_json(const std::optional<MuValue<S>>& mu) {
  if (!mu) return nullptr;
  if constexpr (std::is_same_v<S, double>) {
    return mu->approx;
  } else {
    if (mu->exact) return scalar_string(*mu->exact);
    return mu->approx;
  }
}

/// {"gl","sp":{"tag","mu"},"Q","dims","signature"}; Q trivialized by ω³/3!.
template <class S>
json classification_json(const SymplecticFrame<S>& frame, const Form<S>& phi, double tol = kRankTolerance) {
  json out;
  out["gl"] = tag_name(gl_classify(phi, tol));
  SpOrbit<S> sp = sp_classify(frame, phi, tol);
  out["sp"] = {{"tag", tag_name(sp.tag)}, {"mu", mu_json(sp.mu)}};
  if (sp.mu) out["sp"]["mu4"] = scalar_json(sp.mu->fourth_power);
  out["Q"] = scalar_json(frame.trivialize(Q_of(phi)));
  auto d = subspace_profile(phi, tol).dims();
  out["dims"] = json::array({d[0], d[1], d[2], d[3]});
  out["signature"] = signature_json(q_of(frame, phi, tol).signature);
  return out;
}

json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const json& j);

/// Field schema: {"grade","terms":[{"indices","coeff"}]} where coeff is a
/// polynomial term list, a rational string, or {"expr": "..."} for the
/// built-in closed forms.
json field_to_json(const FormField& f, const std::array<std::string, kDim>& names);
FormField field_from_json(const json& j, const std::array<std::string, kDim>& names);

}  // namespace threeform
