#include "threeform/polynomial.hpp"

#include <stdexcept>

namespace threeform {

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_[Monomial{}] = c;
}

Polynomial Polynomial::variable(int axis) {
  Monomial m{};
  m[axis] = 1;
  return monomial(m);
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
  Polynomial p;
  p.add_term(m, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{});
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (auto e : m) s += e;
    d = std::max(d, s);
  }
  return d;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::derivative(int axis) const {
  Polynomial r;
  for (const auto& [m, c] : terms_) {
    if (m[axis] == 0) continue;
    Monomial d = m;
    --d[axis];
    r.add_term(d, c * m[axis]);
  }
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  Polynomial r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m;
      for (int i = 0; i < kDim; ++i) m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
      r.add_term(m, ca * cb);
    }
  terms_ = std::move(r.terms_);
  return *this;
}

Polynomial& Polynomial::operator/=(const Polynomial& o) {
  if (!o.is_constant() || o.is_zero()) throw std::domain_error("polynomial division by a non-constant or zero");
  Rational inv = 1 / o.constant_term();
  for (auto& [m, c] : terms_) c *= inv;
  return *this;
}

std::string Polynomial::str(const std::array<std::string, kDim>& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    std::string mono;
    for (int i = 0; i < kDim; ++i) {
      if (m[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names[i];
      if (m[i] > 1) mono += "^" + std::to_string(m[i]);
    }
    Rational a = c < 0 ? Rational(-c) : c;
    std::string coef = format_rational(a);
    if (coef.find('/') != std::string::npos) coef = "(" + coef + ")";
    std::string term = mono.empty() ? coef : (a == 1 ? mono : coef + "*" + mono);
    if (out.empty())
      out = (c < 0 ? "-" : "") + term;
    else
      out += (c < 0 ? " - " : " + ") + term;
  }
  return out;
}

}  // namespace threeform
